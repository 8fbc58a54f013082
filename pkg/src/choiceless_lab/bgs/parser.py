"""Concrete syntax for set-machine program files.

Header lines (before the body):

    #steps <c0> <c1> ...       step budget polynomial, low degree first
    #active <c0> <c1> ...      active-element budget polynomial
    #requires card             enables the cardinality builtin

Body grammar (keywords are reserved):

    rule  := "skip"
           | lhs ":=" term
           | "if" term "then" rule ["else" rule] "endif"
           | "do" "forall" NAME "in" term "," rule "enddo"
           | "do" "in" "parallel" rule {";" rule} [";"] "enddo"
    lhs   := NAME ["(" term {"," term} ")"]
    term  := disjunction with infix "or" / "and", prefix "not",
             comparisons "=", "!=", "in", "notin",
             applications NAME["(" args ")"], integer literals,
             "(" term ")" and comprehension "{" term ":" NAME "in" term
             [":" term] "}"

``x != y`` and ``x notin y`` are sugar for negated ``eq`` / ``in``.  A bare
name is a bound variable when a ``forall`` or comprehension binder is in
scope, otherwise a nullary symbol.  Symbols ever assigned to are dynamic;
all other non-builtin symbols are input symbols.  Unbound lowercase bare
names that are never assigned are rejected as unbound variables (upper-case
initials name input constants).

Full-line comments start with ``//``.
"""

from __future__ import annotations

import re

from ..errors import ParseError, ValidationError
from .syntax import (
    App,
    BUILTIN_ARITY,
    Compr,
    Cond,
    Forall,
    Lit,
    Par,
    Program,
    RunBounds,
    Skip,
    Update,
    Var,
    check_program,
)

__all__ = ["parse_program"]

_KEYWORDS = {
    "skip",
    "if",
    "then",
    "else",
    "endif",
    "do",
    "forall",
    "in",
    "parallel",
    "enddo",
    "notin",
    "and",
    "or",
    "not",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*)
  | (?P<assign>:=)
  | (?P<noteq>!=)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[(){},;:=])
    """,
    re.VERBOSE,
)


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str):
    tokens = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            col = pos - line_start + 1
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0
        self.assigned: dict = {}  # dynamic symbol -> arity
        self.applied: dict = {}  # any applied symbol -> arity (consistency)
        self.bare_lower: list = []  # (name, token) candidates for unbound vars

    # -- token helpers -------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        return self.advance()

    def at(self, text: str) -> bool:
        return self.peek().text == text

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.col)

    # -- terms ----------------------------------------------------------

    def term(self, bound) -> object:
        node = self.and_term(bound)
        while self.at("or"):
            self.advance()
            node = App("or", (node, self.and_term(bound)))
        return node

    def and_term(self, bound):
        node = self.not_term(bound)
        while self.at("and"):
            self.advance()
            node = App("and", (node, self.not_term(bound)))
        return node

    def not_term(self, bound):
        if self.at("not"):
            self.advance()
            return App("not", (self.not_term(bound),))
        return self.comparison(bound)

    def comparison(self, bound):
        node = self.atom(bound)
        tok = self.peek()
        if tok.text == "=":
            self.advance()
            return App("eq", (node, self.atom(bound)))
        if tok.text == "!=":
            self.advance()
            return App("not", (App("eq", (node, self.atom(bound))),))
        if tok.text == "in":
            self.advance()
            return App("in", (node, self.atom(bound)))
        if tok.text == "notin":
            self.advance()
            return App("not", (App("in", (node, self.atom(bound))),))
        return node

    def atom(self, bound):
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Lit(int(tok.text))
        if tok.text == "(":
            self.advance()
            inner = self.term(bound)
            self.expect(")")
            return inner
        if tok.text == "{":
            return self.comprehension(bound)
        if tok.kind == "name":
            if tok.text in _KEYWORDS:
                self.fail(f"unexpected keyword {tok.text!r}")
            self.advance()
            if self.at("("):
                if tok.text in bound:
                    raise ParseError(
                        f"variable {tok.text!r} cannot be applied", tok.line, tok.col
                    )
                args = self.arguments(bound)
                self.note_applied(tok, len(args))
                return App(tok.text, tuple(args))
            if tok.text in bound:
                return Var(tok.text)
            self.note_applied(tok, 0)
            if tok.text[0].islower() and tok.text not in BUILTIN_ARITY:
                self.bare_lower.append((tok.text, tok))
            return App(tok.text, ())
        self.fail(f"expected a term, found {tok.text or 'end of input'!r}")

    def arguments(self, bound):
        self.expect("(")
        args = [self.term(bound)]
        while self.at(","):
            self.advance()
            args.append(self.term(bound))
        self.expect(")")
        return args

    def comprehension(self, bound):
        self.expect("{")
        open_tok = self.tokens[self.pos - 1]
        # the element term sees the binder, which is only known after the
        # first ':' -- parse speculatively by scanning for the binder name
        save = self.pos
        depth = 0
        binder = None
        while True:
            tok = self.tokens[self.pos]
            if tok.kind == "eof":
                raise ParseError("unterminated comprehension", open_tok.line, open_tok.col)
            if tok.text in "({":
                depth += 1
            elif tok.text in ")}":
                if depth == 0 and tok.text == "}":
                    break
                depth -= 1
            elif tok.text == ":" and depth == 0:
                nxt = self.tokens[self.pos + 1]
                if nxt.kind == "name" and nxt.text not in _KEYWORDS:
                    binder = nxt.text
                break
            self.pos += 1
        if binder is None:
            raise ParseError("comprehension needs ': name in range'", open_tok.line, open_tok.col)
        self.pos = save
        element = self.term(bound | {binder})
        self.expect(":")
        var_tok = self.advance()
        self.expect("in")
        source = self.term(bound)
        if self.at(":"):
            self.advance()
            guard = self.term(bound | {binder})
        else:
            guard = App("true", ())
        self.expect("}")
        return Compr(element, var_tok.text, source, guard)

    # -- rules ----------------------------------------------------------

    def rule(self, bound):
        tok = self.peek()
        if tok.text == "skip":
            self.advance()
            return Skip()
        if tok.text == "if":
            self.advance()
            guard = self.term(bound)
            self.expect("then")
            then_rule = self.rule(bound)
            if self.at("else"):
                self.advance()
                else_rule = self.rule(bound)
            else:
                else_rule = Skip()
            self.expect("endif")
            return Cond(guard, then_rule, else_rule)
        if tok.text == "do":
            self.advance()
            if self.at("forall"):
                self.advance()
                var_tok = self.advance()
                if var_tok.kind != "name" or var_tok.text in _KEYWORDS:
                    raise ParseError("expected a variable name", var_tok.line, var_tok.col)
                self.expect("in")
                source = self.term(bound)
                self.expect(",")
                body = self.rule(bound | {var_tok.text})
                self.expect("enddo")
                return Forall(var_tok.text, source, body)
            self.expect("in")
            self.expect("parallel")
            rules = [self.rule(bound)]
            while self.at(";"):
                self.advance()
                if self.at("enddo"):
                    break
                rules.append(self.rule(bound))
            self.expect("enddo")
            return Par(tuple(rules))
        if tok.kind == "name" and tok.text not in _KEYWORDS:
            self.advance()
            args = self.arguments(bound) if self.at("(") else []
            assign = self.peek()
            if assign.text != ":=":
                raise ParseError(
                    f"expected ':=' after {tok.text!r}", assign.line, assign.col
                )
            self.advance()
            value = self.term(bound)
            self.note_assigned(tok, len(args))
            return Update(tok.text, tuple(args), value)
        self.fail(f"expected a rule, found {tok.text or 'end of input'!r}")

    # -- symbol bookkeeping ----------------------------------------------

    def note_applied(self, tok, arity):
        if tok.text in BUILTIN_ARITY:
            return
        prev = self.applied.setdefault(tok.text, arity)
        if prev != arity:
            raise ParseError(
                f"{tok.text!r} used with arities {prev} and {arity}", tok.line, tok.col
            )

    def note_assigned(self, tok, arity):
        if tok.text in BUILTIN_ARITY:
            raise ParseError(f"cannot assign to builtin {tok.text!r}", tok.line, tok.col)
        prev = self.assigned.setdefault(tok.text, arity)
        if prev != arity:
            raise ParseError(
                f"{tok.text!r} assigned with arities {prev} and {arity}", tok.line, tok.col
            )
        self.note_applied(tok, arity)


def _parse_headers(text: str):
    steps = None
    active = None
    card = False
    body_lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#"):
            parts = line[1:].split()
            if not parts:
                raise ParseError("empty header line")
            head, rest = parts[0], parts[1:]
            if head == "steps":
                steps = tuple(int(x) for x in rest)
            elif head == "active":
                active = tuple(int(x) for x in rest)
            elif head == "requires":
                if rest != ["card"]:
                    raise ParseError(f"unknown requirement {rest!r}")
                card = True
            else:
                raise ParseError(f"unknown header {head!r}")
            body_lines.append("")
        else:
            body_lines.append(raw)
    if steps is None or active is None:
        raise ParseError("program needs #steps and #active headers")
    return RunBounds(steps, active, card_enabled=card), "\n".join(body_lines)


def parse_program(text: str) -> Program:
    """Parse program text into a checked :class:`Program`."""
    bounds, body = _parse_headers(text)
    parser = _Parser(_tokenize(body))
    rule = parser.rule(frozenset())
    eof = parser.peek()
    if eof.kind != "eof":
        raise ParseError(f"trailing input {eof.text!r}", eof.line, eof.col)
    for name, tok in parser.bare_lower:
        if name not in parser.assigned:
            raise ParseError(f"unbound variable {name!r}", tok.line, tok.col)
    dynamic = dict(parser.assigned)
    dynamic.setdefault("Halt", 0)
    dynamic.setdefault("Output", 0)
    if dynamic.get("Halt") != 0 or dynamic.get("Output") != 0:
        raise ParseError("Halt and Output must be nullary")
    static = {
        name: arity
        for name, arity in parser.applied.items()
        if name not in dynamic
    }
    program = Program(
        rule=rule,
        bounds=bounds,
        dynamic_arity=dynamic,
        static_arity=static,
    )
    try:
        return check_program(program)
    except ValidationError as exc:
        raise ParseError(str(exc)) from exc
