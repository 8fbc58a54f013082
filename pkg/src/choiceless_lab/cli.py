"""Command line front end.

Every invocation produces one JSON report on stdout (or at --out) that
echoes the full invocation, so results are reproducible byte for byte
apart from the timing field.  Randomized commands require an explicit
seed.  Resource guards exit with a distinct status and can be lifted with
--force (a warning goes to stderr).

Exit statuses: 0 ok, 2 usage, 3 parse/validation, 4 guard, 5 internal.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__, cfi, matching, multipede
from .bgs import parse_program, parse_structure, run, write_structure
from .errors import ChoicelessLabError, GuardExceeded, ParseError, ValidationError
from .linalg import (
    IntMatrix,
    det_prime_divisors,
    frequency_experiment,
    gf,
    nonsingular_int,
    nonsingular_square,
    random_matrix,
    rank_gaussian,
    sieve_first_primes,
)
from .linalg.intmatrix import scan_width
from .linalg.matio import parse_matrix, write_field_matrix, write_int_matrix

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_GUARD = 4
EXIT_INTERNAL = 5

_BIG = 10**9


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def worker_cap() -> int:
    """Worker count cap from CHOICELESS_LAB_THREADS (execution is currently
    single threaded; the cap is honored trivially)."""
    raw = os.environ.get("CHOICELESS_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _build_parser() -> _Parser:
    parser = _Parser(prog="choiceless-lab")
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    bgs_cmd = sub.add_parser("bgs")
    bgs_sub = bgs_cmd.add_subparsers(dest="action", required=True)
    bgs_run = bgs_sub.add_parser("run")
    bgs_run.add_argument("--program", required=True)
    bgs_run.add_argument("--input", required=True)

    gen = sub.add_parser("gen")
    gen_sub = gen.add_subparsers(dest="target", required=True)
    g_cfi = gen_sub.add_parser("cfi")
    g_cfi.add_argument("--m", type=int, required=True)
    g_cfi.add_argument("--twist", required=True, help="even, odd, or a comma list of base vertices")
    g_cfi.add_argument("--pad", action="store_true")
    g_cfi.add_argument("--force", action="store_true")
    g_cfi.add_argument("--file", required=True, help="structure file to write")
    g_multi = gen_sub.add_parser("multipede")
    g_multi.add_argument("--segments", type=int, required=True)
    g_multi.add_argument("--hyperedges", type=int, required=True)
    g_multi.add_argument("--seed", type=int, required=True)
    g_multi.add_argument("--shoe", action="store_true")
    g_multi.add_argument("--file", required=True)
    g_bip = gen_sub.add_parser("bipartite")
    g_bip.add_argument("--na", type=int, required=True)
    g_bip.add_argument("--nb", type=int, required=True)
    g_bip.add_argument("--density", type=float, default=0.5)
    g_bip.add_argument("--seed", type=int, required=True)
    g_bip.add_argument("--file", required=True)
    g_mat = gen_sub.add_parser("matrix")
    g_mat.add_argument("--q", type=int, help="field order (omit for ring Z)")
    g_mat.add_argument("--ring", choices=["Z"], help="integer matrix instead of a field")
    g_mat.add_argument("--n", type=int, required=True)
    g_mat.add_argument("--max-abs", type=int, default=256)
    g_mat.add_argument("--seed", type=int, required=True)
    g_mat.add_argument("--file", required=True)

    solve = sub.add_parser("solve")
    solve_sub = solve.add_subparsers(dest="problem", required=True)
    s_match = solve_sub.add_parser("matching")
    s_match.add_argument("--input", required=True)
    s_match.add_argument("--max-size", action="store_true")
    s_det = solve_sub.add_parser("det")
    s_det.add_argument("--matrix", required=True)
    s_det.add_argument("--method", choices=["power", "gauss", "crt"])
    s_det.add_argument("--prime-divisors", action="store_true")
    s_cfi = solve_sub.add_parser("cfi-classify")
    s_cfi.add_argument("--input", required=True)

    iso = sub.add_parser("iso")
    iso_sub = iso.add_subparsers(dest="kind", required=True)
    for kind in ("multipede3", "multipede4", "cfi"):
        p = iso_sub.add_parser(kind)
        p.add_argument("--a", required=True)
        p.add_argument("--b", required=True)
        p.add_argument("--force", action="store_true")

    exp = sub.add_parser("experiment")
    exp_sub = exp.add_subparsers(dest="experiment", required=True)
    freq = exp_sub.add_parser("det-frequency")
    freq.add_argument("--q", type=int, required=True)
    freq.add_argument("--n", type=int, required=True)
    freq.add_argument("--trials", type=int, required=True)
    freq.add_argument("--seed", type=int, required=True)

    val = sub.add_parser("validate")
    val_sub = val.add_subparsers(dest="what", required=True)
    v_multi = val_sub.add_parser("multipede")
    v_multi.add_argument("--input", required=True)
    v_struct = val_sub.add_parser("structure")
    v_struct.add_argument("--input", required=True)

    return parser


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _warn_force(enabled: bool):
    if enabled:
        print("warning: resource guards lifted by --force", file=sys.stderr)


# ------------------------------------------------------------ subcommands


def _cmd_bgs_run(args) -> dict:
    program = parse_program(_read(args.program))
    structure = parse_structure(_read(args.input))
    outcome = run(program, structure)
    return {
        "verdict": outcome.verdict,
        "steps": outcome.steps,
        "peak_active": outcome.peak_active,
        "output": outcome.output,
    }


def _cmd_gen_cfi(args) -> dict:
    _warn_force(args.force)
    base = cfi.complete_graph(args.m + 1)
    if args.twist == "even":
        twist = []
    elif args.twist == "odd":
        twist = [base.vertices[0]]
    else:
        twist = [t.strip() for t in args.twist.split(",") if t.strip()]
    gadget = cfi.build_twisted(base, twist)
    if args.pad:
        padded = cfi.pad(gadget, args.m, max_m=_BIG if args.force else 5)
        structure = padded.structure()
        padding = padded.padding
    else:
        structure = gadget.structure()
        padding = 0
    encoded = cfi.to_structure(structure)
    with open(args.file, "w", encoding="utf-8") as handle:
        handle.write(write_structure(encoded))
    return {
        "file": args.file,
        "vertices": len(structure.vertices),
        "padding": padding,
        "twist_size": len(twist),
    }


def _cmd_gen_multipede(args) -> dict:
    pede = multipede.random_multipede(args.segments, args.hyperedges, args.seed)
    emitted = multipede.shoe_expansions(pede)[0] if args.shoe else pede
    with open(args.file, "w", encoding="utf-8") as handle:
        handle.write(write_structure(multipede.to_structure(emitted)))
    return {
        "file": args.file,
        "segments": args.segments,
        "hyperedges": args.hyperedges,
        "odd": multipede.is_odd(pede),
        "shoe": bool(args.shoe),
    }


def _cmd_gen_bipartite(args) -> dict:
    import random as _random

    rng = _random.Random(args.seed)
    a = [f"a{i}" for i in range(args.na)]
    b = [f"b{j}" for j in range(args.nb)]
    edges = [(x, y) for x in a for y in b if rng.random() < args.density]
    graph = matching.BipartiteGraph.build(a, b, edges)
    with open(args.file, "w", encoding="utf-8") as handle:
        handle.write(write_structure(matching.graph_to_structure(graph)))
    return {"file": args.file, "na": args.na, "nb": args.nb, "edges": len(edges)}


def _cmd_gen_matrix(args) -> dict:
    if (args.q is None) == (args.ring is None):
        raise _UsageError("exactly one of --q and --ring is required")
    import random as _random

    if args.q is not None:
        m = random_matrix(gf(args.q), args.n, args.seed)
        text = write_field_matrix(m)
    else:
        rng = _random.Random(args.seed)
        entries = {
            (f"i{i}", f"i{j}"): rng.randrange(-args.max_abs, args.max_abs + 1)
            for i in range(args.n)
            for j in range(args.n)
        }
        text = write_int_matrix(IntMatrix.from_int_entries(entries))
    with open(args.file, "w", encoding="utf-8") as handle:
        handle.write(text)
    return {"file": args.file, "n": args.n}


def _cmd_solve_matching(args) -> dict:
    graph = matching.graph_from_structure(parse_structure(_read(args.input)))
    if args.max_size:
        return {"max_matching": matching.max_matching_size(graph)}
    verdict = matching.decide_complete_matching(graph)
    return {"verdict": "yes" if verdict else "no"}


def _cmd_solve_det(args) -> dict:
    kind, m = parse_matrix(_read(args.matrix))
    method = args.method or ("crt" if kind == "int" else "power")
    if kind == "int":
        if method != "crt":
            raise _UsageError("integer matrices support --method crt only")
        result: dict = {"method": "crt", "nonsingular": nonsingular_int(m)}
        if args.prime_divisors:
            divisors = det_prime_divisors(m)
            n = scan_width(m)
            scanned = sieve_first_primes(2 * n * n)
            result["prime_divisors"] = sorted(divisors)
            result["determinant_zero"] = len(divisors) == len(scanned)
        return result
    if args.prime_divisors:
        raise _UsageError("--prime-divisors needs an integer matrix")
    if method == "crt":
        raise _UsageError("--method crt needs an integer matrix")
    if method == "power":
        if not m.square:
            from .linalg import nonsingular_rect

            return {"method": "power", "nonsingular": nonsingular_rect(m.field, m)}
        return {"method": "power", "nonsingular": nonsingular_square(m.field, m)}
    rows = sorted(m.rows, key=str)
    cols = sorted(m.cols, key=str)
    rank = rank_gaussian(m.field, m, rows, cols)
    return {
        "method": "gauss",
        "rank": rank,
        "nonsingular": rank == len(rows) and len(rows) == len(cols),
    }


def _cmd_solve_cfi_classify(args) -> dict:
    structure = parse_structure(_read(args.input))
    pre = cfi.from_structure(structure)
    verdict = cfi.recognize_and_classify(pre, [a.name for a in structure.atoms])
    return {"class": verdict}


def _cmd_iso(args) -> dict:
    _warn_force(args.force)
    if args.kind == "cfi":
        a = cfi.from_structure(parse_structure(_read(args.a)))
        b = cfi.from_structure(parse_structure(_read(args.b)))
        return {"isomorphic": cfi.isomorphic_gadgets(a, b)}
    shod_a = multipede.from_structure(parse_structure(_read(args.a)))
    shod_b = multipede.from_structure(parse_structure(_read(args.b)))
    if args.kind == "multipede3":
        return {"isomorphic": multipede.iso3_decide(shod_a, shod_b)}
    limit = _BIG if args.force else 16
    m4_a = multipede.ShodMultipede(
        multipede.Multipede4.from_multipede3(shod_a.pede), shod_a.shoe
    )
    m4_b = multipede.ShodMultipede(
        multipede.Multipede4.from_multipede3(shod_b.pede), shod_b.shoe
    )
    return {"isomorphic": multipede.iso4_decide(m4_a, m4_b, max_segments=limit)}


def _cmd_experiment(args) -> dict:
    fraction = frequency_experiment(gf(args.q), args.n, args.trials, args.seed)
    return {"fraction": fraction, "trials": args.trials, "workers": worker_cap()}


def _cmd_validate_multipede(args) -> dict:
    structure = parse_structure(_read(args.input))
    pede, shoe = multipede.from_structure_lenient(structure)
    violations = multipede.validate(pede)
    intact = not violations and bool(pede.segments)
    return {
        "valid": not violations,
        "violations": [list(map(str, v)) for v in violations],
        "odd": multipede.is_odd(pede) if intact else None,
        "has_shoe": shoe is not None,
    }


def _cmd_validate_structure(args) -> dict:
    structure = parse_structure(_read(args.input))
    return {
        "atoms": len(structure.atoms),
        "symbols": {
            name: {
                "kind": "rel" if name in structure.relations else "fun",
                "arity": structure.arities[name],
                "tuples": len(
                    structure.relations.get(name, structure.functions.get(name, ()))
                ),
            }
            for name in sorted(structure.arities)
        },
    }


def _handle(args) -> dict:
    command = args.command
    if command == "bgs":
        return _cmd_bgs_run(args)
    if command == "gen":
        return {
            "cfi": _cmd_gen_cfi,
            "multipede": _cmd_gen_multipede,
            "bipartite": _cmd_gen_bipartite,
            "matrix": _cmd_gen_matrix,
        }[args.target](args)
    if command == "solve":
        return {
            "matching": _cmd_solve_matching,
            "det": _cmd_solve_det,
            "cfi-classify": _cmd_solve_cfi_classify,
        }[args.problem](args)
    if command == "iso":
        return _cmd_iso(args)
    if command == "experiment":
        return _cmd_experiment(args)
    if command == "validate":
        if args.what == "multipede":
            return _cmd_validate_multipede(args)
        return _cmd_validate_structure(args)
    raise _UsageError(f"unknown command {command!r}")


def _emit(report: dict, out_path):
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def dispatch(argv) -> tuple:
    """Route an argument vector; returns (exit status, report dict)."""
    envelope = {
        "tool": "choiceless-lab",
        "version": __version__,
        "invocation": {"argv": list(argv)},
    }
    started = time.monotonic()
    out_path = None
    try:
        args = _build_parser().parse_args(argv)
        out_path = args.out
        result = _handle(args)
        report = dict(envelope)
        report["result"] = result
        report["timing_seconds"] = round(time.monotonic() - started, 6)
        _emit(report, out_path)
        return EXIT_OK, report
    except _UsageError as exc:
        code, kind = EXIT_USAGE, "usage"
        message = str(exc)
    except GuardExceeded as exc:
        code, kind = EXIT_GUARD, "guard"
        message = str(exc)
    except (ParseError, ValidationError) as exc:
        code, kind = EXIT_PARSE, "parse"
        message = str(exc)
    except ChoicelessLabError as exc:
        code, kind = EXIT_INTERNAL, "internal"
        message = str(exc)
    except Exception as exc:  # pragma: no cover - defensive
        code, kind = EXIT_INTERNAL, "internal"
        message = f"{type(exc).__name__}: {exc}"
    report = dict(envelope)
    report["error"] = {"kind": kind, "message": message}
    report["timing_seconds"] = round(time.monotonic() - started, 6)
    _emit(report, out_path)
    return code, report


def main() -> None:
    code, _ = dispatch(sys.argv[1:])
    sys.exit(code)
