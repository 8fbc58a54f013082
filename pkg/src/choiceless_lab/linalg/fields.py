"""Finite fields presented as element lists with operation tables.

Elements are the integers ``0 .. q-1``; that numbering is also the field's
linear ordering (used only where an order is an explicit part of a contract,
never to decide singularity).  Prime fields compute arithmetically; the
non-prime orders 4, 8 and 9 ship as explicit table fixtures built from
polynomial arithmetic.  Field axioms are verified on construction for
q <= 64.
"""

from __future__ import annotations

from ..errors import ValidationError

_AXIOM_CHECK_LIMIT = 64


class FiniteField:
    """A finite field of order ``q`` with elements ``0 .. q-1``.

    ``add_table`` / ``mul_table`` may be dense q-by-q nested tuples or None
    for arithmetically backed prime fields.
    """

    def __init__(self, q, characteristic, add, mul, add_table=None, mul_table=None, check=True):
        self.order = q
        self.characteristic = characteristic
        self.zero = 0
        self.one = 1 if q > 1 else 0
        self._add = add
        self._mul = mul
        self.add_table = add_table
        self.mul_table = mul_table
        if check and q <= _AXIOM_CHECK_LIMIT:
            self._check_axioms()
        self._inverse = {}

    @property
    def elements(self):
        return range(self.order)

    def add(self, a, b):
        return self._add(a, b)

    def mul(self, a, b):
        return self._mul(a, b)

    def neg(self, a):
        for b in self.elements:
            if self._add(a, b) == self.zero:
                return b
        raise ValidationError(f"no additive inverse for {a}")

    def sub(self, a, b):
        return self._add(a, b) if self.characteristic == 2 else self._add(a, self.neg(b))

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        got = self._inverse.get(a)
        if got is None:
            for b in self.elements:
                if self._mul(a, b) == self.one:
                    self._inverse[a] = got = b
                    break
            else:
                raise ValidationError(f"no multiplicative inverse for {a}")
        return got

    def div(self, a, b):
        return self._mul(a, self.inv(b))

    def scalar(self, a, count):
        """a added to itself ``count`` times (count a small nonneg int)."""
        acc = self.zero
        for _ in range(count % self.characteristic):
            acc = self._add(acc, a)
        return acc

    def _check_axioms(self):
        q = self.order
        els = list(range(q))
        add, mul = self._add, self._mul
        for a in els:
            if add(a, 0) != a or mul(a, self.one) != a:
                raise ValidationError("identity axiom fails")
            if mul(a, 0) != 0:
                raise ValidationError("zero absorption fails")
            if all(add(a, b) != 0 for b in els):
                raise ValidationError("additive inverse missing")
            if a != 0 and all(mul(a, b) != self.one for b in els):
                raise ValidationError("multiplicative inverse missing")
        for a in els:
            for b in els:
                if add(a, b) != add(b, a) or mul(a, b) != mul(b, a):
                    raise ValidationError("commutativity fails")
                for c in els:
                    if add(add(a, b), c) != add(a, add(b, c)):
                        raise ValidationError("additive associativity fails")
                    if mul(mul(a, b), c) != mul(a, mul(b, c)):
                        raise ValidationError("multiplicative associativity fails")
                    if mul(a, add(b, c)) != add(mul(a, b), mul(a, c)):
                        raise ValidationError("distributivity fails")
        # characteristic: order of 1 under addition must be a prime p with q = p^e
        acc, p = self.one, 1
        while acc != 0:
            acc = add(acc, self.one)
            p += 1
            if p > q:
                raise ValidationError("characteristic not found")
        if p != self.characteristic:
            raise ValidationError(f"declared characteristic {self.characteristic}, found {p}")
        e, qq = 0, 1
        while qq < q:
            qq *= p
            e += 1
        if qq != q:
            raise ValidationError(f"order {q} is not a power of {p}")

    def __repr__(self):
        return f"FiniteField(q={self.order})"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


_ZP_CACHE: dict = {}


def zp(p: int) -> FiniteField:
    """The prime field of integers modulo ``p``."""
    field = _ZP_CACHE.get(p)
    if field is None:
        if not _is_prime(p):
            raise ValidationError(f"{p} is not prime")
        field = FiniteField(p, p, lambda a, b: (a + b) % p, lambda a, b: (a * b) % p)
        _ZP_CACHE[p] = field
    return field


def _poly_field(p: int, e: int, modulus: tuple) -> FiniteField:
    """Tables for GF(p^e) as polynomials over Z/p modulo the given monic
    irreducible (coefficient tuple, low degree first, length e+1)."""
    q = p**e

    def encode(coeffs):
        return sum(c * p**i for i, c in enumerate(coeffs))

    def decode(n):
        out = []
        for _ in range(e):
            out.append(n % p)
            n //= p
        return out

    def poly_add(x, y):
        return [(a + b) % p for a, b in zip(x, y)]

    def poly_mul(x, y):
        prod = [0] * (2 * e - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    prod[i + j] = (prod[i + j] + a * b) % p
        # reduce by the modulus: x^e = -(lower coefficients)
        for i in range(len(prod) - 1, e - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(e):
                    prod[i - e + j] = (prod[i - e + j] - c * modulus[j]) % p
        return prod[:e]

    add_table = tuple(
        tuple(encode(poly_add(decode(a), decode(b))) for b in range(q)) for a in range(q)
    )
    mul_table = tuple(
        tuple(encode(poly_mul(decode(a), decode(b))) for b in range(q)) for a in range(q)
    )
    return FiniteField(
        q,
        p,
        lambda a, b: add_table[a][b],
        lambda a, b: mul_table[a][b],
        add_table=add_table,
        mul_table=mul_table,
    )


_GF_CACHE: dict = {}

# irreducible moduli (low-degree-first coefficients) for the shipped fixtures
_GF_MODULI = {
    4: (2, (1, 1, 1)),      # x^2 + x + 1 over Z/2
    8: (2, (1, 1, 0, 1)),   # x^3 + x + 1 over Z/2
    9: (3, (1, 0, 1)),      # x^2 + 1 over Z/3
}


def gf(q: int) -> FiniteField:
    """A field of order q: prime orders arithmetically, 4/8/9 from tables."""
    field = _GF_CACHE.get(q)
    if field is not None:
        return field
    if _is_prime(q):
        field = zp(q)
    elif q in _GF_MODULI:
        p, modulus = _GF_MODULI[q]
        e = len(modulus) - 1
        field = _poly_field(p, e, modulus)
    else:
        raise ValidationError(f"no field fixture of order {q}")
    _GF_CACHE[q] = field
    return field
