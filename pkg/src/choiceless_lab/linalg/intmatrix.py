"""Integer square matrices in binary-digit form and the many-primes test.

An :class:`IntMatrix` is a two-sorted object: an unordered index set I and
an ordered run of digit positions ``0 .. k``.  The matrix itself is the
ternary relation "bit s of the absolute value of entry (i, j) is one",
plus a sign relation holding the positive entries (normalized false on
zero entries).

Non-singularity is decided by reducing modulo each of the first ``2 n**2``
primes (n the larger of |I| and the digit count) and asking whether any
reduction is non-singular: the determinant's absolute value is at most
``n! * 2**(n**2) <= 2**(2 n**2)``, which is smaller than the product of the
scanned primes, so a nonzero determinant must miss at least one of them.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError
from .fields import zp
from .matrix import FieldMatrix, nonsingular_square
from .primes import sieve_first_primes

__all__ = ["IntMatrix", "nonsingular_int", "det_prime_divisors", "scan_width"]


@dataclass(frozen=True, eq=False)
class IntMatrix:
    """Square integer matrix as digit and sign relations over I x I."""

    index_set: frozenset
    digit_count: int
    digits: frozenset  # triples (i, j, s) with 0 <= s < digit_count
    positives: frozenset  # pairs (i, j) whose entry is positive

    def __post_init__(self):
        if self.digit_count < 1:
            raise ValidationError("at least one digit position is required")
        for (i, j, s) in self.digits:
            if i not in self.index_set or j not in self.index_set:
                raise ValidationError(f"digit triple {(i, j, s)} outside the index set")
            if not 0 <= s < self.digit_count:
                raise ValidationError(f"digit position {s} out of range")
        seen = {(i, j) for (i, j, _) in self.digits}
        for (i, j) in self.positives:
            if (i, j) not in seen:
                raise ValidationError(f"sign on zero entry {(i, j)}")

    @staticmethod
    def from_int_entries(entries: dict, index_set=None) -> "IntMatrix":
        """Build from a dense/sparse dict ``(i, j) -> int``."""
        if index_set is None:
            index_set = {i for i, _ in entries} | {j for _, j in entries}
        idx = frozenset(index_set)
        digits = set()
        positives = set()
        width = 1
        for (i, j), value in entries.items():
            if value > 0:
                positives.add((i, j))
            mag = abs(value)
            width = max(width, mag.bit_length())
            for s in range(mag.bit_length()):
                if (mag >> s) & 1:
                    digits.add((i, j, s))
        return IntMatrix(idx, width, frozenset(digits), frozenset(positives))

    def entry(self, i, j) -> int:
        mag = sum(1 << s for (a, b, s) in self.digits if (a, b) == (i, j))
        if mag == 0:
            return 0
        return mag if (i, j) in self.positives else -mag

    def to_int_entries(self) -> dict:
        mags: dict = {}
        for (i, j, s) in self.digits:
            mags[(i, j)] = mags.get((i, j), 0) + (1 << s)
        return {
            (i, j): (m if (i, j) in self.positives else -m) for (i, j), m in mags.items()
        }

    def reduce_mod(self, p: int) -> FieldMatrix:
        field = zp(p)
        entries: dict = {}
        for (i, j), value in self.to_int_entries().items():
            entries[(i, j)] = value % p
        return FieldMatrix(field, self.index_set, self.index_set, entries, square=True)


def scan_width(m: IntMatrix) -> int:
    """The parameter n bounding both the dimension and the digit run."""
    return max(len(m.index_set), m.digit_count)


def nonsingular_int(m: IntMatrix) -> bool:
    """True iff some reduction modulo the first ``2 n**2`` primes is
    non-singular."""
    n = scan_width(m)
    for p in sieve_first_primes(2 * n * n):
        if nonsingular_square(zp(p), m.reduce_mod(p)):
            return True
    return False


def det_prime_divisors(m: IntMatrix) -> frozenset:
    """The scanned primes modulo which the matrix is singular.

    For a non-singular matrix these are scanned primes dividing the
    determinant.  When every scanned prime divides, the matrix itself is
    singular (determinant zero); compare the result against the full scan
    list to detect that case.
    """
    n = scan_width(m)
    divisors = set()
    for p in sieve_first_primes(2 * n * n):
        if not nonsingular_square(zp(p), m.reduce_mod(p)):
            divisors.add(p)
    return frozenset(divisors)
