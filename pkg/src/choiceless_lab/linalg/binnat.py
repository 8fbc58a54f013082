"""Arbitrary-precision naturals as sets of binary digit positions.

``BinNat(bits)`` denotes ``sum(2**b for b in bits)``.  Arithmetic is
schoolbook on the position sets (ripple carries and borrows), which keeps
the representation honest: no fixed-width integer ever holds the value.
Only what the group-order computation needs is provided: addition,
subtraction, multiplication and small integer powers.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class BinNat:
    """A natural number as the set of positions of ones in its binary form."""

    bits: frozenset

    def __post_init__(self):
        for b in self.bits:
            if not isinstance(b, int) or b < 0:
                raise ValueError("bit positions are nonnegative integers")

    @staticmethod
    def from_int(n: int) -> "BinNat":
        if n < 0:
            raise ValueError("BinNat encodes naturals")
        return BinNat(frozenset(i for i in range(n.bit_length()) if (n >> i) & 1))

    def to_int(self) -> int:
        return sum(1 << b for b in self.bits)

    @property
    def is_zero(self) -> bool:
        return not self.bits

    @property
    def max_bit(self) -> int:
        if not self.bits:
            raise ValueError("zero has no digits")
        return max(self.bits)

    def add(self, other: "BinNat") -> "BinNat":
        x, y = self.bits, other.bits
        while y:
            carry = frozenset(b + 1 for b in x & y)
            x = x ^ y
            y = carry
        return BinNat(x)

    def sub(self, other: "BinNat") -> "BinNat":
        x, y = self.bits, other.bits
        limit = max(x | y, default=0) + 1
        while y:
            borrow = frozenset(b + 1 for b in y - x)
            x = x ^ y
            y = borrow
            if y and max(y) > limit:
                raise ValueError("subtraction would go negative")
        return BinNat(x)

    def shift(self, k: int) -> "BinNat":
        return BinNat(frozenset(b + k for b in self.bits))

    def mul(self, other: "BinNat") -> "BinNat":
        acc = BinNat(frozenset())
        for b in sorted(other.bits):
            acc = acc.add(self.shift(b))
        return acc

    def pow_int(self, e: int) -> "BinNat":
        if e < 0:
            raise ValueError("exponent must be nonnegative")
        acc = BinNat.from_int(1)
        for _ in range(e):
            acc = acc.mul(self)
        return acc

    def __repr__(self):
        return f"BinNat({sorted(self.bits)})"
