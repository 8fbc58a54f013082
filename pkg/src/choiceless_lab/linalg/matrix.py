"""Matrices over unordered index sets and the group-order singularity test.

A :class:`FieldMatrix` is a total function from ``rows x cols`` to field
elements, stored sparsely (absent entries are zero).  Index sets carry no
order; every verdict produced here is invariant under renaming the indices.

Multiplication follows the counting scheme: the (i, k) entry of ``M N`` is
``sum_z z * (m_z mod p)`` where ``m_z`` counts inner indices ``j`` whose
entry pair multiplies to ``z``.  Over Z/2 this is exactly "the number of
common neighbours is odd".  Because the per-value counts are tallied over
an unordered index set and combined through commutative field addition, no
index order can influence the result.

Non-singularity of an I-square matrix is decided without elimination, by
checking ``M**g == identity`` for ``g`` the order of the general linear
group of that dimension: non-singular matrices have order dividing ``g``
(Lagrange), while no power of a singular matrix is the identity.  The
ordered Gaussian routines live alongside as the independent oracle and as
the solver used by the multipede module.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..errors import ValidationError
from .binnat import BinNat
from .fields import FiniteField

__all__ = [
    "FieldMatrix",
    "gl_order",
    "identity",
    "mat_mul",
    "mat_pow",
    "nonsingular_rect",
    "nonsingular_rect_block",
    "nonsingular_square",
    "rank_gaussian",
    "solve_gaussian",
    "transpose",
]


@dataclass(frozen=True, eq=False)
class FieldMatrix:
    """A total map ``rows x cols -> field``; zero entries may be omitted."""

    field: FiniteField
    rows: frozenset
    cols: frozenset
    entries: dict
    square: bool = False

    def __post_init__(self):
        zero = self.field.zero
        cleaned = {}
        for (i, j), v in self.entries.items():
            if i not in self.rows or j not in self.cols:
                raise ValidationError(f"entry {(i, j)} outside the index sets")
            if not (0 <= v < self.field.order):
                raise ValidationError(f"entry value {v} not a field element")
            if v != zero:
                cleaned[(i, j)] = v
        object.__setattr__(self, "entries", cleaned)
        if self.square and self.rows != self.cols:
            raise ValidationError("square matrix needs rows == cols")

    def entry(self, i, j):
        return self.entries.get((i, j), self.field.zero)

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (
            self.field.order == other.field.order
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return (
            f"FieldMatrix(q={self.field.order}, {len(self.rows)}x{len(self.cols)},"
            f" nnz={len(self.entries)})"
        )


def identity(field: FiniteField, index_set) -> FieldMatrix:
    idx = frozenset(index_set)
    return FieldMatrix(field, idx, idx, {(i, i): field.one for i in idx}, square=True)


def transpose(m: FieldMatrix) -> FieldMatrix:
    return FieldMatrix(
        m.field,
        m.cols,
        m.rows,
        {(j, i): v for (i, j), v in m.entries.items()},
        square=m.square,
    )


def mat_mul(field: FiniteField, m: FieldMatrix, n: FieldMatrix) -> FieldMatrix:
    """Product via per-entry counting of inner products, counts mod p."""
    if m.cols != n.rows:
        raise ValidationError("inner index sets differ")
    p = field.characteristic
    mul = field.mul
    add = field.add
    # nonzero columns of m per row, nonzero rows of n per column
    by_row: dict = {}
    for (i, j), v in m.entries.items():
        by_row.setdefault(i, []).append((j, v))
    by_col: dict = {}
    for (j, k), v in n.entries.items():
        by_col.setdefault(k, {})[j] = v
    out = {}
    for i, row in by_row.items():
        for k, col in by_col.items():
            counts: Counter = Counter()
            for j, a in row:
                b = col.get(j)
                if b is not None:
                    counts[mul(a, b)] += 1
            acc = field.zero
            for z, m_z in counts.items():
                r = m_z % p
                for _ in range(r):
                    acc = add(acc, z)
            if acc != field.zero:
                out[(i, k)] = acc
    return FieldMatrix(field, m.rows, n.cols, out, square=m.rows == n.cols)


def mat_pow(field: FiniteField, m: FieldMatrix, r) -> FieldMatrix:
    """``m**r`` by repeated squaring over the bit set of ``r`` (r >= 1),
    consuming bits from the most significant; at most ``2 * (1 + max bit)``
    multiplications."""
    if isinstance(r, int):
        r = BinNat.from_int(r)
    if r.is_zero:
        raise ValidationError("exponent must be at least 1")
    if not m.square:
        raise ValidationError("powers need a square matrix")
    bits = r.bits
    power = m
    # the leading bit is consumed by starting from m itself
    for b in range(r.max_bit - 1, -1, -1):
        power = mat_mul(field, power, power)
        if b in bits:
            power = mat_mul(field, power, m)
    return power


def gl_order(q: int, n: int) -> BinNat:
    """Order of the group of invertible n-by-n matrices over the field of
    order q: the product of ``q**n - q**i`` for ``i < n``."""
    if n < 1:
        raise ValidationError("dimension must be at least 1")
    base = BinNat.from_int(q)
    qn = base.pow_int(n)
    acc = BinNat.from_int(1)
    qi = BinNat.from_int(1)
    for _ in range(n):
        acc = acc.mul(qn.sub(qi))
        qi = qi.mul(base)
    return acc


def nonsingular_square(field: FiniteField, m: FieldMatrix) -> bool:
    """True iff ``m**g`` is the identity for ``g`` the group order of its
    dimension.  Empty matrices are non-singular by convention."""
    if not m.square:
        raise ValidationError("nonsingular_square needs a square matrix")
    n = len(m.rows)
    if n == 0:
        return True
    g = gl_order(field.order, n)
    return mat_pow(field, m, g) == identity(field, m.rows)


def nonsingular_rect(field: FiniteField, m: FieldMatrix) -> bool:
    """Non-singularity of an I-by-J matrix with |I| = |J| via the square
    matrix ``M M^t``, whose determinant is the square of M's."""
    if len(m.rows) != len(m.cols):
        raise ValidationError("row and column sets must have equal size")
    gram = mat_mul(field, m, transpose(m))
    gram = FieldMatrix(field, m.rows, m.rows, gram.entries, square=True)
    return nonsingular_square(field, gram)


def nonsingular_rect_block(field: FiniteField, m: FieldMatrix) -> bool:
    """The block-matrix alternative: embed M and its transpose off-diagonal
    in an (I + J)-square matrix and test that."""
    if len(m.rows) != len(m.cols):
        raise ValidationError("row and column sets must have equal size")
    left = {("r", i) for i in m.rows}
    right = {("c", j) for j in m.cols}
    idx = frozenset(left | right)
    entries = {}
    for (i, j), v in m.entries.items():
        entries[(("r", i), ("c", j))] = v
        entries[(("c", j), ("r", i))] = v
    block = FieldMatrix(field, idx, idx, entries, square=True)
    return nonsingular_square(field, block)


def _ordered_grid(field: FiniteField, m: FieldMatrix, row_order, col_order):
    rows = list(row_order)
    cols = list(col_order)
    if set(rows) != set(m.rows) or len(rows) != len(m.rows):
        raise ValidationError("row_order must enumerate the row set")
    if set(cols) != set(m.cols) or len(cols) != len(m.cols):
        raise ValidationError("col_order must enumerate the column set")
    grid = [[m.entry(i, j) for j in cols] for i in rows]
    return rows, cols, grid


def _eliminate(field: FiniteField, grid, width, rhs=None):
    """In-place Gauss-Jordan over the field; returns pivot column list."""
    pivots = []
    r = 0
    for c in range(width):
        pivot_row = None
        for rr in range(r, len(grid)):
            if grid[rr][c] != field.zero:
                pivot_row = rr
                break
        if pivot_row is None:
            continue
        grid[r], grid[pivot_row] = grid[pivot_row], grid[r]
        if rhs is not None:
            rhs[r], rhs[pivot_row] = rhs[pivot_row], rhs[r]
        inv = field.inv(grid[r][c])
        grid[r] = [field.mul(inv, v) for v in grid[r]]
        if rhs is not None:
            rhs[r] = field.mul(inv, rhs[r])
        for rr in range(len(grid)):
            if rr != r and grid[rr][c] != field.zero:
                factor = grid[rr][c]
                grid[rr] = [
                    field.sub(grid[rr][k], field.mul(factor, grid[r][k]))
                    for k in range(width)
                ]
                if rhs is not None:
                    rhs[rr] = field.sub(rhs[rr], field.mul(factor, rhs[r]))
        pivots.append(c)
        r += 1
        if r == len(grid):
            break
    return pivots


def rank_gaussian(field: FiniteField, m: FieldMatrix, row_order, col_order) -> int:
    """Matrix rank by ordered Gaussian elimination (the oracle route)."""
    _, _, grid = _ordered_grid(field, m, row_order, col_order)
    return len(_eliminate(field, grid, len(col_order)))


def solve_gaussian(field: FiniteField, m: FieldMatrix, rhs: dict, row_order, col_order):
    """Solve ``m x = rhs`` over the field; returns a dict col -> element, or
    None when the system is inconsistent."""
    rows, cols, grid = _ordered_grid(field, m, row_order, col_order)
    b = [rhs.get(i, field.zero) for i in rows]
    pivots = _eliminate(field, grid, len(cols), rhs=b)
    for r in range(len(pivots), len(rows)):
        if b[r] != field.zero and all(v == field.zero for v in grid[r]):
            return None
    solution = {j: field.zero for j in cols}
    for r, c in enumerate(pivots):
        solution[cols[c]] = b[r]
    return solution
