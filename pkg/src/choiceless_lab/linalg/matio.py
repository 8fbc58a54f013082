"""Matrix file format.

Header declares the ring, then the index sets, then sparse entries::

    field 2          // or: ring Z
    rows r0 r1
    cols c0 c1       // may be omitted together with "square"
    square           // marks an I-square matrix (cols default to rows)
    r0 c0 1
    r1 c1 1

Omitted entries are zero.  Field entries are canonical element indices;
ring entries are decimal integers (possibly negative).  Integer matrices
must be square.
"""

from __future__ import annotations

from ..errors import ParseError
from .fields import gf
from .intmatrix import IntMatrix
from .matrix import FieldMatrix

__all__ = ["parse_matrix", "write_field_matrix", "write_int_matrix"]


def parse_matrix(text: str):
    """Returns ("field", FieldMatrix) or ("int", IntMatrix)."""
    ring = None
    q = None
    rows = None
    cols = None
    square = False
    entries = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        if head == "field":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("field header needs one numeric order", line_no)
            ring, q = "field", int(parts[1])
        elif head == "ring":
            if parts[1:] != ["Z"]:
                raise ParseError("only ring Z is supported", line_no)
            ring = "int"
        elif head == "rows":
            rows = parts[1:]
        elif head == "cols":
            cols = parts[1:]
        elif head == "square" and len(parts) == 1:
            square = True
        elif len(parts) == 3:
            entries.append((parts[0], parts[1], parts[2], line_no))
        else:
            raise ParseError(f"unrecognized line {line!r}", line_no)
    if ring is None:
        raise ParseError("missing field/ring header")
    if rows is None:
        raise ParseError("missing rows header")
    if cols is None:
        if not square:
            raise ParseError("missing cols header (or square flag)")
        cols = rows
    if square and sorted(rows) != sorted(cols):
        raise ParseError("square matrices need rows == cols")
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        raise ParseError("duplicate index names")
    row_set, col_set = frozenset(rows), frozenset(cols)
    cells = {}
    for i, j, v, line_no in entries:
        if i not in row_set or j not in col_set:
            raise ParseError(f"entry ({i}, {j}) outside the index sets", line_no)
        try:
            value = int(v)
        except ValueError:
            raise ParseError(f"bad entry value {v!r}", line_no) from None
        cells[(i, j)] = value
    if ring == "field":
        field = gf(q)
        for (i, j), v in cells.items():
            if not 0 <= v < q:
                raise ParseError(f"entry {v} is not an element index below {q}")
        return "field", FieldMatrix(field, row_set, col_set, cells, square=square)
    if not square:
        raise ParseError("integer matrices must carry the square flag")
    return "int", IntMatrix.from_int_entries(cells, index_set=row_set)


def write_field_matrix(m: FieldMatrix) -> str:
    lines = [f"field {m.field.order}", "rows " + " ".join(sorted(map(str, m.rows)))]
    if m.square:
        lines.append("square")
    else:
        lines.append("cols " + " ".join(sorted(map(str, m.cols))))
    for (i, j) in sorted(m.entries, key=lambda pair: (str(pair[0]), str(pair[1]))):
        lines.append(f"{i} {j} {m.entries[(i, j)]}")
    return "\n".join(lines) + "\n"


def write_int_matrix(m: IntMatrix) -> str:
    lines = ["ring Z", "rows " + " ".join(sorted(map(str, m.index_set))), "square"]
    cells = m.to_int_entries()
    for (i, j) in sorted(cells, key=lambda pair: (str(pair[0]), str(pair[1]))):
        lines.append(f"{i} {j} {cells[(i, j)]}")
    return "\n".join(lines) + "\n"
