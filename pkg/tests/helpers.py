"""Shared constructors for interpreter tests."""

from __future__ import annotations

import random

from choiceless_lab.bgs import InputStructure


def empty_structure(n: int) -> InputStructure:
    return InputStructure.build([f"a{i}" for i in range(n)])


def power_structure(rows, r: int) -> InputStructure:
    """Structure encoding a Z/2 matrix (arc relation over index atoms) and
    an exponent r >= 1 (ordered digit atoms, one-bits marked)."""
    if r < 1:
        raise ValueError("exponent must be at least 1")
    n = len(rows)
    idx = [f"m{i}" for i in range(n)]
    digits = [f"d{s}" for s in range(r.bit_length())]
    arcs = [(idx[i], idx[j]) for i in range(n) for j in range(n) if rows[i][j] % 2]
    dless = [
        (digits[s], digits[t]) for s in range(len(digits)) for t in range(len(digits)) if s < t
    ]
    in_c = [(digits[s],) for s in range(len(digits)) if (r >> s) & 1]
    return InputStructure.build(
        idx + digits,
        relations={"Arc": arcs, "InC": in_c, "DLess": dless},
        arities={"Arc": 2, "InC": 1, "DLess": 2},
    )


def permuted_structure(structure: InputStructure, seed) -> InputStructure:
    """An isomorphic copy: atom names shuffled across both the listing
    order and every relation/function tuple."""
    rng = random.Random(seed)
    names = [a.name for a in structure.atoms]
    shuffled = names[:]
    rng.shuffle(shuffled)
    mapping = dict(zip(names, shuffled))
    listing = names[:]
    rng.shuffle(listing)
    relations = {
        name: [tuple(mapping[a.name] for a in tup) for tup in tuples]
        for name, tuples in structure.relations.items()
    }
    functions = {
        name: {
            tuple(mapping[a.name] for a in args): mapping[out.name]
            for args, out in table.items()
        }
        for name, table in structure.functions.items()
    }
    return InputStructure.build(
        listing, relations=relations, functions=functions, arities=dict(structure.arities)
    )


def x_table(outcome, idx_names):
    """Read back the X table of a finished power run as a 0/1 grid."""
    from choiceless_lab.hfset import TRUE, ordinal

    state = outcome.final_state
    one = ordinal(1)
    by_name = state.structure.by_name
    grid = []
    for i in idx_names:
        row = []
        for j in idx_names:
            value = state.read("X", (by_name[i], by_name[j]))
            row.append(1 if value is one else 0)
        grid.append(row)
    return grid
