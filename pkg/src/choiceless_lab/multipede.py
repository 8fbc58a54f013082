"""Segment/feet structures with hyperedges and positive foot triples.

Each segment owns exactly two feet.  Hyperedges are 3-element segment
sets; over each hyperedge the eight foot triples split into two classes
of four under "even symmetric difference", and the positive triples are
exactly one of those classes.  A linear order on segments and an optional
distinguished foot (the shoe, required to sit on the first segment)
complete the picture; a further power-set sort can be materialized but
carries no isomorphism content.

Oddness (every nonempty segment set meets some hyperedge oddly) is the
triviality of the GF(2) column kernel of the hyperedge incidence matrix;
the automorphisms are exactly the foot flips along kernel vectors, so odd
structures are rigid.

Isomorphism with shoes: a base matching pairs left feet with left feet
(an auxiliary fixed order on foot names separates the two feet; the shoe
is declared left regardless).  Every candidate matching flips the base at
some segment set avoiding the shoe's segment, and the positivity defects
of the base matching give a GF(2) linear system whose solvability under
that avoidance constraint decides isomorphism.  The exhaustive decider
enumerates the shoe-respecting matchings directly.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import GuardExceeded, ValidationError
from .linalg import FieldMatrix, rank_gaussian, solve_gaussian, zp

__all__ = [
    "Multipede2",
    "Multipede3",
    "Multipede4",
    "ShodMultipede",
    "automorphism_count",
    "flip_feet",
    "from_structure",
    "from_structure_lenient",
    "is_odd",
    "iso3_decide",
    "iso4_decide",
    "random_multipede",
    "shoe_expansions",
    "to_structure",
    "validate",
]

_GF2 = zp(2)


@dataclass(frozen=True, eq=False)
class Multipede2:
    """Two-sorted structure: segments, feet, the foot-to-segment map, the
    hyperedges and the positive triples."""

    segments: tuple
    feet: tuple
    segment_of: dict  # foot -> segment
    hyperedges: frozenset  # of 3-element frozensets of segments
    positives: frozenset  # of 3-element frozensets of feet

    def feet_of(self, segment) -> tuple:
        """The two feet of a segment, in the auxiliary (name) order."""
        pair = sorted((f for f in self.feet if self.segment_of[f] == segment), key=str)
        return tuple(pair)

    @staticmethod
    def from_representatives(segments, hyperedges, representatives) -> "Multipede2":
        """Build with feet named ``<segment>a`` / ``<segment>b``, expanding
        one representative triple per hyperedge into its full positivity
        class (the triples of even symmetric difference)."""
        segments = tuple(segments)
        feet = tuple(f"{s}{side}" for s in segments for side in ("a", "b"))
        segment_of = {f"{s}{side}": s for s in segments for side in ("a", "b")}
        positives: set = set()
        for edge, rep in representatives.items():
            edge = frozenset(edge)
            positives.update(_positivity_class(edge, frozenset(rep), segment_of))
        return Multipede2(segments, feet, segment_of, frozenset(map(frozenset, hyperedges)), frozenset(positives))


def _positivity_class(edge, rep, segment_of) -> set:
    """The four triples with even symmetric difference from the given one."""
    by_segment = {segment_of[f]: f for f in rep}
    if frozenset(by_segment) != edge:
        raise ValidationError(f"representative {set(rep)} does not cover {set(edge)}")
    pair_of = {}
    for f, s in segment_of.items():
        if s in by_segment:
            pair_of.setdefault(s, set()).add(f)
    out = set()
    segs = sorted(edge, key=str)
    for flip_two in [()] + list(itertools.combinations(segs, 2)):
        triple = set()
        for s in segs:
            chosen = by_segment[s]
            if s in flip_two:
                (chosen,) = pair_of[s] - {chosen}
            triple.add(chosen)
        out.add(frozenset(triple))
    return out


@dataclass(frozen=True, eq=False)
class Multipede3(Multipede2):
    """A 2-multipede with a linear order on segments."""

    segment_order: tuple = ()

    def __post_init__(self):
        if sorted(self.segment_order, key=str) != sorted(self.segments, key=str):
            raise ValidationError("segment order must enumerate the segments")

    @property
    def first_segment(self):
        return self.segment_order[0]


@dataclass(frozen=True, eq=False)
class Multipede4(Multipede3):
    """A 3-multipede with a sets sort: materialized power set when small,
    otherwise a symbolic marker (the sort adds no isomorphism constraint)."""

    sets_sort: tuple = None  # type: ignore[assignment]

    @staticmethod
    def from_multipede3(m3: "Multipede3", materialize_limit: int = 16) -> "Multipede4":
        sets_sort = None
        if len(m3.segments) <= materialize_limit:
            sets_sort = tuple(
                frozenset(c)
                for r in range(len(m3.segments) + 1)
                for c in itertools.combinations(sorted(m3.segments, key=str), r)
            )
        return Multipede4(
            m3.segments,
            m3.feet,
            m3.segment_of,
            m3.hyperedges,
            m3.positives,
            m3.segment_order,
            sets_sort,
        )


@dataclass(frozen=True, eq=False)
class ShodMultipede:
    """A 3- or 4-multipede with a distinguished foot on the first segment."""

    pede: Multipede3
    shoe: str

    def __post_init__(self):
        if self.shoe not in self.pede.feet:
            raise ValidationError("the shoe must be a foot")
        if self.pede.segment_of[self.shoe] != self.pede.first_segment:
            raise ValidationError("the shoe must sit on the first segment")

    def left_foot(self, segment) -> str:
        """The auxiliary-order-first foot, except that the shoe is always
        the left foot of its segment."""
        f1, f2 = self.pede.feet_of(segment)
        if self.shoe in (f1, f2):
            return self.shoe
        return f1

    def right_foot(self, segment) -> str:
        f1, f2 = self.pede.feet_of(segment)
        left = self.left_foot(segment)
        return f2 if left == f1 else f1


def validate(m: Multipede2) -> list:
    """All axiom violations, each tagged with a name and witnesses."""
    out = []
    for s in m.segments:
        count = sum(1 for f in m.feet if m.segment_of[f] == s)
        if count != 2:
            out.append(("two-feet", s, count))
    for f in m.feet:
        if m.segment_of[f] not in set(m.segments):
            out.append(("foot-segment", f))
    for h in m.hyperedges:
        if len(h) != 3 or not h <= set(m.segments):
            out.append(("hyperedge-shape", tuple(sorted(h, key=str))))
    for p in m.positives:
        if len(p) != 3:
            out.append(("positive-shape", tuple(sorted(p, key=str))))
            continue
        image = frozenset(m.segment_of[f] for f in p)
        if len(image) != 3 or image not in m.hyperedges:
            out.append(("positive-image", tuple(sorted(p, key=str))))
    by_edge: dict = {}
    for p in m.positives:
        image = frozenset(m.segment_of[f] for f in p)
        if len(image) == 3 and image in m.hyperedges:
            by_edge.setdefault(image, set()).add(p)
    for h in m.hyperedges:
        club = by_edge.get(h, set())
        if len(club) != 4:
            out.append(("four-of-eight", tuple(sorted(h, key=str)), len(club)))
        for p1, p2 in itertools.combinations(sorted(club, key=sorted), 2):
            # two triples differing in k positions have a 2k-element
            # symmetric difference, so "even position count" means 0 mod 4
            if len(p1 ^ p2) % 4 != 0:
                out.append(
                    ("even-difference", tuple(sorted(p1, key=str)), tuple(sorted(p2, key=str)))
                )
    return out


def _incidence_matrix(m: Multipede3):
    """Hyperedge-by-segment incidence over GF(2), rows and columns keyed by
    lexicographic hyperedge index triples and segment positions."""
    seg_index = {s: i for i, s in enumerate(m.segment_order)}
    rows = sorted(tuple(sorted(seg_index[s] for s in h)) for h in m.hyperedges)
    entries = {}
    for row in rows:
        for col in row:
            entries[(row, col)] = 1
    matrix = FieldMatrix(
        _GF2,
        frozenset(rows),
        frozenset(range(len(m.segment_order))),
        entries,
    )
    return matrix, rows


def is_odd(m: Multipede3) -> bool:
    """Whether every nonempty segment set meets some hyperedge oddly: the
    incidence matrix must have full column rank."""
    if not m.segments:
        raise ValidationError("a multipede needs at least one segment")
    if not m.hyperedges:
        return False
    matrix, rows = _incidence_matrix(m)
    n = len(m.segment_order)
    return rank_gaussian(_GF2, matrix, rows, list(range(n))) == n


def automorphism_count(m: Multipede3, max_segments: int = 16) -> int:
    """Number of automorphisms: two to the dimension of the incidence
    matrix's column kernel (foot flips meeting every hyperedge evenly)."""
    n = len(m.segment_order)
    if n > max_segments:
        raise GuardExceeded("automorphism_count.max_segments", max_segments, n)
    if not m.hyperedges:
        return 2**n
    matrix, rows = _incidence_matrix(m)
    rank = rank_gaussian(_GF2, matrix, rows, list(range(n)))
    return 2 ** (n - rank)


def flip_feet(m: Multipede3, segments_to_flip) -> Multipede3:
    """The multipede with the two feet of the chosen segments exchanged in
    every positive triple (same carrier, twisted positivity)."""
    flip = frozenset(segments_to_flip)
    swap = {}
    for s in m.segments:
        f1, f2 = m.feet_of(s)
        if s in flip:
            swap[f1], swap[f2] = f2, f1
        else:
            swap[f1], swap[f2] = f1, f2
    positives = frozenset(frozenset(swap[f] for f in p) for p in m.positives)
    return Multipede3(
        m.segments, m.feet, m.segment_of, m.hyperedges, positives, m.segment_order
    )


def _aligned_skeletons(a: ShodMultipede, b: ShodMultipede):
    """Segment-level agreement under the order bijection; returns the
    hyperedge rows (index triples) shared by both, or None."""
    na, nb = len(a.pede.segment_order), len(b.pede.segment_order)
    if na != nb:
        return None
    a_idx = {s: i for i, s in enumerate(a.pede.segment_order)}
    b_idx = {s: i for i, s in enumerate(b.pede.segment_order)}
    a_rows = {tuple(sorted(a_idx[s] for s in h)) for h in a.pede.hyperedges}
    b_rows = {tuple(sorted(b_idx[s] for s in h)) for h in b.pede.hyperedges}
    if a_rows != b_rows:
        return None
    return sorted(a_rows)


def _base_matching(a: ShodMultipede, b: ShodMultipede) -> dict:
    """Left feet to left feet, right to right, segment by order position."""
    mu = {}
    for sa, sb in zip(a.pede.segment_order, b.pede.segment_order):
        mu[a.left_foot(sa)] = b.left_foot(sb)
        mu[a.right_foot(sa)] = b.right_foot(sb)
    return mu


def _defect_vector(a: ShodMultipede, b: ShodMultipede, rows) -> dict:
    """Per hyperedge (in lexicographic order): 0 when the base matching
    preserves positivity there, 1 otherwise."""
    a_idx = {s: i for i, s in enumerate(a.pede.segment_order)}
    mu = _base_matching(a, b)
    reps: dict = {}
    for p in a.pede.positives:
        row = tuple(sorted(a_idx[a.pede.segment_of[f]] for f in p))
        reps.setdefault(row, p)
    vector = {}
    for row in rows:
        rep = reps.get(row)
        if rep is None:
            raise ValidationError("hyperedge without positive triples; validate first")
        image = frozenset(mu[f] for f in rep)
        vector[row] = 0 if image in b.pede.positives else 1
    return vector


def iso3_decide(a: ShodMultipede, b: ShodMultipede) -> bool:
    """Isomorphism of shod 3-multipedes by one GF(2) linear system.

    Candidate matchings are the base matching flipped at a segment set X;
    preserving positivity forces the incidence system A x = v, and keeping
    the shoe fixed forces X to avoid the first segment, which enters the
    system as one extra equation.
    """
    rows = _aligned_skeletons(a, b)
    if rows is None:
        return False
    if not rows:
        return True  # no hyperedges, no positivity to respect
    n = len(a.pede.segment_order)
    vector = _defect_vector(a, b, rows)
    matrix_rows = frozenset(rows) | {("shoe",)}
    entries = {}
    for row in rows:
        for col in row:
            entries[(row, col)] = 1
    entries[(("shoe",), 0)] = 1  # x_0 = 0 keeps the shoe on its foot
    matrix = FieldMatrix(_GF2, matrix_rows, frozenset(range(n)), entries)
    rhs = dict(vector)
    rhs[("shoe",)] = 0
    solution = solve_gaussian(
        _GF2, matrix, rhs, sorted(matrix_rows, key=str), list(range(n))
    )
    return solution is not None


def iso4_decide(a: ShodMultipede, b: ShodMultipede, max_segments: int = 16) -> bool:
    """Exhaustive decision: try every foot matching that respects the
    segment map and keeps the shoe on the shoe (flip sets over the
    non-first segments)."""
    n = len(a.pede.segment_order)
    if n > max_segments:
        raise GuardExceeded("iso4_decide.max_segments", max_segments, n)
    rows = _aligned_skeletons(a, b)
    if rows is None:
        return False
    a_idx = {s: i for i, s in enumerate(a.pede.segment_order)}
    mu = _base_matching(a, b)
    reps: dict = {}
    for p in a.pede.positives:
        row = tuple(sorted(a_idx[a.pede.segment_of[f]] for f in p))
        reps.setdefault(row, set()).add(p)
    flippable = a.pede.segment_order[1:]
    b_swap = {}
    for sb in b.pede.segment_order:
        lb, rb = b.left_foot(sb), b.right_foot(sb)
        b_swap[lb], b_swap[rb] = rb, lb
    for r in range(len(flippable) + 1):
        for combo in itertools.combinations(flippable, r):
            flipped = {a_idx[s] for s in combo}
            matching = dict(mu)
            for s in combo:
                la = a.left_foot(s)
                ra = a.right_foot(s)
                matching[la] = b_swap[mu[la]]
                matching[ra] = b_swap[mu[ra]]
            ok = True
            for row, triples in reps.items():
                for p in triples:
                    if (frozenset(matching[f] for f in p) in b.pede.positives) != True:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return True
    return False


def shoe_expansions(m3: Multipede3):
    """The two shod versions of a 3-multipede (one per foot of the first
    segment)."""
    f1, f2 = m3.feet_of(m3.first_segment)
    return ShodMultipede(m3, f1), ShodMultipede(m3, f2)


def random_multipede(n_segments: int, n_hyperedges: int, seed) -> Multipede3:
    """Random valid 3-multipede: distinct random hyperedges, a uniformly
    chosen positivity class per hyperedge, and a shuffled segment order."""
    if n_segments < 3 and n_hyperedges > 0:
        raise ValidationError("hyperedges need at least three segments")
    total = (
        n_segments * (n_segments - 1) * (n_segments - 2) // 6 if n_segments >= 3 else 0
    )
    if n_hyperedges > total:
        raise ValidationError(
            f"requested {n_hyperedges} hyperedges, only {total} exist"
        )
    rng = random.Random(seed)
    segments = [f"s{i:02d}" for i in range(n_segments)]
    combos = list(itertools.combinations(segments, 3))
    hyperedges = [frozenset(c) for c in rng.sample(combos, n_hyperedges)]
    representatives = {}
    for h in hyperedges:
        rep = frozenset(f"{s}{rng.choice('ab')}" for s in h)
        representatives[h] = rep
    order = segments[:]
    rng.shuffle(order)
    base = Multipede2.from_representatives(segments, hyperedges, representatives)
    return Multipede3(
        base.segments,
        base.feet,
        base.segment_of,
        base.hyperedges,
        base.positives,
        tuple(order),
    )


# ------------------------------------------------------------ structure io


def to_structure(pede_or_shod):
    """Encode as a structure: sorts via Segment/Foot, the foot map S, the
    symmetric ternary Hyper and Positive, the segment order Leq, and the
    Shoe marker (empty for a bare multipede)."""
    from .bgs import InputStructure

    if isinstance(pede_or_shod, ShodMultipede):
        m = pede_or_shod.pede
        shoes = [(str(pede_or_shod.shoe),)]
    else:
        m = pede_or_shod
        shoes = []
    names = [str(s) for s in m.segments] + [str(f) for f in m.feet]
    seg_pos = {s: i for i, s in enumerate(m.segment_order)}
    leq = [
        (str(s), str(t))
        for s in m.segments
        for t in m.segments
        if seg_pos[s] <= seg_pos[t]
    ]
    hyper = [
        perm for h in m.hyperedges for perm in itertools.permutations(sorted(h, key=str))
    ]
    pos = [
        perm for p in m.positives for perm in itertools.permutations(sorted(p, key=str))
    ]
    return InputStructure.build(
        names,
        relations={
            "Segment": [(str(s),) for s in m.segments],
            "Foot": [(str(f),) for f in m.feet],
            "S": [(str(f), str(m.segment_of[f])) for f in m.feet],
            "Hyper": hyper,
            "Positive": pos,
            "Leq": leq,
            "Shoe": shoes,
        },
        arities={
            "Segment": 1,
            "Foot": 1,
            "S": 2,
            "Hyper": 3,
            "Positive": 3,
            "Leq": 2,
            "Shoe": 1,
        },
    )


def from_structure_lenient(structure):
    """Decode the carrier without enforcing the axioms; returns the bare
    3-multipede and the shoe name (or None)."""
    needed = ("Segment", "Foot", "S", "Hyper", "Positive", "Leq", "Shoe")
    for name in needed:
        if name not in structure.relations:
            raise ValidationError(f"structure lacks relation {name}")
    segments = tuple(sorted(t[0].name for t in structure.relations["Segment"]))
    feet = tuple(sorted(t[0].name for t in structure.relations["Foot"]))
    segment_of = {f.name: s.name for (f, s) in structure.relations["S"]}
    if set(segment_of) != set(feet):
        raise ValidationError("S must assign a segment to every foot")
    hyperedges = frozenset(
        frozenset(x.name for x in tup) for tup in structure.relations["Hyper"]
    )
    positives = frozenset(
        frozenset(x.name for x in tup) for tup in structure.relations["Positive"]
    )
    leq = {(x.name, y.name) for (x, y) in structure.relations["Leq"]}
    later_counts = {s: sum(1 for (x, _) in leq if x == s) for s in segments}
    order = tuple(sorted(segments, key=lambda s: -later_counts[s]))
    for i, s in enumerate(order):
        if later_counts[s] != len(segments) - i:
            raise ValidationError("Leq is not a linear order on segments")
    shoes = [t[0].name for t in structure.relations["Shoe"]]
    if len(shoes) > 1:
        raise ValidationError("at most one shoe is allowed")
    pede = Multipede3(segments, feet, segment_of, hyperedges, positives, order)
    return pede, (shoes[0] if shoes else None)


def from_structure(structure) -> ShodMultipede:
    """Decode a shod multipede, enforcing the axioms."""
    pede, shoe = from_structure_lenient(structure)
    violations = validate(pede)
    if violations:
        raise ValidationError(f"invalid multipede: {violations[:3]}")
    if shoe is None:
        raise ValidationError("exactly one shoe is required")
    return ShodMultipede(pede, shoe)
