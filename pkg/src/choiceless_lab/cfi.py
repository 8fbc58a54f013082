"""Twisted gadget graphs over a connected base graph.

Every base vertex v of degree d contributes the block U(v) of 2^(d-1)
gadget vertices (v, X), X an even or odd subset of the edges at v, and
every base edge e contributes the pair U(e) of two vertices; (v, X) is
joined to the positive pair vertex of e when e is in X and to the negative
one otherwise.  A linear order on the base transports to a pre-order on
the block vertices only.  The twist set T decides, per base vertex,
whether the odd or the even subsets are kept; up to isomorphism only the
parity of |T| matters, and the two parities give non-isomorphic graphs.

The classifier and the isomorphism search work purely structurally (from
the edge and pre-order relations), so renaming vertices never changes a
verdict.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import GuardExceeded, ValidationError

__all__ = [
    "NOT_CFI",
    "BaseGraph",
    "GadgetGraph",
    "PaddedStructure",
    "PreGraph",
    "automorphism_from_edges",
    "build_twisted",
    "complete_graph",
    "distinguish_padded",
    "distinguish_structure",
    "from_structure",
    "isomorphic_gadgets",
    "odd_boundary",
    "pad",
    "recognize_and_classify",
    "to_structure",
]

NOT_CFI = "not-CFI"


@dataclass(frozen=True, eq=False)
class BaseGraph:
    """Connected simple graph with a fixed linear order on its vertices."""

    vertices: tuple
    edges: frozenset  # of 2-element frozensets

    def __post_init__(self):
        seen = set(self.vertices)
        if len(seen) != len(self.vertices):
            raise ValidationError("duplicate base vertices")
        for e in self.edges:
            if len(e) != 2 or not e <= seen:
                raise ValidationError(f"bad edge {set(e)!r}")
        if not self._connected():
            raise ValidationError("base graph must be connected")

    def _connected(self) -> bool:
        if not self.vertices:
            return False
        reached = {self.vertices[0]}
        frontier = [self.vertices[0]]
        while frontier:
            v = frontier.pop()
            for e in self.edges:
                if v in e:
                    (w,) = e - {v}
                    if w not in reached:
                        reached.add(w)
                        frontier.append(w)
        return len(reached) == len(self.vertices)

    def incident(self, v) -> frozenset:
        return frozenset(e for e in self.edges if v in e)


def complete_graph(n: int) -> BaseGraph:
    names = tuple(f"v{i}" for i in range(n))
    edges = frozenset(frozenset(p) for p in itertools.combinations(names, 2))
    return BaseGraph(names, edges)


def _edge_token(edge) -> str:
    return "".join(sorted(str(v) for v in edge))


def _block_token(v, x_set) -> str:
    inside = ".".join(sorted(_edge_token(e) for e in x_set)) or "none"
    return f"u_{v}_{inside}"


def _pair_token(edge, sign) -> str:
    return f"w_{_edge_token(edge)}_{'p' if sign else 'm'}"


@dataclass(frozen=True, eq=False)
class PreGraph:
    """Bare structure: vertices, undirected edges, pre-order pairs."""

    vertices: tuple
    edges: frozenset  # of 2-element frozensets
    preorder: frozenset  # of (x, y) pairs meaning x is ordered no later

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        return adj


@dataclass(frozen=True, eq=False)
class GadgetGraph:
    """A twisted gadget graph remembering its construction data."""

    base: BaseGraph
    twist: frozenset
    block_vertices: tuple  # tokens (v, X) in construction order
    pair_vertices: tuple  # tokens (e, sign)
    edges: frozenset
    rank: dict = field(repr=False)  # block vertex -> base vertex position

    def structure(self) -> PreGraph:
        pre = frozenset(
            (x, y)
            for x in self.block_vertices
            for y in self.block_vertices
            if self.rank[x] <= self.rank[y]
        )
        return PreGraph(self.block_vertices + self.pair_vertices, self.edges, pre)


def build_twisted(base: BaseGraph, twist) -> GadgetGraph:
    """The induced gadget graph keeping (v, X) when |X| is odd exactly for
    twisted base vertices."""
    twist = frozenset(twist)
    if not twist <= set(base.vertices):
        raise ValidationError("twist set must consist of base vertices")
    rank_of = {v: i for i, v in enumerate(base.vertices)}
    blocks = []
    rank = {}
    edges = set()
    pair_vertices = []
    for e in sorted(base.edges, key=_edge_token):
        pair_vertices.append(_pair_token(e, True))
        pair_vertices.append(_pair_token(e, False))
    for v in base.vertices:
        incident = sorted(base.incident(v), key=_edge_token)
        want_odd = v in twist
        for r in range(len(incident) + 1):
            for combo in itertools.combinations(incident, r):
                if (len(combo) % 2 == 1) != want_odd:
                    continue
                x_set = frozenset(combo)
                token = _block_token(v, x_set)
                blocks.append(token)
                rank[token] = rank_of[v]
                for e in incident:
                    edges.add(frozenset({token, _pair_token(e, e in x_set)}))
    return GadgetGraph(
        base, twist, tuple(blocks), tuple(pair_vertices), frozenset(edges), rank
    )


def odd_boundary(base: BaseGraph, edge_subset) -> frozenset:
    """Base vertices meeting an odd number of the given edges."""
    edge_subset = frozenset(edge_subset)
    if not edge_subset <= base.edges:
        raise ValidationError("edge subset leaves the base graph")
    return frozenset(
        v
        for v in base.vertices
        if sum(1 for e in edge_subset if v in e) % 2 == 1
    )


def automorphism_from_edges(base: BaseGraph, twist, edge_subset) -> dict:
    """The vertex map induced by an edge set: swap the pair vertices of the
    chosen edges and twist every block vertex by its incident chosen edges.
    Maps the twist-T graph onto the graph twisted at T xor the odd
    boundary."""
    edge_subset = frozenset(edge_subset)
    source = build_twisted(base, twist)
    mapping = {}
    for e in base.edges:
        flip = e in edge_subset
        mapping[_pair_token(e, True)] = _pair_token(e, not flip)
        mapping[_pair_token(e, False)] = _pair_token(e, flip)
    for v in base.vertices:
        incident = base.incident(v)
        local = incident & edge_subset
        want_odd = v in frozenset(twist)
        for r in range(len(incident) + 1):
            for combo in itertools.combinations(sorted(incident, key=_edge_token), r):
                if (len(combo) % 2 == 1) != want_odd:
                    continue
                x_set = frozenset(combo)
                mapping[_block_token(v, x_set)] = _block_token(v, x_set ^ local)
    assert set(mapping) >= set(source.block_vertices + source.pair_vertices)
    return mapping


@dataclass(frozen=True, eq=False)
class PaddedStructure:
    """A gadget graph plus order-free isolated padding vertices."""

    core: GadgetGraph
    padding: int

    def structure(self) -> PreGraph:
        inner = self.core.structure()
        pads = tuple(f"pad{t}" for t in range(self.padding))
        return PreGraph(inner.vertices + pads, inner.edges, inner.preorder)


def pad(gadget: GadgetGraph, m: int, max_m: int = 5) -> PaddedStructure:
    """Adjoin 2**(m*m) isolated vertices to a gadget over the complete
    graph on m+1 vertices."""
    if m > max_m:
        raise GuardExceeded("pad.max_m", max_m, m)
    expected = complete_graph(m + 1)
    if len(gadget.base.vertices) != m + 1 or len(gadget.base.edges) != len(expected.edges):
        raise ValidationError(f"gadget base is not the complete graph on {m + 1} vertices")
    return PaddedStructure(gadget, 2 ** (m * m))


# --------------------------------------------------------------- analysis


@dataclass(frozen=True, eq=False)
class _Shape:
    m: int
    classes: tuple  # ordered tuple of frozensets of block vertices
    class_of: dict
    pairs: dict  # (ci, cj) with ci < cj -> tuple of the two pair vertices
    pair_neighbours: dict  # block vertex -> frozenset of its pair-vertex edges
    padding: int


def _analyze(structure: PreGraph):
    """Decompose into ordered blocks, edge pairs and padding; None when the
    structure is not shaped like a twisted gadget over a complete base."""
    adj = structure.adjacency()
    field_set = {x for pair in structure.preorder for x in pair}
    if not field_set:
        return None
    before = {x: set() for x in field_set}  # everything x is ordered no later than
    for x, y in structure.preorder:
        if y not in field_set:
            return None
        before[x].add(y)
    # group by identical upward sets; a linear pre-order makes each class's
    # upward set exactly the union of itself and the later classes
    by_upward: dict = {}
    for x in field_set:
        by_upward.setdefault(frozenset(before[x]), set()).add(x)
    ordered_keys = sorted(by_upward, key=len, reverse=True)
    classes = [frozenset(by_upward[key]) for key in ordered_keys]
    expected: set = set()
    for key, cls in zip(reversed(ordered_keys), reversed(classes)):
        expected |= cls
        if set(key) != expected:
            return None
    sizes = {len(c) for c in classes}
    if len(sizes) != 1:
        return None
    block_size = sizes.pop()
    m = len(classes) - 1
    if m < 1 or block_size != 2 ** (m - 1):
        return None
    class_of = {x: i for i, c in enumerate(classes) for x in c}
    block_set = set(class_of)
    others = [v for v in structure.vertices if v not in block_set]
    isolated = [v for v in others if not adj[v]]
    linked = [v for v in others if adj[v]]
    if len(isolated) not in (0, 2 ** (m * m)):
        return None
    # group the linked extras into edge pairs by their incident class pair
    groups: dict = {}
    for w in linked:
        touched = set()
        for nb in adj[w]:
            if nb not in block_set:
                return None
            touched.add(class_of[nb])
        if len(touched) != 2:
            return None
        groups.setdefault(tuple(sorted(touched)), []).append(w)
    want_pairs = {(i, j) for i in range(m + 1) for j in range(i + 1, m + 1)}
    if set(groups) != want_pairs or any(len(g) != 2 for g in groups.values()):
        return None
    pairs = {key: tuple(sorted(g, key=str)) for key, g in groups.items()}
    # every block vertex meets exactly one vertex of each touching pair
    pair_neighbours = {}
    for ci, cls in enumerate(classes):
        touching = [key for key in pairs if ci in key]
        for x in cls:
            neigh = adj[x]
            if len(neigh) != len(touching):
                return None
            for key in touching:
                hit = [w for w in pairs[key] if w in neigh]
                if len(hit) != 1:
                    return None
            if any(nb in block_set for nb in neigh):
                return None
            pair_neighbours[x] = frozenset(neigh)
    return _Shape(m, tuple(classes), class_of, pairs, pair_neighbours, len(isolated))


def recognize_and_classify(structure: PreGraph, order):
    """Decide whether the structure is an isomorph of a twisted gadget over
    a complete base and return the twist parity (0 or 1), using the given
    linear order of the vertices for the plus/minus labelling; anything
    malformed yields ``"not-CFI"``."""
    shape = _analyze(structure)
    if shape is None:
        return NOT_CFI
    position = {v: i for i, v in enumerate(order)}
    if len(position) != len(structure.vertices) or set(position) != set(structure.vertices):
        raise ValidationError("order must enumerate the vertices")
    pair_keys = sorted(shape.pairs)
    plus_of = {}
    minus_of = {}
    for key in pair_keys:
        w1, w2 = shape.pairs[key]
        if position[w1] > position[w2]:
            w1, w2 = w2, w1
        plus_of[key], minus_of[key] = w1, w2
    # sign sequences per class, then the even-difference coherence law
    for ci, cls in enumerate(shape.classes):
        touching = [key for key in pair_keys if ci in key]
        sequences = []
        for x in cls:
            seq = tuple(plus_of[key] in shape.pair_neighbours[x] for key in touching)
            sequences.append(seq)
        for s1, s2 in itertools.combinations(sequences, 2):
            diff = sum(1 for u, v in zip(s1, s2) if u != v)
            if diff == 0 or diff % 2 == 1:
                return NOT_CFI
    # choose every minus vertex; a block is good when some member is
    # adjacent to chosen vertices only
    chosen = {minus_of[key] for key in pair_keys}
    bad = 0
    for cls in shape.classes:
        if not any(shape.pair_neighbours[x] <= chosen for x in cls):
            bad += 1
    return bad % 2


def distinguish_structure(structure: PreGraph, max_m: int = 4) -> int:
    """Exhaust all choices of one vertex per edge pair; report 0 when some
    choice leaves every block with a member adjacent to chosen vertices
    only, else 1."""
    shape = _analyze(structure)
    if shape is None:
        raise ValidationError("structure is not a twisted gadget")
    if shape.m > max_m:
        raise GuardExceeded("distinguish.max_m", max_m, shape.m)
    pair_keys = sorted(shape.pairs)
    options = [shape.pairs[key] for key in pair_keys]
    members = [list(cls) for cls in shape.classes]
    for pick in itertools.product(*options):
        chosen = frozenset(pick)
        if all(
            any(shape.pair_neighbours[x] <= chosen for x in cls) for cls in members
        ):
            return 0
    return 1


def distinguish_padded(padded: PaddedStructure, max_m: int = 4) -> int:
    return distinguish_structure(padded.structure(), max_m=max_m)


def isomorphic_gadgets(x: PreGraph, y: PreGraph) -> bool:
    """Isomorphism search restricted to maps preserving the pre-order
    classes and the edge pairs: per pair the two vertices map straight or
    swapped, and each block vertex must then land on the unique vertex
    with the matching neighbourhood."""
    sx = _analyze(x)
    sy = _analyze(y)
    if sx is None or sy is None:
        raise ValidationError("both structures must be twisted gadgets")
    if sx.m != sy.m or sx.padding != sy.padding:
        return False
    pair_keys = sorted(sx.pairs)
    if pair_keys != sorted(sy.pairs):
        return False
    y_lookup: dict = {}
    for ci, cls in enumerate(sy.classes):
        for v in cls:
            y_lookup[(ci, sy.pair_neighbours[v])] = v
    for flips in itertools.product((False, True), repeat=len(pair_keys)):
        pair_map = {}
        for key, flip in zip(pair_keys, flips):
            x1, x2 = sx.pairs[key]
            y1, y2 = sy.pairs[key]
            pair_map[x1] = y2 if flip else y1
            pair_map[x2] = y1 if flip else y2
        ok = True
        for ci, cls in enumerate(sx.classes):
            for v in cls:
                image_neigh = frozenset(pair_map[w] for w in sx.pair_neighbours[v])
                if (ci, image_neigh) not in y_lookup:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


# ------------------------------------------------------------ structure io


def to_structure(structure: PreGraph):
    """Encode as a structure with symmetric Adj and the pre-order Pre."""
    from .bgs import InputStructure

    adj_pairs = []
    for e in structure.edges:
        a, b = tuple(e)
        adj_pairs.append((a, b))
        adj_pairs.append((b, a))
    return InputStructure.build(
        list(structure.vertices),
        relations={"Adj": adj_pairs, "Pre": list(structure.preorder)},
        arities={"Adj": 2, "Pre": 2},
    )


def from_structure(structure) -> PreGraph:
    for name in ("Adj", "Pre"):
        if name not in structure.relations:
            raise ValidationError(f"structure lacks relation {name}")
    vertices = tuple(a.name for a in structure.atoms)
    edges = frozenset(
        frozenset({a.name, b.name}) for (a, b) in structure.relations["Adj"]
    )
    for e in edges:
        if len(e) != 2:
            raise ValidationError("adjacency contains a loop")
    preorder = frozenset((a.name, b.name) for (a, b) in structure.relations["Pre"])
    return PreGraph(vertices, edges, preorder)
