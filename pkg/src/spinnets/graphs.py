"""Multigraphs, rotation systems, face tracing and genus.

A rotation scheme (clockwise cyclic order of the incident half-edges at
every vertex) determines a cellular embedding of a connected graph in an
orientable surface; the face boundaries fall out of the rotation rule
(arrive along a half-edge, leave along its successor at that vertex) and
Euler's formula gives the genus.  Everything is keyed on half-edges
(edge id, endpoint slot) so parallel edges trace correctly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

HalfEdge = tuple[str, int]   # (edge id, endpoint slot 0|1)
Side = tuple[str, int]       # (edge id, direction: 0 = slot0->slot1)


class SchemeBoundExceeded(RuntimeError):
    """Rotation-scheme enumeration refused because the count is too large."""


@dataclass(frozen=True)
class Graph:
    """Finite multigraph: vertex ids and edges (edge id, endpoint, endpoint).

    Self-loops are rejected; parallel edges are allowed up to
    multiplicity 3 (more never occurs for trivalent networks).
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        vset = set(self.vertices)
        seen = set()
        mult: dict[tuple[str, str], int] = {}
        for eid, u, v in self.edges:
            if eid in seen:
                raise ValueError(f"duplicate edge id {eid!r}")
            seen.add(eid)
            if u not in vset or v not in vset:
                raise ValueError(f"edge {eid!r} uses undeclared vertex")
            if u == v:
                raise ValueError(f"edge {eid!r} is a self-loop")
            key = (u, v) if u <= v else (v, u)
            mult[key] = mult.get(key, 0) + 1
            if mult[key] > 3:
                raise ValueError(f"more than 3 parallel edges between {key}")

    @staticmethod
    def build(vertices: Sequence, edges: Sequence) -> "Graph":
        return Graph(tuple(str(v) for v in vertices),
                     tuple((str(e), str(u), str(v)) for e, u, v in edges))

    @property
    def edge_map(self) -> dict[str, tuple[str, str]]:
        return {eid: (u, v) for eid, u, v in self.edges}

    def endpoints(self, eid: str) -> tuple[str, str]:
        return self.edge_map[eid]

    def incidences(self, v: str) -> tuple[HalfEdge, ...]:
        """Half-edges at v in edge-declaration order (the reference order)."""
        out = []
        for eid, a, b in self.edges:
            if a == v:
                out.append((eid, 0))
            if b == v:
                out.append((eid, 1))
        return tuple(out)

    def degree(self, v: str) -> int:
        return len(self.incidences(v))

    def half_edge_vertex(self, h: HalfEdge) -> str:
        eid, slot = h
        return self.edge_map[eid][slot]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for _, u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def is_trivalent(self) -> bool:
        return all(self.degree(v) == 3 for v in self.vertices)

    def simple_edge_set(self) -> frozenset[tuple[str, str]]:
        """Underlying simple graph as a set of sorted vertex pairs."""
        return frozenset((u, v) if u <= v else (v, u) for _, u, v in self.edges)


def _canon_rot(seq: tuple[HalfEdge, ...]) -> tuple[HalfEdge, ...]:
    """Rotate a cyclic sequence so the smallest element comes first."""
    if not seq:
        return seq
    i = seq.index(min(seq))
    return seq[i:] + seq[:i]


@dataclass(frozen=True)
class RotationScheme:
    """Clockwise cyclic order of incident half-edges at every vertex."""

    order: tuple[tuple[str, tuple[HalfEdge, ...]], ...]

    @staticmethod
    def make(graph: Graph, order: Mapping[str, Sequence[HalfEdge]]) -> "RotationScheme":
        rows = []
        for v in graph.vertices:
            seq = tuple(order[v])
            if sorted(seq) != sorted(graph.incidences(v)):
                raise ValueError(f"rotation at {v!r} is not a permutation of its half-edges")
            rows.append((v, _canon_rot(seq)))
        return RotationScheme(tuple(rows))

    @staticmethod
    def from_edge_ids(graph: Graph, order: Mapping[str, Sequence[str]]) -> "RotationScheme":
        """Rotation given as edge-id lists (unambiguous when no parallel pair at v)."""
        resolved: dict[str, list[HalfEdge]] = {}
        for v in graph.vertices:
            pool = list(graph.incidences(v))
            seq = []
            for eid in order[v]:
                match = next((h for h in pool if h[0] == str(eid)), None)
                if match is None:
                    raise ValueError(f"edge {eid!r} is not (or no longer) incident to {v!r}")
                pool.remove(match)
                seq.append(match)
            if pool:
                raise ValueError(f"rotation at {v!r} misses half-edges {pool}")
            resolved[v] = seq
        return RotationScheme.make(graph, resolved)

    @staticmethod
    def default(graph: Graph) -> "RotationScheme":
        return RotationScheme.make(graph, {v: graph.incidences(v) for v in graph.vertices})

    @staticmethod
    def from_orientations(graph: Graph, signs: Mapping[str, int]) -> "RotationScheme":
        """Trivalent graphs: +1 keeps the reference cyclic order, -1 swaps the
        last two half-edges.  The reference order is the incidence list sorted
        by (neighbour vertex, edge id)."""
        order = {}
        for v in graph.vertices:
            ref = _reference_order(graph, v)
            s = signs.get(v, +1)
            if s not in (+1, -1):
                raise ValueError(f"orientation at {v!r} must be +1 or -1")
            if len(ref) != 3:
                raise ValueError(f"orientation signs only apply to trivalent vertices, deg({v})={len(ref)}")
            order[v] = ref if s == +1 else (ref[0], ref[2], ref[1])
        return RotationScheme.make(graph, order)

    def at(self, v: str) -> tuple[HalfEdge, ...]:
        for w, seq in self.order:
            if w == v:
                return seq
        raise KeyError(v)

    def successor(self, v: str, h: HalfEdge) -> HalfEdge:
        seq = self.at(v)
        return seq[(seq.index(h) + 1) % len(seq)]


def _reference_order(graph: Graph, v: str) -> tuple[HalfEdge, ...]:
    """Canonical reference rotation at v: half-edges sorted by
    (opposite endpoint, edge id).  For K33 this is the ascending
    neighbour listing (135)/(246) used to define orientation signs."""
    def key(h: HalfEdge):
        eid, slot = h
        u, w = graph.edge_map[eid]
        other = w if slot == 0 else u
        return (other, eid)

    return tuple(sorted(graph.incidences(v), key=key))


def orientation_sign(graph: Graph, scheme: RotationScheme, v: str) -> int:
    """+1 if the rotation at a trivalent v is a cyclic rotation of the
    reference order, -1 for the opposite cyclic class."""
    ref = _reference_order(graph, v)
    if len(ref) != 3:
        raise ValueError(f"orientation sign needs a trivalent vertex, deg({v})={len(ref)}")
    cur = scheme.at(v)
    rotations = {cur, cur[1:] + cur[:1], cur[2:] + cur[:2]}
    return +1 if ref in rotations else -1


@dataclass(frozen=True)
class FaceTrace:
    """Closed face walks of a cellular embedding, as directed-side sequences."""

    faces: tuple[tuple[Side, ...], ...]

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.faces)

    @property
    def partition(self) -> tuple[int, ...]:
        return tuple(sorted(self.lengths))

    def __len__(self):
        return len(self.faces)


def _side_tail_head(graph: Graph, side: Side) -> tuple[str, str]:
    eid, direction = side
    u, v = graph.edge_map[eid]
    return (u, v) if direction == 0 else (v, u)


def side_vertices(graph: Graph, face: Sequence[Side]) -> tuple[str, ...]:
    """Vertex itinerary of a face walk (tail of each side)."""
    return tuple(_side_tail_head(graph, s)[0] for s in face)


def trace_faces(graph: Graph, scheme: RotationScheme) -> FaceTrace:
    """All face walks of the embedding given by ``scheme``.

    Each directed side appears in exactly one walk, exactly once.  Walks
    start from the lexicographically smallest unused side, so the output
    is deterministic.
    """
    if not graph.is_connected():
        raise ValueError("face tracing requires a connected graph")
    sides = sorted((eid, d) for eid, _, _ in graph.edges for d in (0, 1))
    unused = set(sides)
    faces = []
    for start in sides:
        if start not in unused:
            continue
        walk = []
        side = start
        while True:
            walk.append(side)
            unused.discard(side)
            eid, direction = side
            head = graph.edge_map[eid][1] if direction == 0 else graph.edge_map[eid][0]
            arrive: HalfEdge = (eid, 1 if direction == 0 else 0)
            depart = scheme.successor(head, arrive)
            nid, nslot = depart
            side = (nid, 0 if nslot == 0 else 1)
            if side == start:
                break
            if side not in unused:
                raise RuntimeError("face tracing revisited a side; invalid rotation scheme")
        faces.append(tuple(walk))
    return FaceTrace(tuple(faces))


def embedding_genus(graph: Graph, trace: FaceTrace) -> int:
    """Genus h from Euler's formula v - e + f = 2 - 2h."""
    v, e, f = len(graph.vertices), len(graph.edges), len(trace)
    val = 2 - v + e - f
    if val < 0 or val % 2:
        raise RuntimeError(
            f"Euler bookkeeping broken: v={v} e={e} f={f} gives 2-v+e-f={val}"
        )
    return val // 2


def scheme_count(graph: Graph) -> int:
    return math.prod(math.factorial(graph.degree(v) - 1) for v in graph.vertices)


def enumerate_schemes(graph: Graph, bound: int = 10 ** 6) -> Iterator[RotationScheme]:
    """Every rotation scheme exactly once, in deterministic order.

    Cyclic orders are canonicalized by pinning the smallest half-edge
    first; the remaining (deg-1)! arrangements are enumerated in sorted
    order vertex by vertex."""
    for v in graph.vertices:
        if graph.degree(v) < 2:
            raise ValueError(f"vertex {v!r} has degree < 2")
    total = scheme_count(graph)
    if total > bound:
        raise SchemeBoundExceeded(
            f"{total} rotation schemes exceed the bound {bound}; raise it explicitly"
        )
    per_vertex = []
    for v in graph.vertices:
        inc = sorted(graph.incidences(v))
        head, rest = inc[0], inc[1:]
        per_vertex.append([(head,) + p for p in itertools.permutations(rest)])
    for combo in itertools.product(*per_vertex):
        yield RotationScheme.make(graph, dict(zip(graph.vertices, combo)))


def graph_genus(graph: Graph, bound: int = 10 ** 6) -> int:
    """Orientable genus by exhaustive rotation-scheme search."""
    best = None
    for scheme in enumerate_schemes(graph, bound):
        h = embedding_genus(graph, trace_faces(graph, scheme))
        if best is None or h < best:
            best = h
            if best == 0:
                break
    if best is None:
        raise ValueError("graph has no vertices")
    return best


def is_planar(graph: Graph, bound: int = 10 ** 6) -> bool:
    return graph_genus(graph, bound) == 0


def is_embedded_cycle(face: Sequence[Side]) -> bool:
    """True when no edge occurs twice in the walk (in either direction)."""
    eids = [eid for eid, _ in face]
    return len(eids) == len(set(eids))


def set_value(graph: Graph, scheme: RotationScheme, vertex_set: Sequence[str]) -> int:
    """Modulus of the sum of orientation signs over the given trivalent vertices."""
    return abs(sum(orientation_sign(graph, scheme, str(v)) for v in vertex_set))


def bipartite_genus(s: int, r: int) -> int:
    """ceil((r-2)(s-2)/4), the genus of the complete bipartite graph K_{s,r}."""
    if s < 1 or r < 1:
        raise ValueError("parts must be positive")
    p = (r - 2) * (s - 2)
    return (p + 3) // 4 if p > 0 else 0


def k33_parts(graph: Graph) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """The two parts of a K33, smallest-vertex part first; error otherwise."""
    if len(graph.vertices) != 6 or len(graph.edges) != 9:
        raise ValueError("not K33: needs 6 vertices and 9 edges")
    if len(graph.simple_edge_set()) != 9:
        raise ValueError("not K33: parallel edges present")
    adj = {v: set() for v in graph.vertices}
    for _, u, v in graph.edges:
        adj[u].add(v)
        adj[v].add(u)
    v0 = min(graph.vertices)
    part_a = tuple(sorted(set(graph.vertices) - adj[v0]))
    part_b = tuple(sorted(adj[v0]))
    if len(part_a) != 3 or len(part_b) != 3:
        raise ValueError("not K33: no 3+3 bipartition")
    for a in part_a:
        if adj[a] != set(part_b):
            raise ValueError("not K33: not complete bipartite")
    return part_a, part_b


FAMILY_BY_VALUES = {(3, 3): "sym666", (1, 1): "sym4410", (1, 3): "asym18", (3, 1): "asym18"}
FAMILY_PARTITION = {"sym666": (6, 6, 6), "sym4410": (4, 4, 10), "asym18": (18,)}
FAMILY_GENUS = {"sym666": 1, "sym4410": 1, "asym18": 2}


def classify_k33(graph: Graph, scheme: RotationScheme) -> str:
    """Embedding family of a K33 rotation scheme: sym666 / sym4410 / asym18.

    Classified by the pair of set values and cross-checked against the
    face partition and genus of the actual trace."""
    part_a, part_b = k33_parts(graph)
    values = (set_value(graph, scheme, part_a), set_value(graph, scheme, part_b))
    family = FAMILY_BY_VALUES[values]
    trace = trace_faces(graph, scheme)
    if trace.partition != FAMILY_PARTITION[family] or \
            embedding_genus(graph, trace) != FAMILY_GENUS[family]:
        raise RuntimeError(
            f"set values {values} disagree with face partition {trace.partition}"
        )
    return family


# ---------------------------------------------------------------------------
# named graphs

def complete_graph(n: int) -> Graph:
    vs = [str(i) for i in range(1, n + 1)]
    es = []
    for i in range(n):
        for j in range(i + 1, n):
            es.append((f"e{i + 1}{j + 1}", vs[i], vs[j]))
    return Graph.build(vs, es)


def k4() -> Graph:
    return complete_graph(4)


def k5() -> Graph:
    return complete_graph(5)


def k33() -> Graph:
    """K33 with parts {1,3,5} and {2,4,6}."""
    vs = [str(i) for i in range(1, 7)]
    es = [(f"e{a}{b}", str(a), str(b)) for a in (1, 3, 5) for b in (2, 4, 6)]
    return Graph.build(vs, es)


def petersen() -> Graph:
    vs = [str(i) for i in range(10)]
    es = []
    for i in range(5):
        es.append((f"o{i}", str(i), str((i + 1) % 5)))        # outer cycle
        es.append((f"s{i}", str(i), str(i + 5)))              # spokes
        es.append((f"i{i}", str(i + 5), str((i + 2) % 5 + 5)))  # inner pentagram
    return Graph.build(vs, es)


def theta_graph() -> Graph:
    return Graph.build(["u", "v"], [("a", "u", "v"), ("b", "u", "v"), ("c", "u", "v")])


def prism3() -> Graph:
    vs = ["1", "2", "3", "4", "5", "6"]
    es = [("t1", "1", "2"), ("t2", "2", "3"), ("t3", "3", "1"),
          ("b1", "4", "5"), ("b2", "5", "6"), ("b3", "6", "4"),
          ("r1", "1", "4"), ("r2", "2", "5"), ("r3", "3", "6")]
    return Graph.build(vs, es)


def cube() -> Graph:
    vs = [str(i) for i in range(8)]
    es = []
    for i in range(4):
        es.append((f"t{i}", str(i), str((i + 1) % 4)))
        es.append((f"b{i}", str(i + 4), str((i + 1) % 4 + 4)))
        es.append((f"v{i}", str(i), str(i + 4)))
    return Graph.build(vs, es)
