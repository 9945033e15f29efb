"""Reduction of closed trivalent spin networks to recoupling atoms.

A labelled trivalent multigraph with a rotation scheme is rewritten by
three local moves until only terminal diagrams remain:

* bigon (2-face): Schur collapse, factor delta * theta / Delta;
* triangle (3-face): excision, factor {legs; opposite edges};
* longer embedded-cycle face: crossing move on one of its edges,
  introducing a summed internal edge with weight Delta_x * {6j} and
  shortening the face by one;
* terminal 2-vertex, 1-face diagram: the toroidal phase factor (a twist
  factor), recording the torus handle.

Every move updates the rotation scheme so the remaining faces are the
rewritten embedding's faces; an 18-type (single-face, genus-2) K33 has
no embedded cycle at all and raises :class:`IrreducibleNetwork`.

Reduction order is pluggable (deterministic by default, seeded random
for order-independence tests); the emitted trace can replay a run.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .expressions import (Atom, Expression, SpinRef, evaluate_numeric, lit,
                          simplify, var)
from .graphs import (FaceTrace, Graph, HalfEdge, RotationScheme, Side,
                     embedding_genus, is_embedded_cycle, side_vertices, trace_faces)
from . import recoupling as rc
from .scalars import Deformation


class IrreducibleNetwork(Exception):
    """No embedded cycle is available; the reduction moves cannot proceed."""

    def __init__(self, partition, genus, message=None):
        self.partition = tuple(partition)
        self.genus = genus
        super().__init__(
            message or f"no embedded cycle: face partition {self.partition}, genus {genus}"
        )


class BlockedMove(ValueError):
    """The requested rewrite would create a self-loop (bridge/tadpole shape)."""


@dataclass(frozen=True)
class SpinNetwork:
    """Trivalent multigraph + rotation scheme + spin (2j) per edge.

    Spins may be literal 2j integers or bound-variable references (the
    latter only appear on engine-created internal edges)."""

    graph: Graph
    scheme: RotationScheme
    spins: tuple[tuple[str, SpinRef], ...]

    @staticmethod
    def make(graph: Graph, scheme: RotationScheme, spins: Mapping[str, int | SpinRef]) -> "SpinNetwork":
        if not graph.is_trivalent():
            raise ValueError("spin networks must be trivalent")
        if not graph.is_connected():
            raise ValueError("spin networks must be connected")
        rows = []
        for eid, _, _ in graph.edges:
            s = spins[eid]
            rows.append((eid, lit(s) if isinstance(s, int) else s))
        return SpinNetwork(graph, scheme, tuple(rows))

    def spin(self, eid: str) -> SpinRef:
        for e, s in self.spins:
            if e == eid:
                return s
        raise KeyError(eid)

    def vertex_triads(self) -> dict[str, tuple[SpinRef, SpinRef, SpinRef]]:
        out = {}
        for v in self.graph.vertices:
            out[v] = tuple(self.spin(h[0]) for h in self.graph.incidences(v))
        return out

    def all_concrete(self) -> bool:
        return all(ref[0] == "lit" for _, ref in self.spins)


@dataclass(frozen=True)
class ReductionStep:
    kind: str                      # bigon | triangle | crossing | phase | circle | inadmissible
    face_edges: tuple[str, ...]    # edges of the face acted on (or ())
    edge: str | None               # crossed edge for crossings
    introduced: str | None         # bound variable name for crossings


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[ReductionStep, ...]
    terminal: str                  # phase | planar | zero


Chooser = Callable[["SpinNetwork", list[tuple[Side, ...]]], tuple[tuple[Side, ...], str | None]]


# ---------------------------------------------------------------------------
# helpers on the working state

def _fresh(prefix: str, taken: set[str]) -> str:
    i = 0
    while f"{prefix}{i}" in taken:
        i += 1
    return f"{prefix}{i}"


def _spin_bounds(ref: SpinRef, bound: Sequence[tuple[str, int, int]]) -> tuple[int, int]:
    if ref[0] == "lit":
        return ref[1], ref[1]
    for name, lo, hi in bound:
        if name == ref[1]:
            return lo, hi
    raise KeyError(ref[1])


def _pair_range(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int, int] | None:
    """(lo, hi, parity) of spins admissible with both a- and b-interval ends."""
    parity = (a[0] + b[0]) % 2
    lo = max(0, a[0] - b[1], b[0] - a[1])
    hi = a[1] + b[1]
    if (lo % 2) != parity:
        lo += 1
    if hi < lo:
        return None
    return lo, hi, parity


def _rebuild(net: SpinNetwork, vertices, edges, rotations, spins) -> SpinNetwork:
    g = Graph(tuple(vertices), tuple(edges))
    scheme = RotationScheme.make(g, rotations)
    return SpinNetwork(g, scheme, tuple((eid, spins[eid]) for eid, _, _ in edges))


def _side_tail_head(graph: Graph, side: Side) -> tuple[str, str]:
    eid, d = side
    u, v = graph.edge_map[eid]
    return (u, v) if d == 0 else (v, u)


def _tail_half(side: Side) -> HalfEdge:
    eid, d = side
    return (eid, 0 if d == 0 else 1)


def _head_half(side: Side) -> HalfEdge:
    eid, d = side
    return (eid, 1 if d == 0 else 0)


def smallest_embedded_cycle(net: SpinNetwork) -> tuple[Side, ...] | None:
    """Minimal-length face that is an embedded cycle; ties broken by the
    lexicographically smallest sorted edge-id sequence."""
    faces = trace_faces(net.graph, net.scheme).faces
    cands = [f for f in faces if is_embedded_cycle(f)]
    if not cands:
        return None
    return min(cands, key=lambda f: (len(f), tuple(sorted(eid for eid, _ in f))))


def apply_crossing(net: SpinNetwork, face: Sequence[Side], eid: str,
                   bound: Sequence[tuple[str, int, int]] = ()
                   ) -> tuple[SpinNetwork, tuple[str, int, int], list[Atom]]:
    """Crossing move on ``eid`` within an embedded-cycle face.

    Replaces the edge by a summed internal edge x re-coupling the four
    surrounding legs, emits Delta_x * {prev next x; off_H off_T j}, and
    shortens the face by one.  Returns (network, (x, lo, hi), atoms)."""
    face = tuple(face)
    if not is_embedded_cycle(face):
        raise ValueError("crossing requires an embedded cycle")
    if len(face) <= 3:
        raise ValueError("crossing applies to faces longer than 3 (use excision)")
    idx = next((i for i, (e, _) in enumerate(face) if e == eid), None)
    if idx is None:
        raise ValueError(f"edge {eid!r} is not on the face")
    g = net.graph
    side = face[idx]
    prev_side = face[(idx - 1) % len(face)]
    next_side = face[(idx + 1) % len(face)]
    T, H = _side_tail_head(g, side)
    h_e_T, h_e_H = _tail_half(side), _head_half(side)
    h_prev = _head_half(prev_side)        # arrives at T
    h_next = _tail_half(next_side)        # departs from H
    (h_off_T,) = [h for h in g.incidences(T) if h not in (h_e_T, h_prev)]
    (h_off_H,) = [h for h in g.incidences(H) if h not in (h_e_H, h_next)]
    if h_prev[0] == h_next[0]:
        raise BlockedMove(f"face legs of {eid!r} are the same edge; crossing would make a loop")
    if h_off_T[0] == h_off_H[0]:
        raise BlockedMove(f"outer legs of {eid!r} are the same edge; crossing would make a loop")

    spins = dict(net.spins)
    s_prev, s_next = spins[h_prev[0]], spins[h_next[0]]
    s_off_T, s_off_H = spins[h_off_T[0]], spins[h_off_H[0]]
    s_e = spins[eid]

    taken_v = set(g.vertices)
    P = _fresh("w", taken_v)
    taken_v.add(P)
    Q = _fresh("w", taken_v)
    taken_e = {e for e, _, _ in g.edges}
    xname = _fresh("x", taken_e | {n for n, _, _ in bound})

    rng = None
    r1 = _pair_range(_spin_bounds(s_prev, bound), _spin_bounds(s_next, bound))
    r2 = _pair_range(_spin_bounds(s_off_T, bound), _spin_bounds(s_off_H, bound))
    if r1 and r2 and r1[2] == r2[2]:
        lo, hi = max(r1[0], r2[0]), min(r1[1], r2[1])
        if lo <= hi:
            rng = (xname, lo, hi)
    if rng is None:
        # no admissible internal spin: the whole evaluation is zero
        return net, (xname, 0, -2), []

    # rebuild the graph: P carries (prev, next, x), Q carries (off_H, off_T, x)
    new_edges = []
    for e, u, v in g.edges:
        if e == eid:
            continue
        uu, vv = u, v
        for h, to_P in ((h_prev, True), (h_next, True), (h_off_T, False), (h_off_H, False)):
            if e == h[0]:
                if h[1] == 0:
                    uu = P if to_P else Q
                else:
                    vv = P if to_P else Q
        new_edges.append((e, uu, vv))
    new_edges.append((xname, P, Q))

    new_vertices = [v for v in g.vertices if v not in (T, H)] + [P, Q]
    rotations = {v: net.scheme.at(v) for v in g.vertices if v not in (T, H)}
    rotations[P] = (h_prev, h_next, (xname, 0))
    rotations[Q] = (h_off_H, h_off_T, (xname, 1))
    spins.pop(eid)
    spins[xname] = var(xname)

    atoms = [Atom("loop", (var(xname),)),
             Atom("sixj", (s_prev, s_next, var(xname), s_off_H, s_off_T, s_e))]
    return _rebuild(net, new_vertices, new_edges, rotations, spins), rng, atoms


def crossing_face_lengths(net: SpinNetwork, eid: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Face partitions before/after the crossing rewiring on ``eid``.

    Applies the graph surgery of the crossing move without requiring the
    face to be an embedded cycle (used to demonstrate that crossing an
    edge of a single-face 18-type embedding does not shorten its circuit)."""
    g = net.graph
    before = trace_faces(g, net.scheme)
    face = next(f for f in before.faces if any(e == eid for e, _ in f))
    idx = next(i for i, (e, _) in enumerate(face) if e == eid)
    side = face[idx]
    prev_side = face[(idx - 1) % len(face)]
    next_side = face[(idx + 1) % len(face)]
    T, H = _side_tail_head(g, side)
    h_e_T, h_e_H = _tail_half(side), _head_half(side)
    h_prev = _head_half(prev_side)
    h_next = _tail_half(next_side)
    (h_off_T,) = [h for h in g.incidences(T) if h not in (h_e_T, h_prev)]
    (h_off_H,) = [h for h in g.incidences(H) if h not in (h_e_H, h_next)]
    if h_prev[0] == h_next[0] or h_off_T[0] == h_off_H[0]:
        raise BlockedMove(eid)
    taken_v = set(g.vertices)
    P = _fresh("w", taken_v)
    taken_v.add(P)
    Q = _fresh("w", taken_v)
    xname = _fresh("x", {e for e, _, _ in g.edges})
    new_edges = []
    for e, u, v in g.edges:
        if e == eid:
            continue
        uu, vv = u, v
        for h, to_P in ((h_prev, True), (h_next, True), (h_off_T, False), (h_off_H, False)):
            if e == h[0]:
                if h[1] == 0:
                    uu = P if to_P else Q
                else:
                    vv = P if to_P else Q
        new_edges.append((e, uu, vv))
    new_edges.append((xname, P, Q))
    new_vertices = [v for v in g.vertices if v not in (T, H)] + [P, Q]
    rotations = {v: net.scheme.at(v) for v in g.vertices if v not in (T, H)}
    rotations[P] = (h_prev, h_next, (xname, 0))
    rotations[Q] = (h_off_H, h_off_T, (xname, 1))
    g2 = Graph(tuple(new_vertices), tuple(new_edges))
    after = trace_faces(g2, RotationScheme.make(g2, rotations))
    return before.partition, after.partition


def excise_triangle(net: SpinNetwork, face: Sequence[Side]) -> tuple[SpinNetwork, list[Atom]]:
    """Collapse an embedded 3-cycle to a single vertex on its three legs,
    emitting {leg1 leg2 leg3; opp1 opp2 opp3} (legs paired with the
    opposite triangle edges)."""
    face = tuple(face)
    if len(face) != 3 or not is_embedded_cycle(face):
        raise ValueError("excision requires an embedded 3-cycle face")
    g = net.graph
    tri_edges = [e for e, _ in face]
    verts = list(side_vertices(g, face))  # tail of each side: V1, V2, V3
    legs: list[HalfEdge] = []
    for i, v in enumerate(verts):
        at_v = {_tail_half(face[i]), _head_half(face[(i - 1) % 3])}
        (leg,) = [h for h in g.incidences(v) if h not in at_v]
        legs.append(leg)
    if len({h[0] for h in legs}) != 3:
        raise BlockedMove("triangle legs repeat an edge; excision would make a loop")

    spins = dict(net.spins)
    leg_spins = [spins[h[0]] for h in legs]
    # edge opposite to the leg at verts[i] is the face side i+1 (not incident to verts[i])
    opp = [spins[tri_edges[(i + 1) % 3]] for i in range(3)]

    taken_v = set(g.vertices)
    w = _fresh("w", taken_v)
    new_edges = []
    for e, u, v in g.edges:
        if e in tri_edges:
            continue
        uu, vv = u, v
        for h in legs:
            if e == h[0]:
                if h[1] == 0:
                    uu = w
                else:
                    vv = w
        new_edges.append((e, uu, vv))
    new_vertices = [v for v in g.vertices if v not in verts] + [w]
    rotations = {v: net.scheme.at(v) for v in g.vertices if v not in verts}
    # legs attach in reverse face order: the face interior sits on the walk's
    # left, so collapsing it reverses the angular order around the new vertex
    rotations[w] = (legs[0], legs[2], legs[1])
    for e in tri_edges:
        spins.pop(e)

    atoms = [Atom("sixj", (leg_spins[0], leg_spins[1], leg_spins[2], opp[0], opp[1], opp[2]))]
    return _rebuild(net, new_vertices, new_edges, rotations, spins), atoms


def reduce_bigon(net: SpinNetwork, face: Sequence[Side]) -> tuple[SpinNetwork | None, list[Atom]]:
    """Schur collapse of a 2-face bounded by parallel edges.

    Emits delta(outer legs) * theta(leg, inner, inner) / Delta(leg) and
    splices the two legs into one edge.  For the closed theta network the
    splice closes into a free circle, emitting its loop value; the empty
    network (value already complete) is returned as None."""
    face = tuple(face)
    if len(face) != 2 or not is_embedded_cycle(face):
        raise ValueError("bigon reduction requires a 2-face with distinct parallel edges")
    g = net.graph
    e1, e2 = face[0][0], face[1][0]
    U, V_ = _side_tail_head(g, face[0])
    (h_a,) = [h for h in g.incidences(U) if h[0] not in (e1, e2)]
    (h_b,) = [h for h in g.incidences(V_) if h[0] not in (e1, e2)]
    spins = dict(net.spins)
    s1, s2 = spins[e1], spins[e2]
    sa, sb = spins[h_a[0]], spins[h_b[0]]

    atoms = []
    if not (h_a[0] == h_b[0]):
        atoms.append(Atom("delta", (sa, sb)))
    atoms.append(Atom("theta", (sa, s1, s2)))
    atoms.append(Atom("invloop", (sa,)))

    if h_a[0] == h_b[0]:
        # closed theta: the third edge becomes a free circle
        atoms.append(Atom("loop", (sa,)))
        remaining = [e for e, _, _ in g.edges if e not in (e1, e2, h_a[0])]
        if remaining:
            raise RuntimeError("theta collapse left stray edges")
        return None, atoms

    a_eid, b_eid = h_a[0], h_b[0]
    ua, va = g.edge_map[a_eid]
    other_a = va if ua == U else ua
    ub, vb = g.edge_map[b_eid]
    other_b = vb if ub == V_ else ub
    if other_a == other_b:
        raise BlockedMove("bigon splice would create a self-loop (bridge configuration)")

    # splice: reuse a's id for the merged edge other_a -> other_b
    slot_a = 0 if ua == other_a else 1
    new_edges = []
    for e, u, v in g.edges:
        if e in (e1, e2, b_eid):
            continue
        if e == a_eid:
            new_edges.append((e, other_a, other_b) if slot_a == 0 else (e, other_b, other_a))
        else:
            new_edges.append((e, u, v))
    new_slot_at_other_b = 1 if slot_a == 0 else 0
    old_h_b_other = (b_eid, 0 if ub == other_b else 1)
    rotations = {}
    for v in g.vertices:
        if v in (U, V_):
            continue
        seq = list(net.scheme.at(v))
        if v == other_b:
            seq = [(a_eid, new_slot_at_other_b) if h == old_h_b_other else h for h in seq]
        rotations[v] = tuple(seq)
    new_vertices = [v for v in g.vertices if v not in (U, V_)]
    spins.pop(e1)
    spins.pop(e2)
    spins.pop(b_eid)
    return _rebuild(net, new_vertices, new_edges, rotations, spins), atoms


def evaluate_phase_factor(net: SpinNetwork) -> list[Atom]:
    """Terminal toroidal diagram: 2 vertices, 3 parallel edges, single face.

    The most recently created edge takes the twisted slot; the shared
    cyclic orientation of the two vertices selects over- vs
    under-crossing.  A 2-vertex diagram with three faces is a theta and
    is routed through the bigon path instead."""
    g = net.graph
    if len(g.vertices) != 2 or len(g.edges) != 3:
        raise ValueError("phase factor needs a 2-vertex, 3-edge diagram")
    faces = trace_faces(g, net.scheme)
    if len(faces) != 1:
        raise ValueError("not a toroidal phase factor (theta has 3 faces); reduce it instead")
    eids = [e for e, _, _ in g.edges]
    x_e = eids[-1]
    l_e, m_e = eids[0], eids[1]
    u = min(g.vertices)
    seq = [h[0] for h in net.scheme.at(u)]
    i = seq.index(x_e)
    after_x = seq[(i + 1) % 3]
    # calibrated against the published 4+4+10 evaluation: the mirror
    # chirality ((x, m, l) cyclic) is the over-crossing
    crossing = "under" if after_x == l_e else "over"
    sl, sm, sx = net.spin(l_e), net.spin(m_e), net.spin(x_e)
    return [Atom("theta", (sl, sm, sx)), Atom("twist", (sl, sm, sx, crossing))]


# ---------------------------------------------------------------------------
# the reduction loop

def deterministic_chooser(net: SpinNetwork, cands: list[tuple[Side, ...]]):
    """Smallest face (ties by sorted edge ids); the crossed edge prefers an
    edge shared with another minimal candidate face (the shared edge of the
    two 4-cycles in the toroidal K33 pictures), falling back to the least
    edge id.  On planar networks the value does not depend on this choice."""
    face = cands[0]
    edge = None
    if len(face) > 3:
        shared = set()
        for other in cands[1:]:
            if len(other) != len(face):
                break
            shared.update(e for e, _ in other)
        eids = sorted(e for e, _ in face)
        ordered = [e for e in eids if e in shared] + [e for e in eids if e not in shared]
        for eid in ordered:
            try:
                _probe_crossing(net, face, eid)
            except BlockedMove:
                continue
            edge = eid
            break
    return face, edge


def random_chooser(seed: int) -> Chooser:
    """Seeded random choice among minimal-length candidate faces and their
    edges (minimality keeps every run terminating)."""
    rng = random.Random(seed)

    def choose(net: SpinNetwork, cands: list[tuple[Side, ...]]):
        min_len = len(cands[0])
        pool = [f for f in cands if len(f) == min_len]
        face = rng.choice(pool)
        edge = None
        if len(face) > 3:
            eids = [e for e, _ in face]
            rng.shuffle(eids)
            for eid in eids:
                try:
                    _probe_crossing(net, face, eid)
                except BlockedMove:
                    continue
                edge = eid
                break
        return face, edge

    return choose


def _probe_crossing(net: SpinNetwork, face, eid):
    g = net.graph
    idx = next(i for i, (e, _) in enumerate(face) if e == eid)
    side = face[idx]
    prev_side = face[(idx - 1) % len(face)]
    next_side = face[(idx + 1) % len(face)]
    T, H = _side_tail_head(g, side)
    h_e_T, h_e_H = _tail_half(side), _head_half(side)
    h_prev = _head_half(prev_side)
    h_next = _tail_half(next_side)
    (h_off_T,) = [h for h in g.incidences(T) if h not in (h_e_T, h_prev)]
    (h_off_H,) = [h for h in g.incidences(H) if h not in (h_e_H, h_next)]
    if h_prev[0] == h_next[0] or h_off_T[0] == h_off_H[0]:
        raise BlockedMove(eid)


def decompose(net: SpinNetwork, chooser: Chooser | None = None,
              max_steps: int = 10000) -> tuple[Expression, ReductionTrace]:
    """Full reduction to an Expression over recoupling atoms.

    Raises IrreducibleNetwork when no embedded cycle exists (the 18-type
    double-torus embeddings)."""
    if not net.all_concrete():
        raise ValueError("decompose needs concrete edge spins")
    chooser = chooser or deterministic_chooser
    steps: list[ReductionStep] = []

    for v, triad in net.vertex_triads().items():
        a, b, c = (t[1] for t in triad)
        if not rc.admissible(a, b, c):
            steps.append(ReductionStep("inadmissible", (), None, None))
            return Expression.null(), ReductionTrace(tuple(steps), "zero")

    bound: list[tuple[str, int, int]] = []
    atoms: list[Atom] = []
    state: SpinNetwork | None = net
    terminal = "planar"
    for _ in range(max_steps):
        if state is None or not state.graph.edges:
            break
        faces = trace_faces(state.graph, state.scheme)
        nv = len(state.graph.vertices)
        if nv == 2 and len(faces) == 1:
            atoms.extend(evaluate_phase_factor(state))
            steps.append(ReductionStep("phase", tuple(e for e, _, _ in state.graph.edges), None, None))
            terminal = "phase"
            state = None
            break
        cands = sorted((f for f in faces.faces if is_embedded_cycle(f)),
                       key=lambda f: (len(f), tuple(sorted(e for e, _ in f))))
        if not cands:
            raise IrreducibleNetwork(faces.partition, embedding_genus(state.graph, faces))
        face, edge = chooser(state, cands)
        f_edges = tuple(e for e, _ in face)
        if len(face) == 2:
            state, emitted = reduce_bigon(state, face)
            atoms.extend(emitted)
            steps.append(ReductionStep("bigon", f_edges, None, None))
        elif len(face) == 3:
            state, emitted = excise_triangle(state, face)
            atoms.extend(emitted)
            steps.append(ReductionStep("triangle", f_edges, None, None))
        else:
            if edge is None:
                raise BlockedMove(f"no crossable edge on face {f_edges}")
            state, rng, emitted = apply_crossing(state, face, edge, bound)
            if rng[2] < rng[1]:
                steps.append(ReductionStep("inadmissible", f_edges, edge, None))
                return Expression.null(), ReductionTrace(tuple(steps), "zero")
            bound.append(rng)
            atoms.extend(emitted)
            steps.append(ReductionStep("crossing", f_edges, edge, rng[0]))
    else:
        raise RuntimeError("reduction did not terminate")

    expr = Expression(tuple(bound), tuple(atoms))
    expr.check()
    return simplify(expr), ReductionTrace(tuple(steps), terminal)


def replay_chooser(trace: ReductionTrace) -> Chooser:
    """Chooser that replays a recorded reduction step for step."""
    queue = [s for s in trace.steps if s.kind in ("bigon", "triangle", "crossing", "phase")]
    pos = {"i": 0}

    def choose(net: SpinNetwork, cands: list[tuple[Side, ...]]):
        step = queue[pos["i"]]
        pos["i"] += 1
        for f in cands:
            if tuple(e for e, _ in f) == step.face_edges:
                return f, step.edge
        raise ValueError(f"trace replay: face {step.face_edges} not available")

    return choose


def evaluate_network(net: SpinNetwork, d: Deformation, chooser: Chooser | None = None,
                     phase_override: bool = False):
    expr, _ = decompose(net, chooser)
    return evaluate_numeric(expr, d, phase_override=phase_override)
