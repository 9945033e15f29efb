"""Graph text format and DOT export.

One declaration per line, ``#`` starts a comment::

    vertex <id>
    edge <id> <vid> <vid> [spin=<2j>]
    rotation <vid> : <edge-id list clockwise>
    orient <vid> +1|-1        # trivalent alternative, relative to the
                              # declaration-order reference rotation

Spins are written as doubled integers.  Parse errors carry the line
number.  Vertices without a rotation/orient line default to declaration
order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graphs import Graph, RotationScheme, trace_faces
from .network import SpinNetwork


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


@dataclass
class GraphSpec:
    graph: Graph
    scheme: RotationScheme
    spins: dict[str, int]          # only edges with spin= attributes
    has_rotations: bool

    def network(self) -> SpinNetwork:
        missing = [e for e, _, _ in self.graph.edges if e not in self.spins]
        if missing:
            raise ValueError(f"edges without spin= attribute: {missing}")
        return SpinNetwork.make(self.graph, self.scheme, self.spins)


def parse_graph(text: str) -> GraphSpec:
    vertices: list[str] = []
    edges: list[tuple[str, str, str]] = []
    spins: dict[str, int] = {}
    rotations: dict[str, list[str]] = {}
    orients: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "vertex":
            if len(parts) != 2:
                raise ParseError(lineno, "vertex takes exactly one id")
            if parts[1] in vertices:
                raise ParseError(lineno, f"duplicate vertex {parts[1]!r}")
            vertices.append(parts[1])
        elif kind == "edge":
            if len(parts) not in (4, 5):
                raise ParseError(lineno, "edge takes: id, two vertex ids, optional spin=<2j>")
            eid, u, v = parts[1:4]
            if len(parts) == 5:
                attr = parts[4]
                if not attr.startswith("spin="):
                    raise ParseError(lineno, f"unknown edge attribute {attr!r}")
                try:
                    tw = int(attr[5:])
                except ValueError:
                    raise ParseError(lineno, f"spin must be a doubled integer, got {attr[5:]!r}")
                if tw < 0:
                    raise ParseError(lineno, "spin must be non-negative")
                spins[eid] = tw
            if u == v:
                raise ParseError(lineno, f"edge {eid!r} is a self-loop")
            if u not in vertices or v not in vertices:
                raise ParseError(lineno, f"edge {eid!r} uses an undeclared vertex")
            if any(e == eid for e, _, _ in edges):
                raise ParseError(lineno, f"duplicate edge id {eid!r}")
            edges.append((eid, u, v))
        elif kind == "rotation":
            body = line[len("rotation"):].strip()
            if ":" not in body:
                raise ParseError(lineno, "rotation syntax: rotation <vid> : <edge ids>")
            vid, eids = body.split(":", 1)
            vid = vid.strip()
            if vid not in vertices:
                raise ParseError(lineno, f"rotation for undeclared vertex {vid!r}")
            if vid in rotations or vid in orients:
                raise ParseError(lineno, f"duplicate rotation for {vid!r}")
            rotations[vid] = eids.split()
        elif kind == "orient":
            if len(parts) != 3 or parts[2] not in ("+1", "-1"):
                raise ParseError(lineno, "orient syntax: orient <vid> +1|-1")
            vid = parts[1]
            if vid not in vertices:
                raise ParseError(lineno, f"orient for undeclared vertex {vid!r}")
            if vid in rotations or vid in orients:
                raise ParseError(lineno, f"duplicate rotation for {vid!r}")
            orients[vid] = int(parts[2])
        else:
            raise ParseError(lineno, f"unknown declaration {kind!r}")

    try:
        graph = Graph.build(vertices, edges)
    except ValueError as exc:
        raise ParseError(0, str(exc))

    order: dict[str, list] = {}
    for v in graph.vertices:
        inc = list(graph.incidences(v))
        if v in rotations:
            seq = []
            pool = list(inc)
            for eid in rotations[v]:
                match = next((h for h in pool if h[0] == eid), None)
                if match is None:
                    raise ParseError(0, f"rotation at {v!r}: edge {eid!r} not incident (or repeated)")
                pool.remove(match)
                seq.append(match)
            if pool:
                raise ParseError(0, f"rotation at {v!r} misses half-edges of {[h[0] for h in pool]}")
            order[v] = seq
        elif v in orients:
            if len(inc) != 3:
                raise ParseError(0, f"orient only applies to trivalent vertices, deg({v})={len(inc)}")
            order[v] = inc if orients[v] == +1 else [inc[0], inc[2], inc[1]]
        else:
            order[v] = inc
    scheme = RotationScheme.make(graph, order)
    return GraphSpec(graph, scheme, spins, bool(rotations or orients))


def format_spin(twice: int, pretty: bool = False) -> str:
    if not pretty:
        return str(twice)
    return str(Fraction(twice, 2))


def to_dot(graph: Graph, scheme: RotationScheme | None = None,
           spins: dict[str, int] | None = None, pretty_spins: bool = False) -> str:
    """Undirected DOT export; edge labels j=<2j>/2, faces as comments."""
    lines = ["graph spinnet {"]
    for v in graph.vertices:
        lines.append(f'  "{v}";')
    for eid, u, v in graph.edges:
        label = eid
        if spins and eid in spins:
            label += f" j={format_spin(spins[eid], pretty_spins)}" + ("" if pretty_spins else "/2")
        lines.append(f'  "{u}" -- "{v}" [label="{label}"];')
    if scheme is not None:
        trace = trace_faces(graph, scheme)
        lines.append(f"  // faces (partition {list(trace.partition)}):")
        for face in trace.faces:
            walk = " ".join(f"{eid}{'+' if d == 0 else '-'}" for eid, d in face)
            lines.append(f"  //   {walk}")
    lines.append("}")
    return "\n".join(lines) + "\n"
