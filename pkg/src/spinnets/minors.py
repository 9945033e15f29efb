"""Brute-force forbidden-minor detection (K5 / K33) for small graphs.

Minors are generated by breadth-first search over edge deletions and
contractions, with parallel edges collapsed and loops dropped after
every contraction (minor targets are simple).  Visited states are
deduplicated by an exact canonical form (colour refinement plus
backtracking over the remaining colour classes), which keeps the search
sound: two states are merged only if genuinely isomorphic.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache

from .graphs import Graph

SimpleGraph = tuple[int, frozenset[tuple[int, int]]]  # (n, edges over 0..n-1)


def _to_simple(graph: Graph) -> SimpleGraph:
    idx = {v: i for i, v in enumerate(sorted(graph.vertices))}
    edges = set()
    for _, u, v in graph.edges:
        a, b = idx[u], idx[v]
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return len(idx), frozenset(edges)


def _neighbours(state: SimpleGraph) -> list[set[int]]:
    n, edges = state
    adj: list[set[int]] = [set() for _ in range(n)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def _refine(n: int, adj: list[set[int]], colours: list[int]) -> list[int]:
    while True:
        sig = [(colours[v], tuple(sorted(colours[w] for w in adj[v]))) for v in range(n)]
        palette = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [palette[sig[v]] for v in range(n)]
        if new == colours:
            return new
        colours = new


def canonical_form(state: SimpleGraph) -> tuple:
    """Exact canonical certificate of a simple graph (isomorphism invariant)."""
    n, edges = state
    adj = _neighbours(state)
    best_sig = None

    def edge_sig(perm_pos: dict[int, int]) -> frozenset:
        return frozenset(
            (min(perm_pos[a], perm_pos[b]), max(perm_pos[a], perm_pos[b]))
            for a, b in edges
        )

    def search(colours: list[int], placed: dict[int, int]):
        nonlocal best_sig
        if len(placed) == n:
            sig = tuple(sorted(edge_sig(placed)))
            if best_sig is None or sig < best_sig:
                best_sig = sig
            return
        # pick the smallest non-singleton colour class among unplaced vertices
        unplaced = [v for v in range(n) if v not in placed]
        target_colour = min(colours[v] for v in unplaced)
        candidates = [v for v in unplaced if colours[v] == target_colour]
        nxt = len(placed)
        for v in candidates:
            forked = list(colours)
            forked[v] = -nxt - 1  # individualize
            refined = _refine(n, adj, forked)
            placed[v] = nxt
            search(refined, placed)
            del placed[v]

    search(_refine(n, adj, [0] * n), {})
    return (n, best_sig)


@lru_cache(maxsize=None)
def _target_forms() -> tuple[tuple, tuple]:
    k5 = (5, frozenset((i, j) for i in range(5) for j in range(i + 1, 5)))
    k33 = (6, frozenset((i, j) for i in range(3) for j in range(3, 6)))
    return canonical_form(k5), canonical_form(k33)


def _delete_edge(state: SimpleGraph, e: tuple[int, int]) -> SimpleGraph:
    n, edges = state
    return _drop_isolated((n, edges - {e}))


def _contract_edge(state: SimpleGraph, e: tuple[int, int]) -> SimpleGraph:
    n, edges = state
    a, b = e  # merge b into a
    out = set()
    for u, v in edges:
        if (u, v) == e:
            continue
        u = a if u == b else u
        v = a if v == b else v
        if u != v:
            out.add((min(u, v), max(u, v)))
    return _drop_isolated(_compact((n, frozenset(out)), drop=b))


def _compact(state: SimpleGraph, drop: int) -> SimpleGraph:
    n, edges = state
    remap = {v: (v if v < drop else v - 1) for v in range(n) if v != drop}
    out = frozenset((min(remap[u], remap[v]), max(remap[u], remap[v])) for u, v in edges)
    return n - 1, out

def _drop_isolated(state: SimpleGraph) -> SimpleGraph:
    n, edges = state
    used = {v for e in edges for v in e}
    keep = sorted(used)
    remap = {v: i for i, v in enumerate(keep)}
    out = frozenset((min(remap[u], remap[v]), max(remap[u], remap[v])) for u, v in edges)
    return len(keep), out


def has_forbidden_minor(graph: Graph, max_vertices: int = 12) -> bool:
    """True iff the graph has a K5 or K33 minor (Kuratowski/Wagner).

    Exhaustive deletion/contraction search; refuses graphs above
    ``max_vertices`` since the state space grows quickly."""
    if len(graph.vertices) > max_vertices:
        raise ValueError(
            f"minor search limited to {max_vertices} vertices, got {len(graph.vertices)}"
        )
    k5_form, k33_form = _target_forms()
    start = _to_simple(graph)
    seen = set()
    queue = deque([start])
    while queue:
        state = queue.popleft()
        n, edges = state
        if n < 5 or len(edges) < 9:
            continue
        form = canonical_form(state)
        if form in seen:
            continue
        seen.add(form)
        if form == k33_form or form == k5_form:
            return True
        for e in sorted(edges):
            queue.append(_delete_edge(state, e))
            queue.append(_contract_edge(state, e))
    return False
