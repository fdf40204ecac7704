"""Triangle-free-path reachability.

A triangle-free path is a path (distinct vertices, consecutive ordered
pairs present) in which no two vertices at distance two along the path are
adjacent in the skeleton.  Reachability between ordered edges, and from an
ordered edge to a vertex, is the long-range information the boundary
machinery carries around.

For chain graphs with chordal undirected components the closure computation
(:func:`tfp_table`) is exact; the per-query oracle (:func:`tfp_exists`)
works on arbitrary graphs and is what the tables are validated against.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import GraphInputError, PreconditionError
from .graph import Edge, Label, Pdag


@dataclass(frozen=True)
class TfpTable:
    """Sparse 0/1 relations over ordered edges and vertices.

    Membership of ``(e, f)`` in ``p1`` means a triangle-free path runs from
    ``e`` to ``f``; membership of ``(e, w)`` in ``p2`` means one runs from
    ``e`` to the vertex ``w``.  Degenerate queries (``e == f`` or ``w`` the
    head of ``e``) are excluded by construction.
    """

    p1: frozenset[tuple[Edge, Edge]]
    p2: frozenset[tuple[Edge, Label]]

    def __post_init__(self):
        for e, f in self.p1:
            if e == f:
                raise GraphInputError(f"p1 entry with identical edges {e!r}")
        for e, w in self.p2:
            if e[1] == w:
                raise GraphInputError(f"p2 entry {e!r} -> {w!r} targets the edge head")

    def restrict(self, edges, vertices) -> "TfpTable":
        """Drop entries whose edges or target vertex fall outside the sets."""
        edges = set(edges)
        vertices = set(vertices)
        return TfpTable(
            p1=frozenset((e, f) for e, f in self.p1 if e in edges and f in edges),
            p2=frozenset((e, w) for e, w in self.p2 if e in edges and w in vertices),
        )


EMPTY_TABLE = TfpTable(frozenset(), frozenset())


def _ordered_edge_list(P: Pdag) -> list[Edge]:
    return list(P.ordered_edges())


def _seed_matrices(P: Pdag):
    """Length-three path seeds: (u, v, w) with u, w non-adjacent."""
    edges = _ordered_edge_list(P)
    eidx = {e: i for i, e in enumerate(edges)}
    m = len(edges)
    n = P.n
    p1 = np.zeros((m, m), dtype=bool)
    p2 = np.zeros((m, n), dtype=bool)
    adj = P.adjacency
    sk = adj | adj.T
    for i, (u, v) in enumerate(edges):
        iu, iv = P._index[u], P._index[v]
        for iw in np.nonzero(adj[iv])[0].tolist():
            if iw == iu or sk[iu, iw]:
                continue
            w = P.vertices[iw]
            p1[i, eidx[(v, w)]] = True
            p2[i, iw] = True
    return edges, eidx, p1, p2


def _close_p1(p1: np.ndarray) -> np.ndarray:
    """Transitive closure, diagonal kept clear."""
    if p1.size == 0:
        return p1
    cur = p1.astype(np.uint8)
    while True:
        nxt = cur | ((cur @ cur) > 0)
        if np.array_equal(nxt, cur):
            break
        cur = nxt
    out = cur.astype(bool)
    np.fill_diagonal(out, False)
    return out


def _close_p2(p1_closed: np.ndarray, p2: np.ndarray, edges, vindex) -> np.ndarray:
    """One composition step suffices once p1 is transitively closed."""
    if p2.size == 0:
        return p2
    out = p2 | ((p1_closed.astype(np.uint8) @ p2.astype(np.uint8)) > 0)
    for i, (_, v) in enumerate(edges):
        out[i, vindex[v]] = False
    return out


def _matrices_to_table(P: Pdag, edges, p1: np.ndarray, p2: np.ndarray) -> TfpTable:
    labels = P.vertices
    pairs = frozenset(
        (edges[i], edges[j]) for i, j in zip(*np.nonzero(p1))
    )
    hits = frozenset(
        (edges[i], labels[j]) for i, j in zip(*np.nonzero(p2))
    )
    return TfpTable(p1=pairs, p2=hits)


@lru_cache(maxsize=4096)
def _in_closure_class(P: Pdag) -> bool:
    from .mecrules import is_chain_graph

    if not is_chain_graph(P):
        return False
    return all(
        len(c) <= 2 or P.induced_subgraph(c).skeleton().is_chordal()
        for c in P.undirected_components()
    )


def tfp_table(P: Pdag) -> TfpTable:
    """All triangle-free-path reachability facts of ``P``.

    Seeds every length-three triangle-free triple, then closes the two
    relations transitively.  Requires the closure to be exact: ``P`` must be
    a chain graph whose undirected components are chordal.
    """
    if not _in_closure_class(P):
        raise PreconditionError(
            "reachability closure requires a chain graph with chordal "
            "undirected components"
        )
    edges, _, p1, p2 = _seed_matrices(P)
    p1c = _close_p1(p1)
    vindex = P._index
    p2c = _close_p2(p1c, p2, edges, vindex)
    return _matrices_to_table(P, edges, p1c, p2c)


def tfp_exists(P: Pdag, from_edge: Edge, to) -> bool:
    """Per-query oracle: does a triangle-free path run from ``from_edge`` to
    ``to`` (an ordered edge, or a vertex)?

    Degenerate hits count: an edge reaches itself and its own head vertex
    via the two-vertex path.  On chain graphs with chordal components the
    query runs as a reachability search over (previous, current) states; on
    anything else it falls back to exhaustive simple-path search.
    """
    u, v = from_edge
    if not P.has_ordered_edge(u, v):
        raise GraphInputError(f"({u!r}, {v!r}) is not in the ordered-edge view")
    to_edge: Edge | None = None
    to_vertex: Label | None = None
    if isinstance(to, tuple):
        x, y = to
        if not P.has_ordered_edge(x, y):
            raise GraphInputError(f"({x!r}, {y!r}) is not in the ordered-edge view")
        to_edge = (x, y)
    else:
        if not P.has_vertex(to):
            raise GraphInputError(f"unknown vertex {to!r}")
        to_vertex = to
    if to_edge == from_edge or (to_vertex is not None and to_vertex == v):
        return True
    if _in_closure_class(P):
        return _state_search(P, from_edge, to_edge, to_vertex)
    return _simple_path_search(P, from_edge, to_edge, to_vertex)


def _state_search(P: Pdag, from_edge, to_edge, to_vertex) -> bool:
    adj = P.adjacency
    sk = adj | adj.T
    idx = P._index
    labels = P.vertices
    start = (idx[from_edge[0]], idx[from_edge[1]])
    goal = (idx[to_edge[0]], idx[to_edge[1]]) if to_edge else None
    goal_v = idx[to_vertex] if to_vertex is not None else None
    seen = {start}
    stack = [start]
    while stack:
        a, b = stack.pop()
        for c in np.nonzero(adj[b])[0].tolist():
            if c == a or sk[a, c]:
                continue
            state = (b, c)
            if state in seen:
                continue
            if goal is not None and state == goal:
                return True
            if goal_v is not None and c == goal_v:
                return True
            seen.add(state)
            stack.append(state)
    return False


def _simple_path_search(P: Pdag, from_edge, to_edge, to_vertex) -> bool:
    adj = P.adjacency
    sk = adj | adj.T
    idx = P._index
    start = [idx[from_edge[0]], idx[from_edge[1]]]
    goal = (idx[to_edge[0]], idx[to_edge[1]]) if to_edge else None
    goal_v = idx[to_vertex] if to_vertex is not None else None

    path = list(start)
    used = set(path)

    def extend() -> bool:
        a, b = path[-2], path[-1]
        for c in np.nonzero(adj[b])[0].tolist():
            if c in used or sk[a, c]:
                continue
            if goal is not None and (b, c) == goal:
                return True
            if goal_v is not None and c == goal_v:
                return True
            path.append(c)
            used.add(c)
            if extend():
                return True
            used.remove(c)
            path.pop()
        return False

    return extend()


def is_canonical_source(P: Pdag, s: Label) -> bool:
    """No directed edge of ``P`` reaches ``s`` by a triangle-free path.

    An edge directed straight into ``s`` disqualifies it via the degenerate
    two-vertex path.
    """
    if not P.has_vertex(s):
        raise GraphInputError(f"unknown vertex {s!r}")
    for u, v in P.directed_edges():
        if v == s:
            return False
        if tfp_exists(P, (u, v), s):
            return False
    return True
