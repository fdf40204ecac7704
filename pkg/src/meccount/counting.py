"""Counting classes over a skeleton: leaf enumeration plus the separator
recursion over a tree decomposition.

The state passed up the recursion is a sparse table mapping boundary
shadows to the number of classes of the current subgraph realizing each
shadow; absent keys mean zero.  Leaves are handled by direct enumeration;
internal nodes cut off the root's last child subtree, count both sides, and
combine them over every boundary partial MEC accepted by the extension
test.  Only shadows with nonzero counts are iterated, which is equivalent
to sweeping the whole shadow space because zero-count factors contribute
nothing to any product.
"""

from __future__ import annotations

import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Iterator

import numpy as np

from .errors import GraphInputError, PreconditionError
from .extension import (
    DecompositionContext,
    _boundary_closure,
    _combine,
    _ShadowProfile,
    _struct_ok_profiled,
    _sub_pdag_from_signature,
    boundary_signature,
    protected_edges,
)
from .graph import Pdag, UndirectedGraph
from .mecrules import DEFAULT_ORIENTATION_CAP, brute_count_mecs, enumerate_mecs, v_structures
from .shadow import DEFAULT_MARK_ENUM_CAP, Shadow, enumerate_partial_mecs, project_shadow
from .tfp import _matrices_to_table, tfp_table
from .treedecomp import TreeDecomposition, cut_last_child, tree_decomposition, validate_td

AUTO_BRUTE_EDGE_THRESHOLD = 10


class ShadowTable:
    """Sparse map from boundary shadows to positive class counts.

    ``domain`` is the boundary graph all keys must live on; a shadow that
    never got an entry counts zero.
    """

    def __init__(self, domain: Pdag):
        self.domain = domain
        self._entries: dict[Shadow, int] = {}

    def add(self, s: Shadow, k: int) -> None:
        if k < 0:
            raise ValueError("counts are nonnegative")
        if k == 0:
            return
        dom = self.domain.adjacency
        sk = s.o.adjacency | s.o.adjacency.T
        if s.o.vertices != self.domain.vertices or not np.array_equal(sk, dom | dom.T):
            raise GraphInputError("shadow lives on a different boundary graph")
        self._entries[s] = self._entries.get(s, 0) + k

    def count(self, s: Shadow) -> int:
        return self._entries.get(s, 0)

    def items(self):
        return self._entries.items()

    def total(self) -> int:
        return sum(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[Shadow]:
        return iter(self._entries)


def brute_force_count(
    G: Pdag, *, max_edges: int = DEFAULT_ORIENTATION_CAP
) -> ShadowTable:
    """Leaf table: one entry per class of ``G``, keyed by its full-graph
    shadow (the class graph with its own path table), each counting one."""
    F = ShadowTable(domain=G.skeleton())
    for M in enumerate_mecs(G, max_edges=max_edges):
        F.add(Shadow._trusted(M, tfp_table(M)), 1)
    return F


def count_rec(
    G: UndirectedGraph,
    td: TreeDecomposition,
    r1: int,
    *,
    orientation_cap: int = DEFAULT_ORIENTATION_CAP,
    mark_cap: int = DEFAULT_MARK_ENUM_CAP,
    executor: ThreadPoolExecutor | None = None,
) -> ShadowTable:
    """Class counts of ``G`` grouped by shadow on ``G[R1 ∪ N(R1)]``."""
    if r1 != td.root:
        raise PreconditionError(f"{r1} is not the root of the decomposition")
    if not validate_td(G, td):
        raise PreconditionError("decomposition is not valid for this graph")
    return _count_rec(G, td, r1, orientation_cap, mark_cap, executor)


def _count_rec(G, td, r1, orientation_cap, mark_cap, executor) -> ShadowTable:
    if len(td.bags) == 1:
        return brute_force_count(G, max_edges=orientation_cap)
    td1, td2, r2 = cut_last_child(td, r1)
    V1 = td1.vertices()
    V2 = td2.vertices()
    G1 = G.induced_subgraph(V1)
    G2 = G.induced_subgraph(V2)
    if executor is not None:
        fut = executor.submit(_count_rec, G2, td2, r2, orientation_cap, mark_cap, None)
        F1 = _count_rec(G1, td1, r1, orientation_cap, mark_cap, None)
        F2 = fut.result()
    else:
        F1 = _count_rec(G1, td1, r1, orientation_cap, mark_cap, None)
        F2 = _count_rec(G2, td2, r2, orientation_cap, mark_cap, None)
    ctx = DecompositionContext(h=G, h1=V1, h2=V2, s1=td.bags[r1], s2=td.bags[r2])
    return _combine_tables(G, ctx, td.bags[r1], F1, F2, mark_cap)


def _combine_tables(G, ctx, bag1, F1: ShadowTable, F2: ShadowTable, mark_cap) -> ShadowTable:
    x_prime = frozenset(G.closed_neighborhood(bag1))
    F = ShadowTable(domain=G.induced_subgraph(x_prime))
    sh1s = list(F1.items())
    sh2s = list(F2.items())
    if not sh1s or not sh2s:
        return F
    profiles1 = [_ShadowProfile(sh) for sh, _ in sh1s]
    profiles2 = [_ShadowProfile(sh) for sh, _ in sh2s]
    memo1: dict = {}
    memo2: dict = {}

    def _side_ok(memo, sig, profiles):
        ok = memo.get(sig)
        if ok is None:
            sub = _sub_pdag_from_signature(ctx, sig)
            sub_vs = v_structures(sub)
            ok = [_struct_ok_profiled(sub, sub_vs, sig[2], p) for p in profiles]
            memo[sig] = ok
        return ok

    for O in enumerate_partial_mecs(ctx.a_graph, max_edges=mark_cap):
        prot = protected_edges(O)
        sig1 = boundary_signature(ctx, O, prot, 1)
        ok1 = _side_ok(memo1, sig1, profiles1)
        if not any(ok1):
            continue
        sig2 = boundary_signature(ctx, O, prot, 2)
        ok2 = _side_ok(memo2, sig2, profiles2)
        if not any(ok2):
            continue
        base = _boundary_closure(O)
        for (sh1, c1), good1 in zip(sh1s, ok1):
            if not good1:
                continue
            for (sh2, c2), good2 in zip(sh2s, ok2):
                if not good2:
                    continue
                p1, p2 = _combine(base, O, sh1, sh2)
                if bool((p1 & p1.T).any()):
                    continue
                table = _matrices_to_table(O, base.edges, p1, p2)
                glued = Shadow._trusted(O, table)
                F.add(project_shadow(glued, x_prime), c1 * c2)
    return F


def count_mecs(
    G: Pdag,
    method: str = "auto",
    *,
    heuristic: str = "min_fill",
    threads: int = 1,
    orientation_cap: int = DEFAULT_ORIENTATION_CAP,
    mark_cap: int = DEFAULT_MARK_ENUM_CAP,
) -> int:
    """Number of classes whose skeleton is ``G``.

    ``brute`` enumerates orientations; ``fpt`` runs the decomposition
    recursion; ``auto`` takes the brute route for small edge counts.  A
    disconnected input multiplies the per-component answers, since collider
    sets combine independently across components.  The empty graph counts
    one (the empty class).
    """
    if not G.is_fully_undirected():
        raise GraphInputError("counting expects an undirected skeleton")
    if method not in ("auto", "brute", "fpt"):
        raise GraphInputError(f"unknown method {method!r}")
    if G.n == 0:
        return 1
    comps = G.components()
    if len(comps) > 1:
        return math.prod(
            count_mecs(
                G.induced_subgraph(c),
                method,
                heuristic=heuristic,
                threads=threads,
                orientation_cap=orientation_cap,
                mark_cap=mark_cap,
            )
            for c in comps
        )
    chosen = method
    if chosen == "auto":
        chosen = "brute" if G.edge_count() <= AUTO_BRUTE_EDGE_THRESHOLD else "fpt"
    if chosen == "brute":
        return brute_count_mecs(G, max_edges=orientation_cap)
    td = tree_decomposition(G.skeleton(), heuristic)
    limit = 10 * len(td.bags) + 1000
    if sys.getrecursionlimit() < limit:
        sys.setrecursionlimit(limit)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            F = count_rec(
                G.skeleton(),
                td,
                td.root,
                orientation_cap=orientation_cap,
                mark_cap=mark_cap,
                executor=pool,
            )
    else:
        F = count_rec(
            G.skeleton(),
            td,
            td.root,
            orientation_cap=orientation_cap,
            mark_cap=mark_cap,
        )
    return F.total()
