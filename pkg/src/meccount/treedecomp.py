"""Tree decompositions by elimination heuristics, validation, and cutting.

The counting recursion only needs a valid decomposition; its answer does
not depend on the width, only its runtime does.  Bags are kept under their
original integer indices when subtrees are cut out, so child orderings stay
stable across the recursion.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import GraphInputError, InternalInvariantError, PreconditionError
from .graph import Pdag, UndirectedGraph, label_key

log = logging.getLogger(__name__)

HEURISTICS = ("min_fill", "min_degree")


@dataclass(frozen=True, eq=False)
class TreeDecomposition:
    bags: dict[int, frozenset]
    tree_edges: frozenset[tuple[int, int]]
    root: int

    def __post_init__(self):
        if self.root not in self.bags:
            raise GraphInputError(f"root {self.root} is not a bag index")
        for i, j in self.tree_edges:
            if i not in self.bags or j not in self.bags:
                raise GraphInputError(f"tree edge ({i}, {j}) references a missing bag")

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.bags))

    def vertices(self) -> frozenset:
        out: set = set()
        for b in self.bags.values():
            out |= b
        return frozenset(out)

    def tree_neighbors(self, i: int) -> tuple[int, ...]:
        out = []
        for a, b in self.tree_edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return tuple(sorted(out))

    def children(self, i: int) -> tuple[int, ...]:
        """Tree neighbors away from the root, in increasing index order."""
        parent = self._parents().get(i)
        return tuple(j for j in self.tree_neighbors(i) if j != parent)

    def _parents(self) -> dict[int, int | None]:
        parents: dict[int, int | None] = {self.root: None}
        stack = [self.root]
        while stack:
            i = stack.pop()
            for j in self.tree_neighbors(i):
                if j not in parents:
                    parents[j] = i
                    stack.append(j)
        return parents


def tree_decomposition(
    U: Pdag, heuristic: str = "min_fill"
) -> TreeDecomposition:
    """Heuristic decomposition from an elimination ordering.

    ``min_fill`` picks the vertex whose elimination adds the fewest edges;
    ``min_degree`` picks the smallest current neighborhood.  Ties break on
    the label.  Bags contained in a tree-neighbor bag are contracted away.
    No width guarantee.
    """
    if heuristic not in HEURISTICS:
        raise GraphInputError(f"unknown heuristic {heuristic!r}; expected {HEURISTICS}")
    if not U.is_fully_undirected():
        raise GraphInputError("tree decomposition expects an undirected graph")
    if not U.is_connected():
        raise GraphInputError("tree decomposition expects a connected graph")
    if U.n == 0:
        return TreeDecomposition(bags={0: frozenset()}, tree_edges=frozenset(), root=0)

    adj: dict = {v: set(U.neighbors(v)) for v in U.vertices}

    def fill_count(v) -> int:
        nbrs = list(adj[v])
        cnt = 0
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                if nbrs[j] not in adj[nbrs[i]]:
                    cnt += 1
        return cnt

    elim_pos: dict = {}
    raw_bags: list[frozenset] = []
    elim_vertex: list = []
    k = 0
    while adj:
        if heuristic == "min_fill":
            v = min(adj, key=lambda x: (fill_count(x), label_key(x)))
        else:
            v = min(adj, key=lambda x: (len(adj[x]), label_key(x)))
        nbrs = adj[v]
        raw_bags.append(frozenset({v} | nbrs))
        elim_vertex.append(v)
        elim_pos[v] = k
        k += 1
        for a in nbrs:
            for b in nbrs:
                if a != b:
                    adj[a].add(b)
        for a in nbrs:
            adj[a].discard(v)
        del adj[v]

    edges: set[tuple[int, int]] = set()
    for i, bag in enumerate(raw_bags):
        rest = bag - {elim_vertex[i]}
        if not rest:
            # last elimination in this component; attach to any later bag
            # already holding the vertex, or to the previous bag
            if i + 1 < len(raw_bags):
                edges.add((i, i + 1))
            continue
        parent_vertex = min(rest, key=lambda x: elim_pos[x])
        j = elim_pos[parent_vertex]
        edges.add((min(i, j), max(i, j)))

    bags = {i: b for i, b in enumerate(raw_bags)}
    bags, edges = _contract_redundant(bags, edges)
    remap = {old: new for new, old in enumerate(sorted(bags))}
    bags = {remap[i]: b for i, b in bags.items()}
    edges = {(min(remap[a], remap[b]), max(remap[a], remap[b])) for a, b in edges}
    td = TreeDecomposition(bags=bags, tree_edges=frozenset(edges), root=0)
    if not validate_td(U.skeleton() if not isinstance(U, UndirectedGraph) else U, td):
        raise InternalInvariantError("constructed decomposition failed validation")
    return td


def _contract_redundant(bags: dict[int, frozenset], edges: set[tuple[int, int]]):
    """Merge every bag contained in a tree-neighbor into that neighbor."""
    changed = True
    while changed:
        changed = False
        for a, b in sorted(edges):
            small, big = None, None
            if bags[a] <= bags[b]:
                small, big = a, b
            elif bags[b] <= bags[a]:
                small, big = b, a
            if small is None:
                continue
            edges.discard((min(small, big), max(small, big)))
            for x, y in list(edges):
                if x == small or y == small:
                    other = y if x == small else x
                    edges.discard((x, y))
                    if other != big:
                        edges.add((min(other, big), max(other, big)))
            del bags[small]
            changed = True
            break
    return bags, edges


def validate_td(U: Pdag, td: TreeDecomposition) -> bool:
    """Check the decomposition laws plus the separator property of every
    tree edge.  Returns False (with a debug log of the reason) on failure."""
    idxs = list(td.bags)
    if len(td.tree_edges) != max(0, len(idxs) - 1):
        log.debug("bag tree has wrong edge count")
        return False
    # connectivity of the bag tree
    if idxs:
        seen = {idxs[0]}
        stack = [idxs[0]]
        while stack:
            i = stack.pop()
            for j in td.tree_neighbors(i):
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        if len(seen) != len(idxs):
            log.debug("bag tree is disconnected")
            return False
    covered = td.vertices()
    if covered != U.vertex_set:
        log.debug("vertex coverage fails: %r", U.vertex_set ^ covered)
        return False
    for u, v in U.skeleton_edges():
        if not any(u in b and v in b for b in td.bags.values()):
            log.debug("edge (%r, %r) not inside any bag", u, v)
            return False
    for v in U.vertices:
        holding = [i for i in idxs if v in td.bags[i]]
        # the bags holding v must induce a connected subtree
        seen = {holding[0]}
        stack = [holding[0]]
        while stack:
            i = stack.pop()
            for j in td.tree_neighbors(i):
                if j in holding and j not in seen:
                    seen.add(j)
                    stack.append(j)
        if len(seen) != len(holding):
            log.debug("bags holding %r are disconnected in the tree", v)
            return False
    for a, b in td.tree_edges:
        side_a = _component_indices(td, a, drop_edge=(a, b))
        inter = td.bags[a] & td.bags[b]
        va = set().union(*(td.bags[i] for i in side_a)) - inter
        vb = set().union(*(td.bags[i] for i in set(idxs) - side_a)) - inter
        for u, v in U.skeleton_edges():
            if (u in va and v in vb) or (u in vb and v in va):
                log.debug("bag intersection of (%d, %d) fails to separate", a, b)
                return False
    return True


def _component_indices(td: TreeDecomposition, start: int, drop_edge) -> set[int]:
    x, y = drop_edge
    dropped = {(min(x, y), max(x, y))}
    seen = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for j in td.tree_neighbors(i):
            if (min(i, j), max(i, j)) in dropped or j in seen:
                continue
            seen.add(j)
            stack.append(j)
    return seen


def cut_last_child(
    td: TreeDecomposition, r1: int
) -> tuple[TreeDecomposition, TreeDecomposition, int]:
    """Remove the tree edge to the root's last child.

    Returns the two induced decompositions, rooted at ``r1`` and at the cut
    child ``r2``.  "Last" follows increasing bag index, which fixes the
    recursion order deterministically.
    """
    if r1 != td.root:
        raise PreconditionError(f"{r1} is not the root of this decomposition")
    kids = td.children(r1)
    if not kids:
        raise PreconditionError("root has no child to cut")
    r2 = kids[-1]
    side1 = _component_indices(td, r1, drop_edge=(r1, r2))
    side2 = set(td.bags) - side1
    td1 = TreeDecomposition(
        bags={i: td.bags[i] for i in sorted(side1)},
        tree_edges=frozenset(
            e for e in td.tree_edges if e[0] in side1 and e[1] in side1
        ),
        root=r1,
    )
    td2 = TreeDecomposition(
        bags={i: td.bags[i] for i in sorted(side2)},
        tree_edges=frozenset(
            e for e in td.tree_edges if e[0] in side2 and e[1] in side2
        ),
        root=r2,
    )
    return td1, td2, r2
