from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from pseudosched.errors import GraphError
from pseudosched.models.graph import Graph


@dataclass(frozen=True)
class RootedTree:
    """
    Spanning tree of a Graph, rooted at `root`.

    parent[root] == root; level[v] is the tree distance from v to the root.
    Construct through `RootedTree.from_parents`, which validates the parent
    array against the companion graph.
    """

    root: int
    parent: Tuple[int, ...]
    level: Tuple[int, ...]
    children: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rows = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if v != self.root:
                rows[p].append(v)
        object.__setattr__(self, 'children', tuple(tuple(sorted(r)) for r in rows))

    @classmethod
    def from_parents(cls, g: Graph, root: int, parents: Sequence[int]) -> 'RootedTree':
        n = g.n
        if len(parents) != n:
            raise GraphError(f"tree_parent has {len(parents)} entries for n={n}")
        root = g.check_vertex(root)
        parents = tuple(int(p) for p in parents)
        if parents[root] != root:
            raise GraphError(f"root {root} must be its own parent")
        for v, p in enumerate(parents):
            if v == root:
                continue
            if not 0 <= p < n:
                raise GraphError(f"parent {p} of vertex {v} out of range")
            if p == v:
                raise GraphError(f"vertex {v} is its own parent but is not the root")
            if not g.has_edge(v, p):
                raise GraphError(f"tree edge [{v}, {p}] is not an edge of the graph")

        levels: Dict[int, int] = {root: 0}
        for start in range(n):
            path = []
            on_path = set()
            v = start
            while v not in levels:
                if v in on_path:
                    raise GraphError(f"tree_parent contains a cycle through vertex {v}")
                on_path.add(v)
                path.append(v)
                v = parents[v]
            base = levels[v]
            for offset, u in enumerate(reversed(path), start=1):
                levels[u] = base + offset
        return cls(root=root, parent=parents, level=tuple(levels[v] for v in range(n)))

    @property
    def n(self) -> int:
        return len(self.parent)

    @property
    def height(self) -> int:
        return max(self.level, default=0)

    def is_tree_edge(self, u: int, v: int) -> bool:
        return (u != v) and (
            (self.parent[u] == v and u != self.root) or (self.parent[v] == u and v != self.root)
        )

    def tree_edges(self):
        return sorted((min(v, p), max(v, p)) for v, p in enumerate(self.parent) if v != self.root)

    def degree(self, v: int) -> int:
        return len(self.children[v]) + (0 if v == self.root else 1)

    @property
    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.n)), default=0)

    def to_dict(self) -> dict:
        return {'root': self.root, 'tree_parent': list(self.parent)}


@dataclass(frozen=True)
class KinshipView:
    """Per-vertex kin lists derived from a graph and one of its rooted spanning trees."""

    tree: RootedTree
    children: Tuple[Tuple[int, ...], ...]
    stepparents: Tuple[Tuple[int, ...], ...]
    stepchildren: Tuple[Tuple[int, ...], ...]

    def parent(self, v: int) -> int:
        return self.tree.parent[v]

    def level(self, v: int) -> int:
        return self.tree.level[v]

    def relation(self, v: int, u: int) -> Optional[str]:
        """How u is related to v: 'parent', 'child', 'stepparent', 'stepchild' or None."""
        if u == v:
            return None
        if v != self.tree.root and self.tree.parent[v] == u:
            return 'parent'
        if u != self.tree.root and self.tree.parent[u] == v:
            return 'child'
        if u in self.stepparents[v]:
            return 'stepparent'
        if u in self.stepchildren[v]:
            return 'stepchild'
        return None


def _check_spans(g: Graph, t: RootedTree):
    if t.n != g.n:
        raise GraphError(f"tree covers {t.n} vertices, graph has {g.n}")
    for v, p in enumerate(t.parent):
        if v != t.root and not g.has_edge(v, p):
            raise GraphError(f"tree edge [{v}, {p}] is not an edge of the graph")


def kinship(g: Graph, t: RootedTree) -> KinshipView:
    _check_spans(g, t)
    stepparents = [[] for _ in range(g.n)]
    stepchildren = [[] for _ in range(g.n)]
    for u, v in g.edges():
        if t.is_tree_edge(u, v):
            continue
        if t.level[u] == t.level[v] - 1:
            stepparents[v].append(u)
            stepchildren[u].append(v)
        elif t.level[v] == t.level[u] - 1:
            stepparents[u].append(v)
            stepchildren[v].append(u)
    return KinshipView(
        tree=t,
        children=t.children,
        stepparents=tuple(tuple(sorted(r)) for r in stepparents),
        stepchildren=tuple(tuple(sorted(r)) for r in stepchildren),
    )


def build_bfs_tree(g: Graph, r: int) -> RootedTree:
    """Shortest-path tree; each vertex is adopted by its lowest-ID discoverer."""
    r = g.check_vertex(r)
    g.require_connected()
    parent = {r: r}
    queue = deque([r])
    while queue:
        v = queue.popleft()
        for u in g.neighbors(v):
            if u not in parent:
                parent[u] = v
                queue.append(u)
    return RootedTree.from_parents(g, r, [parent[v] for v in range(g.n)])


def build_dfs_tree(g: Graph, r: int) -> RootedTree:
    r = g.check_vertex(r)
    g.require_connected()
    parent = {r: r}
    stack = [(r, iter(g.neighbors(r)))]
    while stack:
        v, pending = stack[-1]
        for u in pending:
            if u not in parent:
                parent[u] = v
                stack.append((u, iter(g.neighbors(u))))
                break
        else:
            stack.pop()
    return RootedTree.from_parents(g, r, [parent[v] for v in range(g.n)])


def random_spanning_tree(g: Graph, r: int, seed: int) -> RootedTree:
    """Grow a tree from r by attaching a uniformly chosen frontier edge at each step."""
    r = g.check_vertex(r)
    g.require_connected()
    rng = np.random.default_rng(seed)
    parent = {r: r}
    frontier = [(r, u) for u in g.neighbors(r)]
    while frontier:
        v, u = frontier.pop(int(rng.integers(len(frontier))))
        if u in parent:
            continue
        parent[u] = v
        frontier.extend((u, x) for x in g.neighbors(u) if x not in parent)
    return RootedTree.from_parents(g, r, [parent[v] for v in range(g.n)])


def min_valid_d(g: Graph, t: RootedTree) -> int:
    _check_spans(g, t)
    spread = max((abs(t.level[u] - t.level[v]) for u, v in g.edges()), default=0)
    return min(spread + 2, t.height + 1)
