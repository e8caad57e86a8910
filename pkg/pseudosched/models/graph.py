from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from pseudosched.errors import GraphError


@dataclass(frozen=True)
class Graph:
    """
    Simple undirected graph over dense vertex IDs 0..n-1.

    The adjacency of every vertex is stored as a sorted tuple, so iterating
    over neighbors always visits them in ascending ID order. Instances are
    immutable; build them with `Graph.from_edges`.
    """

    n: int
    adjacency: Tuple[Tuple[int, ...], ...]
    _neighbor_sets: Tuple[FrozenSet[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"vertex count must be nonnegative, got {self.n}")
        if len(self.adjacency) != self.n:
            raise GraphError(f"adjacency has {len(self.adjacency)} rows for n={self.n}")
        neighbor_sets = tuple(frozenset(row) for row in self.adjacency)
        for v, row in enumerate(self.adjacency):
            if len(neighbor_sets[v]) != len(row):
                raise GraphError(f"duplicate edge at vertex {v}")
            for u in row:
                if u == v:
                    raise GraphError(f"self-loop at vertex {v}")
                if not 0 <= u < self.n:
                    raise GraphError(f"neighbor {u} of vertex {v} out of range")
                if v not in neighbor_sets[u]:
                    raise GraphError(f"asymmetric adjacency: {v}->{u} without {u}->{v}")
        object.__setattr__(self, '_neighbor_sets', neighbor_sets)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> 'Graph':
        rows: List[set] = [set() for _ in range(n)]
        for raw in edges:
            u, v = (int(x) for x in raw)
            if u == v:
                raise GraphError(f"self-loop on vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge [{u}, {v}] out of range for n={n}")
            if v in rows[u]:
                raise GraphError(f"duplicate edge [{min(u, v)}, {max(u, v)}]")
            rows[u].add(v)
            rows[v].add(u)
        return cls(n=n, adjacency=tuple(tuple(sorted(row)) for row in rows))

    # Basic queries

    @property
    def vertices(self) -> range:
        return range(self.n)

    def check_vertex(self, v: int) -> int:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self.n:
            raise GraphError(f"invalid vertex {v!r} for n={self.n}")
        return int(v)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def closed_neighborhood(self, v: int) -> Tuple[int, ...]:
        return tuple(sorted(self.adjacency[v] + (v,)))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._neighbor_sets[u]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def max_degree(self) -> int:
        return max((len(row) for row in self.adjacency), default=0)

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    @property
    def edge_count(self) -> int:
        return sum(len(row) for row in self.adjacency) // 2

    # Connectivity

    def to_csr(self) -> csr_matrix:
        rows = [u for u in range(self.n) for _ in self.adjacency[u]]
        cols = [v for u in range(self.n) for v in self.adjacency[u]]
        data = np.ones(len(rows), dtype=np.int8)
        return csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        count, _ = connected_components(self.to_csr(), directed=False)
        return count == 1

    def require_connected(self) -> 'Graph':
        if self.n == 0:
            raise GraphError("graph has no vertices")
        if not self.is_connected():
            raise GraphError("graph is disconnected")
        return self

    def distances_from(self, source: int) -> Dict[int, int]:
        """Plain breadth-first distances, independent of any tree builder."""
        dist = {source: 0}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for u in self.adjacency[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        return dist

    def to_dict(self) -> dict:
        return {
            'n': self.n,
            'edges': [[u, v] for u, v in self.edges()],
        }
