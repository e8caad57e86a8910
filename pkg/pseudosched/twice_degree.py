"""Centralized scheduler: builds a BFS tree from the root and colors it on the way, 1-based."""
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from pseudosched.models.coloring import Coloring
from pseudosched.models.graph import Graph
from pseudosched.models.tree import RootedTree
from pseudosched.schedule import is_T_pseudo_schedule

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ForbiddenStep:
    vertex: int
    level: int
    forbidden: Tuple[int, ...]
    color: int

    def to_dict(self) -> dict:
        return {'vertex': self.vertex, 'level': self.level, 'K': list(self.forbidden), 'color': self.color}


@dataclass(frozen=True)
class TwiceDegreeResult:
    tree: RootedTree
    coloring: Coloring
    forbidden_trace: Optional[Tuple[ForbiddenStep, ...]] = None


def _smallest_positive_missing(used) -> int:
    k = 1
    while k in used:
        k += 1
    return k


def twice_degree(g: Graph, r: int, trace: bool = False) -> TwiceDegreeResult:
    r = g.check_vertex(r)
    g.require_connected()

    parent: Dict[int, int] = {r: r}
    level: Dict[int, int] = {r: 0}
    color: Dict[int, int] = {}
    steps: List[ForbiddenStep] = []

    queue = deque([r])
    while queue:
        v = queue.popleft()
        for x in g.neighbors(v):
            if x not in parent:
                parent[x] = v
                level[x] = level[v] + 1
                queue.append(x)

        p = parent[v]
        forbidden = {color[u] for u in g.closed_neighborhood(p) if u in color}
        for x in g.neighbors(v):
            tree_edge = parent[x] == v or parent[v] == x
            if not tree_edge and parent[x] in color:
                forbidden.add(color[parent[x]])
        k = _smallest_positive_missing(forbidden)
        color[v] = k
        if trace:
            steps.append(ForbiddenStep(vertex=v, level=level[v], forbidden=tuple(sorted(forbidden)), color=k))

    tree = RootedTree.from_parents(g, r, [parent[v] for v in g.vertices])
    coloring = Coloring.from_list(color[v] for v in g.vertices)
    logger.info(f"twice-degree: n={g.n} root={r} max color={coloring.max_color} bound={2 * g.max_degree}")
    return TwiceDegreeResult(tree=tree, coloring=coloring, forbidden_trace=tuple(steps) if trace else None)


def verify_twice_degree_bound(g: Graph, result: TwiceDegreeResult) -> bool:
    bound = max(2 * g.max_degree, 1)
    within = result.coloring.max_color <= bound
    if not within:
        logger.warning(f"twice-degree used color {result.coloring.max_color} above bound {bound}")
    return within and is_T_pseudo_schedule(g, result.tree, result.coloring)
