import logging
from dataclasses import dataclass
from itertools import islice
from typing import List, Optional, Tuple

import networkx as nx

from pseudosched.models.coloring import Coloring
from pseudosched.models.graph import Graph
from pseudosched.models.tree import RootedTree, kinship

logger = logging.getLogger(__name__)

REQUEST, PUT = 'request', 'put'


@dataclass(frozen=True)
class DependencyCycle:
    vertices: Tuple[int, ...]
    type: str
    level: int

    def to_dict(self) -> dict:
        return {'vertices': list(self.vertices), 'type': self.type, 'level': self.level}


def dependency_graph(g: Graph, t: RootedTree) -> nx.DiGraph:
    """
    Arc v -> u labelled `request` when u is the parent of a stepchild of v, and
    arc z -> x labelled `put` when x is a stepchild of the parent of z.
    """
    view = kinship(g, t)
    deps = nx.DiGraph()
    deps.add_nodes_from(g.vertices)

    def add(a, b, kind):
        if deps.has_edge(a, b):
            deps[a][b]['kinds'].add(kind)
        else:
            deps.add_edge(a, b, kinds={kind})

    for v in g.vertices:
        for s in view.stepchildren[v]:
            add(v, t.parent[s], REQUEST)
    for z in g.vertices:
        if z == t.root:
            continue
        for x in view.stepchildren[t.parent[z]]:
            add(z, x, PUT)
    return deps


def _classify(deps: nx.DiGraph, cycle: List[int]) -> str:
    arcs = [deps[a][b]['kinds'] for a, b in zip(cycle, cycle[1:] + cycle[:1])]
    if all(REQUEST in kinds for kinds in arcs):
        return 'I'
    if all(PUT in kinds for kinds in arcs):
        return 'II'
    return 'mixed'


def find_dependency_cycles(
    g: Graph,
    t: RootedTree,
    max_length: Optional[int] = None,
    limit: int = 10000,
) -> List[DependencyCycle]:
    deps = dependency_graph(g, t)
    found = []
    for cycle in islice(nx.simple_cycles(deps, length_bound=max_length), limit):
        start = cycle.index(min(cycle))
        cycle = cycle[start:] + cycle[:start]
        levels = {t.level[v] for v in cycle}
        assert len(levels) == 1, f"dependency cycle {cycle} spans levels {sorted(levels)}"
        found.append(DependencyCycle(vertices=tuple(cycle), type=_classify(deps, cycle), level=levels.pop()))
    found.sort(key=lambda c: (c.level, len(c.vertices), c.vertices))
    logger.debug(f"found {len(found)} dependency cycle(s)")
    return found


@dataclass(frozen=True)
class BoundsVerdict:
    h: int
    d: int
    delta_g: int
    delta_t: int
    height: int
    applicable: bool
    lower: int
    upper: int
    lower_ok: bool
    upper_ok: bool

    @property
    def passed(self) -> bool:
        return not self.applicable or (self.lower_ok and self.upper_ok)

    def to_dict(self) -> dict:
        return {
            'h': self.h,
            'd': self.d,
            'delta_g': self.delta_g,
            'delta_t': self.delta_t,
            'height': self.height,
            'applicable': self.applicable,
            'lower': self.lower,
            'upper': self.upper,
            'lower_ok': self.lower_ok,
            'upper_ok': self.upper_ok,
            'passed': self.passed,
        }


def check_color_bounds(g: Graph, t: RootedTree, d: int, outcome: Coloring) -> BoundsVerdict:
    """
    Color-count envelope of a d-band schedule, h counted as max color + 1.

    Applies when d <= height + 1 and the graph degree is at least 2. The
    upper bound is 2d(deg_G - 1); the lower bound is d(deg_T - 1) + 1, or just
    d when the tree is a path. The lower bound is attained only on worst-case
    inputs, so callers judge the two sides separately.
    """
    h = outcome.h_max
    delta_g, delta_t = g.max_degree, t.max_degree
    applicable = d <= t.height + 1 and delta_g >= 2
    lower = d if delta_t <= 2 else d * (delta_t - 1) + 1
    upper = 2 * d * (delta_g - 1)
    return BoundsVerdict(
        h=h,
        d=d,
        delta_g=delta_g,
        delta_t=delta_t,
        height=t.height,
        applicable=applicable,
        lower=lower,
        upper=upper,
        lower_ok=lower <= h,
        upper_ok=h <= upper,
    )
