import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.spatial.distance import pdist

from pseudosched.config import GNP_MAX_ATTEMPTS
from pseudosched.errors import GeneratorError
from pseudosched.models.graph import Graph
from pseudosched.models.tree import RootedTree

logger = logging.getLogger(__name__)

KINDS = ('path', 'star', 'grid', 'random-gnp', 'random-geometric', 'cycle-gadget')
CYCLE_TYPES = ('I', 'II', 'mixed')


@dataclass(frozen=True)
class GeneratedInstance:
    graph: Graph
    tree: Optional[RootedTree] = None
    kind: str = ''
    params: dict = field(default_factory=dict)


def _positive(name, value, minimum=1):
    if value is None or int(value) < minimum:
        raise GeneratorError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def path_graph(n: int) -> Graph:
    n = _positive('n', n)
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    """Center 0 with leaves 1..leaves."""
    leaves = _positive('leaves', leaves)
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def grid_graph(rows: int, cols: int) -> Graph:
    rows = _positive('rows', rows)
    cols = _positive('cols', cols)
    edges = []
    for i in range(rows):
        for j in range(cols):
            v = i * cols + j
            if j < cols - 1:
                edges.append((v, v + 1))
            if i < rows - 1:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def _connected_sample(name, draw, attempts):
    for attempt in range(1, attempts + 1):
        g = draw()
        if g.is_connected():
            logger.debug(f"{name}: connected sample after {attempt} attempt(s)")
            return g
    raise GeneratorError(f"{name} produced no connected graph in {attempts} attempts")


def random_gnp(n: int, p: float, seed: int, attempts: int = GNP_MAX_ATTEMPTS) -> Graph:
    n = _positive('n', n)
    if not 0.0 < p <= 1.0:
        raise GeneratorError(f"p must lie in (0, 1], got {p}")
    rng = np.random.default_rng(seed)
    rows, cols = np.triu_indices(n, k=1)

    def draw():
        keep = rng.random(rows.size) < p
        return Graph.from_edges(n, zip(rows[keep].tolist(), cols[keep].tolist()))

    return _connected_sample('random-gnp', draw, attempts)


def random_geometric(n: int, radius: float, seed: int, attempts: int = GNP_MAX_ATTEMPTS) -> Graph:
    """Unit-square points joined when their Euclidean distance is at most `radius`."""
    n = _positive('n', n)
    if radius <= 0:
        raise GeneratorError(f"radius must be positive, got {radius}")
    rng = np.random.default_rng(seed)
    rows, cols = np.triu_indices(n, k=1)

    def draw():
        points = rng.random((n, 2))
        keep = pdist(points) <= radius
        return Graph.from_edges(n, zip(rows[keep].tolist(), cols[keep].tolist()))

    return _connected_sample('random-geometric', draw, attempts)


def cycle_gadget(k: int, cycle_type: str) -> GeneratedInstance:
    """
    Graph plus tree holding a dependency cycle of length k among the cycle vertices.

    A request arc v_i -> v_{i-1} is a stepchild of v_i whose tree parent is
    v_{i-1}; a put arc v_i -> v_{i-1} is a non-tree edge from the parent of
    v_i down to v_{i-1}. The cycle runs downward in vertex order, so the arc
    out of its smallest vertex is the only one pointing up. Type I places the
    cycle at level 1 under the root (vertices 1..k); type II and mixed place
    it at level 2 (vertices k+1..2k) under private parents 1..k. Mixed starts
    with a request arc and never puts two request arcs next to each other.
    """
    k = _positive('k', k, minimum=2)
    if cycle_type not in CYCLE_TYPES:
        raise GeneratorError(f"cycle type must be one of {CYCLE_TYPES}, got {cycle_type!r}")

    parent: List[int] = [0]
    extra: List[Tuple[int, int]] = []

    def add_vertex(p):
        parent.append(p)
        return len(parent) - 1

    if cycle_type == 'I':
        cycle = [add_vertex(0) for _ in range(k)]
        arcs = ['R'] * k
    else:
        private = [add_vertex(0) for _ in range(k)]
        cycle = [add_vertex(p) for p in private]
        arcs = ['P'] * k if cycle_type == 'II' else ['R' if i % 2 == 0 and i < k - 1 else 'P' for i in range(k)]

    for i, arc in enumerate(arcs):
        v, nxt = cycle[i], cycle[i - 1]
        if arc == 'R':
            s = add_vertex(nxt)
            extra.append((v, s))
        else:
            extra.append((parent[v], nxt))

    n = len(parent)
    tree_edges = [(v, parent[v]) for v in range(1, n)]
    g = Graph.from_edges(n, tree_edges + extra)
    t = RootedTree.from_parents(g, 0, parent)
    return GeneratedInstance(graph=g, tree=t, kind='cycle-gadget', params={'k': k, 'type': cycle_type})


def generate(kind: str, seed: int = 0, **params) -> GeneratedInstance:
    """Build one instance; same kind, params and seed always give the same graph."""
    if kind == 'path':
        g = path_graph(params.get('n'))
    elif kind == 'star':
        g = star_graph(params.get('leaves', params.get('n')))
    elif kind == 'grid':
        g = grid_graph(params.get('rows'), params.get('cols'))
    elif kind == 'random-gnp':
        g = random_gnp(params.get('n'), float(params.get('p', 0.3)), seed)
    elif kind == 'random-geometric':
        g = random_geometric(params.get('n'), float(params.get('radius', 0.3)), seed)
    elif kind == 'cycle-gadget':
        return cycle_gadget(params.get('k'), params.get('cycle_type', params.get('type', 'I')))
    else:
        raise GeneratorError(f"unknown generator kind {kind!r}; expected one of {KINDS}")
    clean = {key: value for key, value in params.items() if value is not None}
    return GeneratedInstance(graph=g, kind=kind, params=clean)
