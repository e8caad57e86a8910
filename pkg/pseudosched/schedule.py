"""
Verifiers for broadcast schedules.

An ordered pair (u, v) is nonconflicting when u and v are adjacent, colored
differently, and no other neighbor of v shares u's color: v hears u's slot
without interference. Every verifier requires a total coloring.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from pseudosched.config import ORACLE_MAX_VERTICES
from pseudosched.errors import GraphError, SizeLimitError
from pseudosched.models.coloring import Coloring
from pseudosched.models.graph import Graph
from pseudosched.models.tree import RootedTree, kinship

logger = logging.getLogger(__name__)


def _total(g: Graph, c: Coloring) -> Coloring:
    return c.require_total(g.n)


def _pair(g: Graph, c: Coloring, u: int, v: int) -> bool:
    if u == v or not g.has_edge(u, v) or c[u] == c[v]:
        return False
    return all(c[x] != c[u] for x in g.neighbors(v) if x != u)


def is_nonconflicting_pair(g: Graph, c: Coloring, u: int, v: int) -> bool:
    _total(g, c)
    return _pair(g, c, g.check_vertex(u), g.check_vertex(v))


def is_nonconflicting_path(g: Graph, c: Coloring, path: Sequence[int]) -> bool:
    _total(g, c)
    if not path:
        raise GraphError("path must contain at least one vertex")
    for u, v in zip(path, path[1:]):
        if not g.has_edge(g.check_vertex(u), g.check_vertex(v)):
            raise GraphError(f"{u} and {v} are consecutive in the path but not adjacent")
    return all(_pair(g, c, u, v) for u, v in zip(path, path[1:]))


def is_bidirectional_edge(g: Graph, c: Coloring, u: int, v: int) -> bool:
    u, v = g.check_vertex(u), g.check_vertex(v)
    _total(g, c)
    return _pair(g, c, u, v) and _pair(g, c, v, u)


def nonconflict_arcs(g: Graph, c: Coloring) -> List[Tuple[int, int]]:
    _total(g, c)
    return [(u, v) for u in g.vertices for v in g.neighbors(u) if _pair(g, c, u, v)]


def is_strict_schedule(g: Graph, c: Coloring) -> bool:
    _total(g, c)
    return all(_pair(g, c, u, v) for u in g.vertices for v in g.neighbors(u))


def is_pseudo_schedule(g: Graph, c: Coloring) -> bool:
    """True iff the digraph of nonconflicting pairs is strongly connected."""
    arcs = nonconflict_arcs(g, c)
    if g.n <= 1:
        return True
    if not arcs:
        return False
    rows, cols = zip(*arcs)
    digraph = csr_matrix((np.ones(len(arcs), dtype=np.int8), (rows, cols)), shape=(g.n, g.n))
    count, _ = connected_components(digraph, directed=True, connection='strong')
    return count == 1


def is_T_pseudo_schedule(g: Graph, t: RootedTree, c: Coloring) -> bool:
    _total(g, c)
    kinship(g, t)
    ok = all(_pair(g, c, u, v) and _pair(g, c, v, u) for u, v in t.tree_edges())
    if ok and not is_pseudo_schedule(g, c):
        # Bidirectional spanning tree always yields strong connectivity
        raise AssertionError("tree is bidirectional but the nonconflict digraph is not strongly connected")
    return ok


def oracle_pseudo_check(g: Graph, c: Coloring, limit: int = ORACLE_MAX_VERTICES) -> bool:
    """Pseudo-schedule test by enumerating simple nonconflicting paths for every ordered pair."""
    if g.n > limit:
        raise SizeLimitError(f"oracle limited to {limit} vertices, got {g.n}")
    _total(g, c)

    def reaches(path: List[int], target: int) -> bool:
        tail = path[-1]
        if tail == target:
            return True
        for nxt in g.neighbors(tail):
            if nxt in path or not _pair(g, c, tail, nxt):
                continue
            path.append(nxt)
            found = reaches(path, target)
            path.pop()
            if found:
                return True
        return False

    return all(reaches([s], t) for s in g.vertices for t in g.vertices if s != t)


def verdict(g: Graph, c: Coloring, t: Optional[RootedTree] = None) -> dict:
    _total(g, c)
    result = {
        'strict': is_strict_schedule(g, c),
        'pseudo': is_pseudo_schedule(g, c),
        't_pseudo': None if t is None else is_T_pseudo_schedule(g, t, c),
        'h_max': c.h_max,
        'h_distinct': c.h_distinct,
    }
    if not result['pseudo']:
        logger.warning(f"coloring is not a pseudo-schedule (h_max={c.h_max})")
    return result
