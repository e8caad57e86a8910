"""Strict-schedule baseline and an exhaustive minimum pseudo-schedule search for tiny graphs."""
import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence

from pseudosched.config import EXACT_MAX_VERTICES
from pseudosched.errors import ParameterError, SizeLimitError
from pseudosched.models.coloring import Coloring
from pseudosched.models.graph import Graph
from pseudosched.schedule import is_pseudo_schedule, oracle_pseudo_check

logger = logging.getLogger(__name__)

GREEDY_STRICT = 'greedy-strict'
EXACT_PSEUDO = 'exact-min-pseudo'


@dataclass(frozen=True)
class BaselineResult:
    """Colors are 1-based, so `colors_used_max` is the largest color."""

    coloring: Coloring
    colors_used_max: int
    algorithm: str


def _check_order(g: Graph, order: Sequence[int]) -> List[int]:
    if not isinstance(order, (list, tuple)):
        raise ParameterError(f"order must be a list of vertex IDs, got {type(order).__name__}")
    try:
        order = [int(v) for v in order]
    except (TypeError, ValueError) as e:
        raise ParameterError(f"order must be a list of vertex IDs: {e}") from e
    if sorted(order) != list(g.vertices):
        raise ParameterError(f"order must be a permutation of 0..{g.n - 1}")
    return order


def greedy_strict(g: Graph, order: Optional[Sequence[int]] = None) -> BaselineResult:
    """Each vertex takes the smallest color unused within distance two among already-colored vertices."""
    order = list(g.vertices) if order is None else _check_order(g, order)
    colors: List[Optional[int]] = [None] * g.n
    for v in order:
        nearby = set(g.neighbors(v))
        for u in g.neighbors(v):
            nearby.update(g.neighbors(u))
        nearby.discard(v)
        taken = {colors[u] for u in nearby if colors[u] is not None}
        k = 1
        while k in taken:
            k += 1
        colors[v] = k
    coloring = Coloring.from_list(colors)
    return BaselineResult(coloring=coloring, colors_used_max=coloring.max_color or 0, algorithm=GREEDY_STRICT)


def _restricted_growth(n: int, k: int) -> Iterator[List[int]]:
    """Colorings of n vertices with exactly k colors, one per color-permutation class."""
    colors = [0] * n

    def extend(i, used):
        if n - i < k - used:
            return
        if i == n:
            if used == k:
                yield [c + 1 for c in colors]
            return
        for c in range(min(used + 1, k)):
            colors[i] = c
            yield from extend(i + 1, max(used, c + 1))

    if n == 0:
        return
    yield from extend(0, 0)


def exact_min_pseudo(g: Graph, max_colors: int, limit: int = EXACT_MAX_VERTICES) -> Optional[Coloring]:
    """Fewest-color pseudo-schedule with at most `max_colors` colors, or None when there is none."""
    if g.n > limit:
        raise SizeLimitError(f"exhaustive search limited to {limit} vertices, got {g.n}")
    g.require_connected()
    for k in range(1, max_colors + 1):
        for colors in _restricted_growth(g.n, k):
            c = Coloring.from_list(colors)
            if is_pseudo_schedule(g, c) and oracle_pseudo_check(g, c):
                logger.debug(f"minimum pseudo-schedule uses {k} colors")
                return c
    return None
