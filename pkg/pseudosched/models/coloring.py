from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from pseudosched.errors import ColoringError

# Unknown color; serialized as JSON null
UNKNOWN = None


@dataclass(frozen=True)
class Coloring:
    """
    Vertex -> color map over 0..n-1. Entries are nonnegative integers or UNKNOWN.

    Color-count conventions: `h_max` is the greatest assigned color plus one
    (gaps included), `h_distinct` the number of distinct assigned colors.
    """

    colors: Tuple[Optional[int], ...]

    def __post_init__(self):
        for v, k in enumerate(self.colors):
            if k is not UNKNOWN and (isinstance(k, bool) or int(k) != k or k < 0):
                raise ColoringError(f"color of vertex {v} must be a nonnegative integer, got {k!r}")

    @classmethod
    def from_list(cls, colors: Iterable[Optional[int]]) -> 'Coloring':
        return cls(tuple(UNKNOWN if k is None else int(k) for k in colors))

    @classmethod
    def empty(cls, n: int) -> 'Coloring':
        return cls((UNKNOWN,) * n)

    @property
    def n(self) -> int:
        return len(self.colors)

    def __getitem__(self, v: int) -> Optional[int]:
        return self.colors[v]

    def __len__(self) -> int:
        return len(self.colors)

    def with_color(self, v: int, k: Optional[int]) -> 'Coloring':
        colors = list(self.colors)
        colors[v] = k
        return Coloring(tuple(colors))

    @property
    def is_total(self) -> bool:
        return all(k is not UNKNOWN for k in self.colors)

    @property
    def uncolored(self) -> Tuple[int, ...]:
        return tuple(v for v, k in enumerate(self.colors) if k is UNKNOWN)

    def require_total(self, n: Optional[int] = None) -> 'Coloring':
        if n is not None and self.n != n:
            raise ColoringError(f"coloring has {self.n} entries for a graph with {n} vertices")
        missing = self.uncolored
        if missing:
            raise ColoringError(f"coloring is partial; uncolored vertices: {list(missing[:10])}")
        return self

    @property
    def max_color(self) -> Optional[int]:
        return max((k for k in self.colors if k is not UNKNOWN), default=None)

    @property
    def h_max(self) -> int:
        top = self.max_color
        return 0 if top is None else top + 1

    @property
    def h_distinct(self) -> int:
        return len({k for k in self.colors if k is not UNKNOWN})

    def to_dict(self) -> dict:
        return {
            'colors': list(self.colors),
            'h_max': self.h_max,
            'h_distinct': self.h_distinct,
        }
