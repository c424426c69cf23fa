"""The star-transposition flip graph on multiset permutations."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .partition_core import FrequencyVector, PartitionError, as_partition, num_vertices

Vertex = tuple[int, ...]

DEFAULT_CAP = 20000


class CapExceeded(RuntimeError):
    """Raised when an instance is larger than the configured vertex cap."""


def is_vertex(a: FrequencyVector | Sequence[int], x: Sequence[int]) -> bool:
    a = as_partition(a)
    if len(x) != a.n:
        return False
    counts = [0] * a.k
    for s in x:
        if not 1 <= s <= a.k:
            return False
        counts[s - 1] += 1
    return tuple(counts) == a.parts


def check_vertex(a: FrequencyVector | Sequence[int], x: Sequence[int]) -> Vertex:
    x = tuple(int(s) for s in x)
    if not is_vertex(a, x):
        raise ValueError(f"{format_vertex(x)} is not a multiset permutation of {tuple(a)}")
    return x


def format_vertex(x: Sequence[int]) -> str:
    if max(x, default=0) <= 9:
        return "".join(str(s) for s in x)
    return ",".join(str(s) for s in x)


def parse_vertex(text: str) -> Vertex:
    text = text.strip()
    if "," in text:
        return tuple(int(t) for t in text.split(","))
    if not text.isdigit():
        raise ValueError(f"cannot parse vertex {text!r}")
    return tuple(int(ch) for ch in text)


def first_vertex(a: FrequencyVector | Sequence[int]) -> Vertex:
    a = as_partition(a)
    return tuple(s for s, c in enumerate(a.parts, start=1) for _ in range(c))


def _next_perm(x: list[int]) -> bool:
    i = len(x) - 2
    while i >= 0 and x[i] >= x[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = len(x) - 1
    while x[j] <= x[i]:
        j -= 1
    x[i], x[j] = x[j], x[i]
    x[i + 1:] = reversed(x[i + 1:])
    return True


def enumerate_vertices(a: FrequencyVector | Sequence[int], cap: int | None = DEFAULT_CAP) -> Iterator[Vertex]:
    """Yield all multiset permutations of a in lexicographic order."""
    a = as_partition(a)
    if cap is not None and num_vertices(a) > cap:
        raise CapExceeded(f"{num_vertices(a)} vertices exceed cap {cap}")
    x = list(first_vertex(a))
    while True:
        yield tuple(x)
        if not _next_perm(x):
            return


def star_neighbors(x: Sequence[int]) -> list[Vertex]:
    """Neighbors of x, ordered by the swapped position."""
    out = []
    for i in range(1, len(x)):
        if x[i] != x[0]:
            y = list(x)
            y[0], y[i] = y[i], y[0]
            out.append(tuple(y))
    return out


def degree(x: Sequence[int]) -> int:
    return sum(1 for s in x[1:] if s != x[0])


def flip(x: Sequence[int], pos: int) -> Vertex:
    """Apply the star transposition at 1-based position pos."""
    if not 2 <= pos <= len(x):
        raise ValueError(f"flip position {pos} out of range")
    if x[pos - 1] == x[0]:
        raise ValueError(f"flip at {pos} swaps equal symbols in {format_vertex(x)}")
    y = list(x)
    y[0], y[pos - 1] = y[pos - 1], y[0]
    return tuple(y)


def flip_position(x: Sequence[int], y: Sequence[int]) -> int:
    """The 1-based position of the star transposition taking x to y, or 0."""
    diff = [i for i in range(len(x)) if x[i] != y[i]]
    if len(diff) == 2 and diff[0] == 0 and x[0] == y[diff[1]] and x[diff[1]] == y[0]:
        return diff[1] + 1
    return 0


def inversion_parity(x: Sequence[int]) -> int:
    """0 for even and 1 for odd inversion count; only for all-distinct symbols."""
    if len(set(x)) != len(x):
        raise PartitionError("inversion parity is only a bipartition when all symbols are distinct")
    inv = 0
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            if x[i] > x[j]:
                inv += 1
    return inv & 1


def encode_rows(rows: np.ndarray) -> np.ndarray:
    """Pack rows of small symbols into int64 codes that sort lexicographically."""
    rows = np.asarray(rows, dtype=np.int64)
    codes = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(rows.shape[1]):
        codes = codes * 16 + rows[:, j]
    return codes


class FlipGraph:
    """Materialized G(a): lexicographic vertex array with an adjacency table.

    ``nbr[v, i]`` is the vertex reached by the star transposition at position
    ``i + 2`` or -1 when that position holds the first symbol.
    """

    def __init__(self, a: FrequencyVector | Sequence[int], cap: int | None = DEFAULT_CAP):
        a = as_partition(a)
        if a.k < 2:
            raise PartitionError("flip graphs need at least two symbols")
        if a.n > 15:
            raise CapExceeded("strings longer than 15 are not supported")
        self.a = a
        self.n = a.n
        self.k = a.k
        self.vertices = np.array(list(enumerate_vertices(a, cap)), dtype=np.int8)
        self.size = self.vertices.shape[0]
        self.codes = encode_rows(self.vertices)
        n = self.n
        nbr = np.full((self.size, n - 1), -1, dtype=np.int32)
        for i in range(1, n):
            swapped = self.vertices.copy()
            swapped[:, 0] = self.vertices[:, i]
            swapped[:, i] = self.vertices[:, 0]
            differs = self.vertices[:, 0] != self.vertices[:, i]
            idx = np.searchsorted(self.codes, encode_rows(swapped))
            nbr[differs, i - 1] = idx[differs]
        self.nbr = nbr
        self.first = self.vertices[:, 0].astype(np.int32)

    def index(self, x: Sequence[int]) -> int:
        code = encode_rows(np.array([x], dtype=np.int64))[0]
        i = int(np.searchsorted(self.codes, code))
        if i >= self.size or self.codes[i] != code:
            raise ValueError(f"{format_vertex(x)} is not a vertex of G{tuple(self.a)}")
        return i

    def vertex(self, i: int) -> Vertex:
        return tuple(int(s) for s in self.vertices[i])

    def neighbors(self, i: int) -> list[int]:
        return [int(j) for j in self.nbr[i] if j >= 0]

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Compressed adjacency: (indptr, indices, flip positions)."""
        mask = self.nbr >= 0
        counts = mask.sum(axis=1)
        indptr = np.zeros(self.size + 1, dtype=np.int32)
        np.cumsum(counts, out=indptr[1:])
        indices = self.nbr[mask].astype(np.int32)
        pos = np.broadcast_to(np.arange(2, self.n + 1, dtype=np.int32), self.nbr.shape)[mask]
        return indptr, indices, pos.astype(np.int32)

    def edges(self) -> Iterator[tuple[int, int]]:
        for v in range(self.size):
            for w in self.nbr[v]:
                if w > v:
                    yield v, int(w)

    def to_dot(self, max_vertices: int = 500) -> str:
        if self.size > max_vertices:
            raise CapExceeded(f"DOT export is limited to {max_vertices} vertices")
        palette = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
                   "#a6cee3", "#a65628", "#f781bf", "#999999", "#66c2a5"]
        lines = [f'graph "G({",".join(map(str, self.a))})" {{', "  node [style=filled];"]
        for v in range(self.size):
            color = palette[(self.first[v] - 1) % len(palette)]
            lines.append(f'  "{format_vertex(self.vertex(v))}" [fillcolor="{color}"];')
        for v, w in self.edges():
            lines.append(f'  "{format_vertex(self.vertex(v))}" -- "{format_vertex(self.vertex(w))}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=64)
def _graph_cached(parts: tuple[int, ...]) -> FlipGraph:
    return FlipGraph(FrequencyVector(parts), cap=None)


def flip_graph(a: FrequencyVector | Sequence[int], cap: int | None = DEFAULT_CAP) -> FlipGraph:
    """Shared, memoized graph instance."""
    a = as_partition(a)
    if cap is not None and num_vertices(a) > cap:
        raise CapExceeded(f"{num_vertices(a)} vertices exceed cap {cap}")
    return _graph_cached(a.parts)


@dataclass(frozen=True)
class SubgraphView:
    """Vertices of G(base) with symbols fixed at some positions other than 1.

    The reduction deletes the fixed positions and relabels the remaining
    symbols by (new frequency desc, old symbol asc), which gives an
    adjacency-preserving bijection onto Pi(reduced).
    """

    base: FrequencyVector
    fixed: tuple[tuple[int, int], ...]
    reduced: FrequencyVector
    relabel: tuple[int, ...]
    free_positions: tuple[int, ...] = field(repr=False)

    @property
    def inverse_relabel(self) -> dict[int, int]:
        return {new: old for old, new in enumerate(self.relabel, start=1) if new}

    def contains(self, x: Sequence[int]) -> bool:
        return is_vertex(self.base, x) and all(x[i - 1] == c for i, c in self.fixed)

    def reduce(self, x: Sequence[int]) -> Vertex:
        if not self.contains(x):
            raise ValueError(f"{format_vertex(x)} is not in the view {self.fixed}")
        return tuple(self.relabel[x[p - 1] - 1] for p in self.free_positions)

    def lift(self, y: Sequence[int]) -> Vertex:
        inv = self.inverse_relabel
        x = [0] * self.base.n
        for i, c in self.fixed:
            x[i - 1] = c
        for p, s in zip(self.free_positions, y):
            x[p - 1] = inv[s]
        return tuple(x)

    def lift_rows(self, rows: np.ndarray) -> np.ndarray:
        """Vectorized lift of an array of reduced vertices."""
        rows = np.asarray(rows)
        table = np.zeros(self.reduced.k + 1, dtype=np.int8)
        for new, old in self.inverse_relabel.items():
            table[new] = old
        out = np.zeros((rows.shape[0], self.base.n), dtype=np.int8)
        for i, c in self.fixed:
            out[:, i - 1] = c
        cols = np.array(self.free_positions, dtype=np.int64) - 1
        out[:, cols] = table[rows]
        return out

    def lift_flip(self, pos: int) -> int:
        """Map a flip position of the reduced graph to the base graph."""
        return self.free_positions[pos - 1]

    def vertices(self) -> Iterator[Vertex]:
        for y in enumerate_vertices(self.reduced, cap=None):
            yield self.lift(y)

    def restrict(self, i: int, c: int) -> "SubgraphView":
        return restrict(self.base, i, c, parent=self)


def restrict(a: FrequencyVector | Sequence[int], i: int, c: int, parent: SubgraphView | None = None) -> SubgraphView:
    """The view G(a)^{i,c}; pass ``parent`` to fix several positions."""
    a = as_partition(a)
    if not 2 <= i <= a.n:
        raise ValueError(f"position {i} must lie in 2..{a.n}")
    if not 1 <= c <= a.k:
        raise ValueError(f"symbol {c} out of range 1..{a.k}")
    fixed = dict(parent.fixed) if parent is not None else {}
    if i in fixed:
        raise ValueError(f"position {i} is already fixed")
    fixed[i] = c
    counts = list(a.parts)
    for _, s in fixed.items():
        counts[s - 1] -= 1
        if counts[s - 1] < 0:
            raise ValueError(f"symbol {s} is fixed more often than it occurs")
    order = sorted((s for s in range(1, a.k + 1) if counts[s - 1] > 0), key=lambda s: (-counts[s - 1], s))
    relabel = [0] * a.k
    for new, old in enumerate(order, start=1):
        relabel[old - 1] = new
    reduced = FrequencyVector(tuple(counts[s - 1] for s in order))
    free = tuple(p for p in range(1, a.n + 1) if p not in fixed)
    return SubgraphView(a, tuple(sorted(fixed.items())), reduced, tuple(relabel), free)
