"""Frequency vectors, the Delta parameter, covers and class sizes."""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class PartitionError(ValueError):
    """Raised for malformed or out-of-domain frequency vectors."""


@dataclass(frozen=True, order=True)
class FrequencyVector:
    """A non-increasing sequence of positive symbol counts."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        if not parts:
            raise PartitionError("empty partition")
        if any(p <= 0 for p in parts):
            raise PartitionError(f"parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise PartitionError(f"parts must be non-increasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def k(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    def __str__(self) -> str:
        return format_partition(self)


def sort_desc(seq: Iterable[int]) -> FrequencyVector:
    """Sort non-increasingly and drop zero entries."""
    values = [int(v) for v in seq]
    if any(v < 0 for v in values):
        raise PartitionError(f"negative entry in {values}")
    positive = sorted((v for v in values if v > 0), reverse=True)
    if not positive:
        raise PartitionError("empty partition: all entries are zero")
    return FrequencyVector(tuple(positive))


def as_partition(a: FrequencyVector | Sequence[int] | str) -> FrequencyVector:
    """Coerce a vector, a raw sequence or a text form into a FrequencyVector."""
    if isinstance(a, FrequencyVector):
        return a
    if isinstance(a, str):
        return parse_partition(a)
    return FrequencyVector(tuple(a))


_POWER = re.compile(r"^\s*(\d+)\s*\^\s*(\d+)\s*$")


def parse_partition(text: str) -> FrequencyVector:
    """Parse '4,3,1' or exponent shorthand such as '3^4' or '4,1^5'."""
    parts: list[int] = []
    for chunk in text.replace(" ", "").split(","):
        if not chunk:
            raise PartitionError(f"cannot parse partition {text!r}")
        m = _POWER.match(chunk)
        if m:
            parts.extend([int(m.group(1))] * int(m.group(2)))
        elif chunk.isdigit():
            parts.append(int(chunk))
        else:
            raise PartitionError(f"cannot parse partition {text!r}")
    return FrequencyVector(tuple(parts))


def format_partition(a: FrequencyVector | Sequence[int]) -> str:
    return ",".join(str(p) for p in a)


def delta(a: FrequencyVector | Sequence[int]) -> int:
    a = as_partition(a)
    return a.n - 2 * a.parts[0]


def covers(a: FrequencyVector | Sequence[int]) -> set[FrequencyVector]:
    """All partitions obtained by decrementing one part a_i > a_{i+1}."""
    a = as_partition(a)
    parts = a.parts
    out = set()
    for i, p in enumerate(parts):
        nxt = parts[i + 1] if i + 1 < len(parts) else 0
        if p > nxt:
            b = list(parts)
            b[i] -= 1
            b = [v for v in b if v > 0]
            if b:
                out.add(FrequencyVector(tuple(b)))
    return out


def cover_delta(a: FrequencyVector | Sequence[int], i: int) -> int:
    """Delta of the cover obtained by decrementing part i (0-based)."""
    a = as_partition(a)
    parts = list(a.parts)
    parts[i] -= 1
    return delta(sort_desc(parts))


def multinomial(counts: Sequence[int]) -> int:
    total = math.factorial(sum(counts))
    for c in counts:
        total //= math.factorial(c)
    return total


def num_vertices(a: FrequencyVector | Sequence[int]) -> int:
    return multinomial(as_partition(a).parts)


def class_sizes(a: FrequencyVector | Sequence[int]) -> tuple[int, ...]:
    """Number of multiset permutations starting with each symbol."""
    a = as_partition(a)
    if a.k < 2:
        raise PartitionError("class sizes need at least two symbols")
    sizes = []
    for i in range(a.k):
        rest = list(a.parts)
        rest[i] -= 1
        sizes.append(multinomial(rest))
    return tuple(sizes)


class Regime(enum.Enum):
    NEGATIVE = "negative"
    ZERO = "zero"
    POSITIVE = "positive"


@dataclass(frozen=True)
class Verdict:
    regime: Regime
    delta: int
    hamilton_cycle_possible: bool
    hamilton_path_possible: bool

    def describe(self) -> str:
        if self.regime is Regime.NEGATIVE:
            if self.hamilton_path_possible:
                return f"Δ={self.delta}: no Hamilton cycle, Hamilton path exists"
            return f"Δ={self.delta}: no Hamilton cycle or path"
        if self.regime is Regime.ZERO:
            return f"Δ={self.delta}: boundary regime, decided case by case"
        return f"Δ={self.delta}: Hamilton cycle expected"


def classify(a: FrequencyVector | Sequence[int]) -> Verdict:
    """Sort an instance into a Delta regime with its cycle/path verdict."""
    a = as_partition(a)
    if a.k < 2:
        raise PartitionError("flip graphs need at least two symbols")
    d = delta(a)
    if d < 0:
        return Verdict(Regime.NEGATIVE, d, False, a.parts == (2, 1))
    if d == 0:
        return Verdict(Regime.ZERO, d, True, True)
    return Verdict(Regime.POSITIVE, d, True, True)


def partitions_of(n: int, max_part: int | None = None) -> Iterator[FrequencyVector]:
    """All partitions of n in reverse lexicographic order."""
    if max_part is None:
        max_part = n

    def rec(rem: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rem == 0:
            yield ()
            return
        for p in range(min(rem, cap), 0, -1):
            for tail in rec(rem - p, p):
                yield (p,) + tail

    for parts in rec(n, max_part):
        yield FrequencyVector(parts)
