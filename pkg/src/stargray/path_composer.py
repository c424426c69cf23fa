"""Recursive construction of Hamilton paths in G(a) from paths in subgraphs.

A construction splits G(a) into blocks by fixing symbols at one or two
positions other than 1. Each block is isomorphic to a smaller flip graph,
so a Hamilton path through it can be requested recursively. Consecutive
blocks are joined by one star transposition. The builders below only decide
the block order, the fixed symbols and a few pinned entries; the shared chain
solver picks the remaining entries of the junction vertices and the oracle
fills in the blocks.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from . import ham_lab
from .certificate import HamPath
from .flip_graph import (
    DEFAULT_CAP,
    SubgraphView,
    Vertex,
    check_vertex,
    first_vertex,
    flip_position,
    format_vertex,
    inversion_parity,
    restrict,
    star_neighbors,
)
from .ham_lab import l12_positions, pq
from .partition_core import FrequencyVector, PartitionError, as_partition, delta, format_partition, partitions_of

log = logging.getLogger(__name__)

__all__ = [
    "BlockPlan",
    "CompositionError",
    "CompositionTimeout",
    "Composer",
    "PQTable",
    "Segment",
    "UnsupportedInstance",
    "check_matching",
    "compose_H1",
    "compose_H1p",
    "compose_H1pp",
    "compose_H2",
    "compose_H2p",
    "compose_H2pp",
    "compose_L12",
    "compose_T1k",
    "compose_Tp",
    "gray_code",
    "is_conditional",
    "matching_perms",
    "pq",
    "route",
    "warmup",
    "warmup_partitions",
]

MATCHING_CASES = ("oa", "ob1", "ob2", "ea", "eb1", "eb2")


class CompositionError(RuntimeError):
    """A sub-request could not be served; carries the failing sub-instance."""

    def __init__(self, message: str, instance: tuple | None = None):
        super().__init__(message)
        self.instance = instance


class CompositionTimeout(CompositionError):
    """A base search ran out of time."""


class UnsupportedInstance(ValueError):
    """The instance lies outside what the constructions cover."""


@dataclass(frozen=True)
class PQTable:
    """p_l(s, t) and q_l(s, t) for one value of l."""

    ell: int

    def __post_init__(self) -> None:
        if self.ell not in (3, 4):
            raise ValueError("ell must be 3 or 4")

    def __call__(self, s: int, t: int) -> tuple[int, int]:
        return pq(self.ell, s, t)

    def rows(self) -> list[tuple[int, int, int, int]]:
        return [(s, t, *pq(self.ell, s, t)) for s in (1, 2) for t in (1, 2, self.ell)]


# ------------------------------------------------------- permutation matching


def _matching_constraints(k: int, case: str, a: int | None, b: int | None, c: int | None):
    odd = k % 2 == 1
    ell = (k - 1) // 2 if odd else k // 2
    pi_fix: dict[int, int] = {}
    rho_fix: dict[int, int] = {}
    eqs: list[tuple[int, int]] = []
    neqs: list[tuple[int, int]] = []

    def alternating(upto: int) -> None:
        for j in range(1, upto + 1):
            neqs.append((2 * j, j))
            neqs.append((2 * j + 1, j + 1))

    if case == "oa":
        pi_fix[1] = 1
        rho_fix[1] = a
        rho_fix[k] = b
        alternating(ell)
    elif case == "ob1":
        pi_fix[1] = 1
        pi_fix[k] = c
        rho_fix[1] = 1
        alternating(ell - 1)
        neqs.append((k - 1, k))
    elif case == "ob2":
        pi_fix[1] = 1
        pi_fix[2] = c
        rho_fix[1] = 1
        eqs.append((3, k))
        alternating(ell)
    elif case == "ea":
        pi_fix[1] = 1
        rho_fix[1] = a
        rho_fix[k] = b
        eqs.append((3, k - 1))
        alternating(ell - 1)
        neqs.append((k, k))
    elif case == "eb1":
        pi_fix[1] = 1
        pi_fix[k] = c
        rho_fix[1] = 1
        eqs.append((3, k))
        alternating(ell - 1)
    elif case == "eb2":
        pi_fix[1] = 1
        pi_fix[k] = c
        rho_fix[1] = 1
        alternating(ell - 1)
        neqs.append((k, k))
    return pi_fix, rho_fix, eqs, neqs


def _check_matching_args(k: int, case: str, a, b, c) -> None:
    if case not in MATCHING_CASES:
        raise ValueError(f"unknown case {case!r}")
    if case.startswith("o") and (k < 3 or k % 2 == 0):
        raise ValueError(f"case {case} needs an odd k >= 3, got {k}")
    if case.startswith("e") and (k < 4 or k % 2 == 1):
        raise ValueError(f"case {case} needs an even k >= 4, got {k}")
    if case in ("oa", "ea"):
        if a is None or b is None or not (1 <= a <= k and 1 <= b <= k) or a == b:
            raise ValueError(f"case {case} needs distinct symbols a, b in 1..{k}")
    else:
        if c is None or not 2 <= c <= k:
            raise ValueError(f"case {case} needs a symbol c in 2..{k}")


def matching_perms(k: int, case: str, a: int | None = None, b: int | None = None,
                   c: int | None = None) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Two permutations pi, rho of 1..k meeting the condition set of ``case``.

    The conditions become a bipartite graph between the positions of pi and
    of rho: equalities remove a pair of vertices, inequalities remove an
    edge. A perfect matching then says which entries share a value.
    """
    _check_matching_args(k, case, a, b, c)
    pi_fix, rho_fix, eqs, neqs = _matching_constraints(k, case, a, b, c)
    pairs: dict[int, int] = {}
    for i, j in eqs:
        pairs[i] = j
    for i, x in pi_fix.items():
        for j, y in rho_fix.items():
            if x == y:
                pairs[i] = j
    left = [i for i in range(1, k + 1) if i not in pairs]
    used_right = set(pairs.values())
    right = [j for j in range(1, k + 1) if j not in used_right]
    banned = set(neqs)
    for i, x in pi_fix.items():
        for j, y in rho_fix.items():
            if x != y:
                banned.add((i, j))
    adj = {i: [j for j in right if (i, j) not in banned] for i in left}
    match_right: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in match_right or augment(match_right[j], seen):
                match_right[j] = i
                return True
        return False

    for i in left:
        if not augment(i, set()):
            raise CompositionError(f"no perfect matching for case {case} with k={k}, a={a}, b={b}, c={c}")
    for j, i in match_right.items():
        pairs[i] = j
    fixed_values = set(pi_fix.values()) | set(rho_fix.values())
    pool = iter(v for v in range(1, k + 1) if v not in fixed_values)
    pi = [0] * (k + 1)
    rho = [0] * (k + 1)
    for i in sorted(pairs):
        j = pairs[i]
        value = pi_fix.get(i, rho_fix.get(j))
        if value is None:
            value = next(pool)
        pi[i] = value
        rho[j] = value
    result = tuple(pi[1:]), tuple(rho[1:])
    if not check_matching(k, case, a, b, c, *result):
        raise CompositionError(f"matching for case {case} failed the condition check: {result}")
    return result


def check_matching(k: int, case: str, a, b, c, pi: Sequence[int], rho: Sequence[int]) -> bool:
    """Re-check a (pi, rho) pair against the listed conditions directly."""
    if sorted(pi) != list(range(1, k + 1)) or sorted(rho) != list(range(1, k + 1)):
        return False
    P = lambda i: pi[i - 1]  # noqa: E731
    R = lambda j: rho[j - 1]  # noqa: E731
    if case in ("oa", "ob1", "ob2"):
        ell = (k - 1) // 2
    else:
        ell = k // 2
    alt_upto = ell if case in ("oa", "ob2") else ell - 1
    for j in range(1, alt_upto + 1):
        if P(2 * j) == R(j) or P(2 * j + 1) == R(j + 1):
            return False
    if P(1) != 1:
        return False
    if case == "oa":
        return R(1) == a and R(k) == b
    if case == "ob1":
        return P(k) == c and R(1) == 1 and P(k - 1) != R(k)
    if case == "ob2":
        return P(2) == c and R(1) == 1 and P(3) == R(k)
    if case == "ea":
        return R(1) == a and R(k) == b and P(3) == R(k - 1) and P(k) != R(k)
    if case == "eb1":
        return P(k) == c and R(1) == 1 and P(3) == R(k)
    if case == "eb2":
        return P(k) == c and R(1) == 1 and P(k) != R(k)
    raise ValueError(f"unknown case {case!r}")


def brute_force_matchings(k: int, case: str, a=None, b=None, c=None) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All pairs in S_k x S_k passing the checker; for cross-validation."""
    perms = list(itertools.permutations(range(1, k + 1)))
    for pi in perms:
        if pi[0] != 1:
            continue
        for rho in perms:
            if check_matching(k, case, a, b, c, pi, rho):
                yield pi, rho


# ------------------------------------------------------- chain solving


def _swap(w: Sequence[int], p: int) -> Vertex:
    v = list(w)
    v[0], v[p - 1] = v[p - 1], v[0]
    return tuple(v)


def view_for(a: FrequencyVector, fixed: dict[int, int]) -> SubgraphView:
    view = None
    for pos in sorted(fixed):
        view = restrict(a, pos, fixed[pos], parent=view)
    if view is None:
        raise ValueError("a block must fix at least one position")
    return view


def block_property(b: FrequencyVector) -> str:
    """The property a block of shape b is asked for inside a construction."""
    if delta(b) == 0:
        return "L" if b.k <= 2 else "L1"
    if b.k == 3 and b.parts[0] == b.parts[1] >= 3 and b.parts[2] == 1:
        return "L12"
    if b.k >= 3 and all(p == 1 for p in b.parts):
        return "L"
    return "H"


def admissible(b: FrequencyVector, prop: str, u: Sequence[int], v: Sequence[int]) -> bool:
    """Whether a path u..v is among those the property promises."""
    if tuple(u) == tuple(v):
        return False
    if prop == "H":
        return True
    if prop == "L1":
        return (u[0] == 1) != (v[0] == 1)
    if prop == "L":
        if b.k == 2:
            return u[0] != v[0]
        return inversion_parity(u) != inversion_parity(v)
    if prop == "L12":
        return bool(l12_positions(u, v) or l12_positions(v, u))
    raise ValueError(f"unknown property {prop!r}")


@dataclass
class Segment:
    """One block of a chain, or a prebuilt stretch of path."""

    label: str
    fixed: dict[int, int]
    view: SubgraphView | None = None
    prop: str = ""
    rows: np.ndarray | None = None
    start: Vertex | None = None
    end: Vertex | None = None

    @property
    def prebuilt(self) -> bool:
        return self.rows is not None

    def contains(self, w: Sequence[int]) -> bool:
        return all(w[p - 1] == s for p, s in self.fixed.items())


@dataclass
class BlockPlan:
    """A fully specified construction: blocks, joints and endpoint pairs."""

    tag: str
    a: FrequencyVector
    x: Vertex
    y: Vertex
    segments: list[Segment]
    positions: dict[str, int] = field(default_factory=dict)
    pi: tuple[int, ...] | None = None
    rho: tuple[int, ...] | None = None
    joints: list[int] = field(default_factory=list)
    z: Vertex | None = None
    z_prime: Vertex | None = None
    relaxed: bool = False
    transform: str = "identity"

    def describe(self) -> str:
        parts = [f"{self.tag} on G({format_partition(self.a)})"]
        if self.positions:
            parts.append(" ".join(f"{k}={v}" for k, v in self.positions.items()))
        if self.pi:
            parts.append(f"pi={self.pi}")
        if self.rho:
            parts.append(f"rho={self.rho}")
        parts.append(" ".join(s.label for s in self.segments))
        return "; ".join(parts)


Pin = tuple[int, str, int, int]  # (segment index, 'u' or 'v', position, symbol)


def _lex_completions(n: int, counts: list[int], partial: dict[int, int]) -> Iterator[Vertex]:
    """Complete a partial assignment (0-based positions) in lexicographic order."""
    rest = list(counts)
    for s in partial.values():
        rest[s - 1] -= 1
        if rest[s - 1] < 0:
            return
    free = [i for i in range(n) if i not in partial]
    symbols = [s for s in range(1, len(counts) + 1) for _ in range(rest[s - 1])]
    if len(symbols) != len(free):
        return
    base = [0] * n
    for i, s in partial.items():
        base[i] = s
    cur = symbols[:]
    while True:
        w = base[:]
        for i, s in zip(free, cur):
            w[i] = s
        yield tuple(w)
        i = len(cur) - 2
        while i >= 0 and cur[i] >= cur[i + 1]:
            i -= 1
        if i < 0:
            return
        j = len(cur) - 1
        while cur[j] <= cur[i]:
            j -= 1
        cur[i], cur[j] = cur[j], cur[i]
        cur[i + 1:] = reversed(cur[i + 1:])


def joint_position(A: Segment, B: Segment) -> int:
    """The unique position fixed in both blocks to different symbols."""
    common = [p for p in A.fixed if p in B.fixed and A.fixed[p] != B.fixed[p]]
    if len(common) != 1:
        raise CompositionError(f"blocks {A.label} and {B.label} do not meet in exactly one position: {common}")
    return common[0]


class ChainSolver:
    """Chooses junction vertices for a chain of blocks by a lexicographic DFS."""

    def __init__(self, a: FrequencyVector, segments: list[Segment], x: Vertex, y: Vertex,
                 pins: Sequence[Pin] = (), checks: Sequence[tuple[int, Callable]] = (), budget: int = 200_000):
        self.a = a
        self.segs = segments
        self.x = x
        self.y = y
        self.m = len(segments)
        self.joints = [joint_position(segments[t], segments[t + 1]) for t in range(self.m - 1)]
        self.pins = list(pins)
        self.checks = list(checks)
        self.budget = budget
        self.nodes = 0

    def _accept(self, t: int, u: Vertex, v: Vertex, strict: bool) -> bool:
        seg = self.segs[t]
        if seg.prebuilt:
            return u == seg.start and v == seg.end
        if not (seg.contains(u) and seg.contains(v)):
            return False
        if not admissible(seg.view.reduced, seg.prop, seg.view.reduce(u), seg.view.reduce(v)):
            return False
        if strict:
            for idx, fn in self.checks:
                if idx == t and not fn(u, v):
                    return False
        return True

    def _partial(self, t: int, strict: bool) -> dict[int, int] | None:
        A, B, p = self.segs[t], self.segs[t + 1], self.joints[t]
        partial: dict[int, int] = {}

        def put(pos: int, sym: int) -> bool:
            if partial.get(pos - 1, sym) != sym:
                return False
            partial[pos - 1] = sym
            return True

        for pos, sym in A.fixed.items():
            if not put(pos, sym):
                return None
        for pos, sym in B.fixed.items():
            if not put(1 if pos == p else pos, sym):
                return None
        if strict:
            for idx, side, pos, sym in self.pins:
                if idx == t and side == "v":
                    ok = put(pos, sym)
                elif idx == t + 1 and side == "u":
                    ok = put(p if pos == 1 else 1 if pos == p else pos, sym)
                else:
                    continue
                if not ok:
                    return None
        return partial

    def _candidates(self, t: int, strict: bool) -> Iterator[Vertex]:
        A, B, p = self.segs[t], self.segs[t + 1], self.joints[t]
        if A.prebuilt:
            yield A.end
            return
        if B.prebuilt:
            yield _swap(B.start, p)
            return
        partial = self._partial(t, strict)
        if partial is None:
            return
        for w in _lex_completions(self.a.n, list(self.a.parts), partial):
            if w[0] != w[p - 1]:
                yield w

    def _pins_hold(self, t: int, u: Vertex, v: Vertex) -> bool:
        for idx, side, pos, sym in self.pins:
            if idx == t and (u if side == "u" else v)[pos - 1] != sym:
                return False
        return True

    def solve(self, strict: bool = True) -> bool:
        starts: list[Vertex | None] = [None] * self.m
        ends: list[Vertex | None] = [None] * self.m
        starts[0] = self.x
        ends[-1] = self.y
        for t, seg in enumerate(self.segs):
            if seg.prebuilt:
                if t == 0 and seg.start != self.x or t == self.m - 1 and seg.end != self.y:
                    return False
                starts[t], ends[t] = seg.start, seg.end
        if self.m == 1:
            return self._accept(0, self.x, self.y, strict)
        for t in range(self.m - 1):
            seg_a, seg_b = self.segs[t], self.segs[t + 1]
            if not (seg_a.prebuilt or seg_b.prebuilt) and self._partial(t, strict) is None:
                return False
        self.nodes = 0
        # whether the rest of the chain can be completed depends only on the
        # vertex where block t+1 is entered, so dead entries are remembered
        dead: list[set[Vertex]] = [set() for _ in range(self.m)]

        def rec(t: int) -> bool:
            if t == self.m - 1:
                return True
            p = self.joints[t]
            for w in self._candidates(t, strict):
                self.nodes += 1
                if self.nodes > self.budget:
                    if strict:
                        return False
                    raise CompositionError(f"junction search budget exhausted in a {self.m}-block chain")
                nxt = _swap(w, p)
                if not self._accept(t, starts[t], w, strict):
                    continue
                if strict and not self._pins_hold(t, starts[t], w):
                    continue
                if not self.segs[t + 1].contains(nxt):
                    continue
                if self.segs[t + 1].prebuilt and nxt != self.segs[t + 1].start:
                    continue
                if nxt in dead[t + 1]:
                    continue
                if t + 1 == self.m - 1:
                    if not self._accept(t + 1, nxt, self.y, strict):
                        continue
                    if strict and not self._pins_hold(t + 1, nxt, self.y):
                        continue
                saved = ends[t], starts[t + 1]
                ends[t], starts[t + 1] = w, nxt
                if rec(t + 1):
                    return True
                if self.nodes > self.budget:
                    return False
                dead[t + 1].add(nxt)
                ends[t], starts[t + 1] = saved
            return False

        if not rec(0):
            return False
        for t, seg in enumerate(self.segs):
            seg.start, seg.end = starts[t], ends[t]
        return True


# ------------------------------------------------------------ oracle


Oracle = Callable[[FrequencyVector, Vertex, Vertex, str], HamPath]


def route(a: FrequencyVector | Sequence[int], prop: str = "H") -> str:
    """Which construction serves a request for property ``prop`` in G(a)."""
    a = as_partition(a)
    d = delta(a)
    parts = a.parts
    k = a.k
    if k < 2:
        raise PartitionError("flip graphs need at least two symbols")
    if d < 0:
        return "negative"
    if parts == (1, 1):
        return "trivial"
    if d == 0:
        return "lab" if parts[0] <= 4 else "lab-conditional"
    if all(p == 1 for p in parts):
        return "lab" if k <= 4 else "T1k"
    if parts[0] == 2 and all(p == 1 for p in parts[1:]):
        return "lab" if k <= 4 else "Tp"
    if d == 1:
        if parts == (3, 1, 1, 1, 1):
            return "lab"
        if k == 3 and parts[0] == parts[1] and parts[2] == 1:
            alpha = parts[0]
            if alpha <= 4:
                return "L12" if prop == "L12" else "lab"
            return "L12"
        if k == 3 and parts[1] == parts[0] - 1 and parts[2] == 2 and parts[0] >= 3:
            return "H1p"
        if k == 4 and parts[1] == parts[0] - 1 and parts[2:] == (1, 1) and parts[0] >= 3:
            return "H1pp"
        return "H1"
    if k == 3 and parts[0] == parts[1] >= 3 and parts[2] == 2:
        return "H2p"
    if k == 4 and parts[0] == parts[1] >= 3 and parts[2:] == (1, 1):
        return "H2pp"
    return "H2"


def is_conditional(a: FrequencyVector | Sequence[int]) -> bool:
    """True when a construction for G(a) rests on unverified Delta-zero cases."""
    a = as_partition(a)
    return a.parts[0] > 4 and route(a) not in ("negative", "trivial", "T1k", "Tp")


class Composer:
    """Serves Hamilton path requests by recursive composition.

    ``plans`` collects the plans of every composed request when ``record`` is
    set, innermost first.
    """

    def __init__(self, timeout: float | None = 600.0, cap: int | None = DEFAULT_CAP,
                 cache: ham_lab.CertificateCache | None = None, record: bool = False,
                 allow_conditional: bool = False):
        self.timeout = timeout
        self.cap = cap
        self.cache = cache
        self.record = record
        self.allow_conditional = allow_conditional
        self.plans: list[BlockPlan] = []
        self.lab_calls = 0
        self.relaxed = 0

    def __call__(self, a: FrequencyVector, x: Vertex, y: Vertex, prop: str = "H") -> HamPath:
        return self.solve(a, x, y, prop)

    def lab(self, a: FrequencyVector, x: Vertex, y: Vertex) -> HamPath:
        self.lab_calls += 1
        res = ham_lab.search_ham_path(a, x, y, timeout=self.timeout, cap=self.cap, cache=self.cache)
        if res.status is ham_lab.SearchStatus.TIMEOUT:
            raise CompositionTimeout(f"search timed out in G({format_partition(a)}) for "
                                   f"{format_vertex(x)} -> {format_vertex(y)}", (a, x, y))
        if res.path is None:
            raise CompositionError(f"G({format_partition(a)}) has no Hamilton path "
                                   f"{format_vertex(x)} -> {format_vertex(y)}", (a, x, y))
        return res.path

    def solve(self, a: FrequencyVector | Sequence[int], x: Sequence[int], y: Sequence[int],
              prop: str = "H") -> HamPath:
        a = as_partition(a)
        x = check_vertex(a, x)
        y = check_vertex(a, y)
        if x == y:
            raise ValueError("endpoints must be distinct")
        how = route(a, prop)
        if how == "negative":
            raise UnsupportedInstance(f"G({format_partition(a)}) has Delta < 0; see the classifier")
        if how == "trivial":
            return ham_lab._rows_to_hampath(a, np.array([x, y], dtype=np.int8))
        if how == "lab-conditional":
            if not self.allow_conditional:
                raise UnsupportedInstance(f"G({format_partition(a)}) has Delta = 0 and a_1 > 4: "
                                          "conjecture-dependent, use the lab")
            how = "lab"
        if how == "lab":
            return self.lab(a, x, y)
        if how == "T1k":
            return compose_T1k(a.k, x, y, oracle=self)
        if how == "Tp":
            return compose_Tp(a, x, y, oracle=self)
        if how == "L12":
            if admissible(a, "L12", x, y):
                return compose_L12(a, x, y, oracle=self)
            raise UnsupportedInstance(f"G({format_partition(a)}) is only served for L12 endpoint pairs")
        if how == "H1":
            return compose_H1(a, x, y, oracle=self)
        if how == "H1p":
            return compose_H1p(a, x, y, oracle=self)
        if how == "H1pp":
            return compose_H1pp(a, x, y, oracle=self)
        if how == "H2p":
            return compose_H2p(a, x, y, oracle=self)
        if how == "H2pp":
            return compose_H2pp(a, x, y, oracle=self)
        return compose_H2(a, x, y, oracle=self)


def _default_oracle(oracle: Oracle | None) -> Oracle:
    return oracle if oracle is not None else Composer()


def realize(plan: BlockPlan, oracle: Oracle, pins: Sequence[Pin] = (),
            checks: Sequence[tuple[int, Callable]] = ()) -> HamPath:
    """Choose junctions, fill every block through the oracle and concatenate."""
    a = plan.a
    solver = ChainSolver(a, plan.segments, plan.x, plan.y, pins, checks)
    if not solver.solve(strict=True):
        log.debug("pinned junction search failed for %s; relaxing pins", plan.describe())
        plan.relaxed = True
        if isinstance(oracle, Composer):
            oracle.relaxed += 1
        if not solver.solve(strict=False):
            raise CompositionError(f"no admissible junction vertices for {plan.describe()}")
    plan.joints = solver.joints
    pieces = []
    for seg in plan.segments:
        if seg.prebuilt:
            pieces.append(seg.rows)
            continue
        ru, rv = seg.view.reduce(seg.start), seg.view.reduce(seg.end)
        sub = oracle(seg.view.reduced, ru, rv, seg.prop)
        rows = seg.view.lift_rows(sub.vertices)
        if tuple(rows[0]) != seg.start or tuple(rows[-1]) != seg.end:
            raise CompositionError(f"block {seg.label} returned a path with wrong endpoints")
        pieces.append(rows)
    for t, p in enumerate(plan.joints):
        if flip_position(tuple(pieces[t][-1]), tuple(pieces[t + 1][0])) != p:
            raise AssertionError(f"joint {t} of {plan.tag} is not a transposition at position {p}")
    rows = np.concatenate(pieces).astype(np.int8)
    path = ham_lab._rows_to_hampath(a, rows)
    report = ham_lab.verify(a, path)
    if not report.ok or path.start != plan.x or path.end != plan.y:
        raise AssertionError(f"composed path for {plan.tag} failed verification: {report.reason}")
    if isinstance(oracle, Composer) and oracle.record:
        oracle.plans.append(plan)
    return path


def _block(a: FrequencyVector, label: str, fixed: dict[int, int]) -> Segment:
    view = view_for(a, fixed)
    return Segment(label, dict(fixed), view, block_property(view.reduced))


def _prebuilt(label: str, fixed: dict[int, int], rows: np.ndarray) -> Segment:
    return Segment(label, dict(fixed), None, "", rows, tuple(int(s) for s in rows[0]), tuple(int(s) for s in rows[-1]))


def _prepare(a, x, y) -> tuple[FrequencyVector, Vertex, Vertex]:
    a = as_partition(a)
    x = check_vertex(a, x)
    y = check_vertex(a, y)
    if x == y:
        raise ValueError("endpoints must be distinct")
    return a, x, y


def _first_diff(x: Vertex, y: Vertex, exclude: Sequence[int] = (), pred=None) -> int | None:
    for i in range(2, len(x) + 1):
        if i in exclude or x[i - 1] == y[i - 1]:
            continue
        if pred is None or pred(i):
            return i
    return None


def _distinct_pair(x: Vertex, exclude: Sequence[int]) -> tuple[int, int]:
    """Smallest i1 < i2 outside ``exclude`` (and position 1) with x[i1] != x[i2]."""
    idx = [i for i in range(2, len(x) + 1) if i not in exclude]
    for i1 in idx:
        for i2 in idx:
            if i2 > i1 and x[i1 - 1] != x[i2 - 1]:
                return i1, i2
    raise CompositionError(f"no two distinct entries of {format_vertex(x)} outside {sorted(exclude)}")


def _transform(x: Vertex, sigma: dict[int, int]) -> Vertex:
    return tuple(sigma.get(s, s) for s in x)


def _run_transformed(a, x, y, sigma: dict[int, int], reverse: bool, build) -> HamPath:
    """Build on sigma-relabeled (and possibly reversed) endpoints and map back."""
    tx, ty = _transform(x, sigma), _transform(y, sigma)
    if reverse:
        tx, ty = ty, tx
    path = build(tx, ty)
    rows = path.vertices
    if sigma:
        inv = {v: k for k, v in sigma.items()}
        table = np.arange(a.k + 1, dtype=np.int8)
        for k_, v_ in inv.items():
            table[k_] = v_
        rows = table[rows]
    if reverse:
        rows = rows[::-1]
    out = ham_lab._rows_to_hampath(a, np.ascontiguousarray(rows))
    if out.start != x or out.end != y:
        raise AssertionError("normalization did not map endpoints back")
    return out


# ------------------------------------------------------- H2 and relatives


def _chain_plan(a, x, y, ih: int, order: Sequence[int], tag: str) -> BlockPlan:
    segs = [_block(a, f"P{j + 1}", {ih: s}) for j, s in enumerate(order)]
    return BlockPlan(tag, a, x, y, segs, {"i^": ih}, pi=tuple(order))


def compose_H2(a, x, y, oracle: Oracle | None = None) -> HamPath:
    """Hamilton path x..y for Delta >= 2 by fixing the symbols at one position in turn."""
    a, x, y = _prepare(a, x, y)
    if delta(a) < 2:
        raise UnsupportedInstance(f"compose_H2 needs Delta >= 2, got {delta(a)} for {format_partition(a)}")
    if a.parts[0] <= 2 and a.parts[1] == 1:
        raise UnsupportedInstance("1^k and (2,1^(k-1)) are handled by their own constructions")
    if (a.k == 3 and a.parts[0] == a.parts[1] >= 3 and a.parts[2] == 2) or \
            (a.k == 4 and a.parts[0] == a.parts[1] >= 3 and a.parts[2:] == (1, 1)):
        raise UnsupportedInstance("(alpha,alpha,2) and (alpha,alpha,1,1) need compose_H2p / compose_H2pp")
    oracle = _default_oracle(oracle)
    ih = _first_diff(x, y)
    i1, i2 = _distinct_pair(x, (ih,))
    i3, i4 = _distinct_pair(y, (ih,))
    middle = sorted(s for s in range(1, a.k + 1) if s not in (x[ih - 1], y[ih - 1]))
    order = [x[ih - 1], *middle, y[ih - 1]]
    plan = _chain_plan(a, x, y, ih, order, "H2")
    plan.positions.update({"i1": i1, "i2": i2, "i3": i3, "i4": i4})
    k = a.k
    pins = [(0, "v", i1, x[i2 - 1]), (k - 1, "u", i3, y[i4 - 1])]
    return realize(plan, oracle, pins)


def compose_T1k(k: int, x, y, oracle: Oracle | None = None) -> HamPath:
    """Hamilton path in G(1^k) between permutations of opposite parity."""
    a = as_partition((1,) * k)
    a, x, y = _prepare(a, x, y)
    if k < 4:
        raise UnsupportedInstance("G(1^k) is Hamilton-laceable only for k >= 4")
    if inversion_parity(x) == inversion_parity(y):
        raise ValueError("endpoints must have opposite inversion parity")
    oracle = _default_oracle(oracle)
    if k == 4:
        return oracle(a, x, y, "L") if not isinstance(oracle, Composer) else oracle.lab(a, x, y)
    ih = _first_diff(x, y)
    middle = sorted(s for s in range(1, k + 1) if s not in (x[ih - 1], y[ih - 1]))
    plan = _chain_plan(a, x, y, ih, [x[ih - 1], *middle, y[ih - 1]], "T1k")
    return realize(plan, oracle)


def compose_Tp(a, x, y, oracle: Oracle | None = None) -> HamPath:
    """Hamilton path in G(2,1^(k-1)), k >= 5, between any two vertices."""
    a, x, y = _prepare(a, x, y)
    k = a.k
    if not (a.parts[0] == 2 and all(p == 1 for p in a.parts[1:]) and k >= 5):
        raise UnsupportedInstance(f"compose_Tp needs (2,1^(k-1)) with k >= 5, got {format_partition(a)}")
    oracle = _default_oracle(oracle)
    ih = _first_diff(x, y)
    xh, yh = x[ih - 1], y[ih - 1]
    i1 = next(i for i in range(2, a.n + 1) if i != ih and x[i - 1] not in (x[0], xh, yh))
    ik = next(i for i in range(2, a.n + 1) if i != ih and y[i - 1] not in (y[0], xh, yh, x[i1 - 1]))
    ends = [xh, x[i1 - 1], y[ik - 1], yh]
    middle = sorted(s for s in range(1, k + 1) if s not in ends)
    order = [xh, x[i1 - 1], *middle, y[ik - 1], yh]
    plan = _chain_plan(a, x, y, ih, order, "T'")
    plan.positions.update({"i1": i1, "ik": ik})
    jh = order.index(1) + 1
    ext = [x[0], *order, y[0]]  # ext[j] = pi_j with pi_0 = x_1 and pi_(k+1) = y_1
    used = {1, ih}
    if jh == 1:
        ij = i1
    elif jh == k:
        ij = ik
    else:
        ij = next(i for i in range(2, a.n + 1) if i not in used)
    plan.positions["i_jhat"] = ij
    seg = jh - 1
    pins = [(seg, "u", ij, ext[jh + 1]), (seg, "v", ij, ext[jh - 1])]
    checks = [(seg, lambda u, v, ij=ij: flip_position(u, v) == ij)]
    return realize(plan, oracle, pins, checks)


def _normalize_pair(a: FrequencyVector, x: Vertex, y: Vertex, targets, swaps: Sequence[dict[int, int]],
                    exclude: Sequence[int] = (), allow_reverse: bool = True):
    """Find a position and a symmetry moving (x_i, y_i) into ``targets``."""
    options = []
    for sigma in swaps:
        options.append((sigma, False))
        if allow_reverse:
            options.append((sigma, True))
    for i in range(2, a.n + 1):
        if i in exclude or x[i - 1] == y[i - 1]:
            continue
        for sigma, rev in options:
            tx, ty = _transform(x, sigma), _transform(y, sigma)
            if rev:
                tx, ty = ty, tx
            if (tx[i - 1], ty[i - 1]) in targets:
                return i, sigma, rev
    raise CompositionError("no position admits the required normalization")


def _describe_transform(sigma: dict[int, int], rev: bool) -> str:
    parts = [f"{s}<->{t}" for s, t in sigma.items() if s < t]
    if rev:
        parts.append("reverse")
    return ",".join(parts) or "identity"


def compose_H2p(a, x, y, oracle: Oracle | None = None) -> HamPath:
    """G(alpha,alpha,2), alpha >= 3, from L12 paths in (alpha,alpha,1) and H paths in (alpha,alpha-1,2)."""
    a, x, y = _prepare(a, x, y)
    if not (a.k == 3 and a.parts[0] == a.parts[1] >= 3 and a.parts[2] == 2):
        raise UnsupportedInstance(f"compose_H2p needs (alpha,alpha,2), got {format_partition(a)}")
    oracle = _default_oracle(oracle)
    ih, sigma, rev = _normalize_pair(a, x, y, {(1, 2), (1, 3)}, [{}, {1: 2, 2: 1}])

    def build(x, y):
        if (x[ih - 1], y[ih - 1]) == (1, 2):
            i1 = next(i for i in range(2, a.n + 1) if i != ih and x[i - 1] != 2)
            i2 = next(i for i in range(2, a.n + 1) if i != ih and x[i - 1] == 2)
            i3 = next(i for i in range(2, a.n + 1) if i != ih and y[i - 1] != 1)
            i4 = next(i for i in range(2, a.n + 1) if i != ih and y[i - 1] == 1)
            plan = _chain_plan(a, x, y, ih, [1, 3, 2], "H2'a")
            plan.positions.update({"i1": i1, "i2": i2, "i3": i3, "i4": i4})
            pins = [(0, "v", i1, 2), (2, "u", i3, 1), (1, "u", i1, 2), (1, "v", i1, 1)]
        else:
            t = y[0]
            p = pq(3, 2, t)[0]
            i1, i2 = _distinct_pair(x, (ih,))
            i3 = next(i for i in range(2, a.n + 1) if i != ih and y[i - 1] == 2)
            plan = _chain_plan(a, x, y, ih, [1, 2, 3], "H2'b")
            plan.positions.update({"i1": i1, "i2": i2, "i3": i3})
            pins = [(0, "v", i1, x[i2 - 1]), (2, "u", i3, p)]
        plan.transform = _describe_transform(sigma, rev)
        return realize(plan, oracle, pins)

    return _run_transformed(a, x, y, sigma, rev, build)


def compose_H2pp(a, x, y, oracle: Oracle | None = None) -> HamPath:
    """G(alpha,alpha,1,1), alpha >= 3."""
    a, x, y = _prepare(a, x, y)
    if not (a.k == 4 and a.parts[0] == a.parts[1] >= 3 and a.parts[2:] == (1, 1)):
        raise UnsupportedInstance(f"compose_H2pp needs (alpha,alpha,1,1), got {format_partition(a)}")
    oracle = _default_oracle(oracle)
    swaps = [{}, {1: 2, 2: 1}, {3: 4, 4: 3}, {1: 2, 2: 1, 3: 4, 4: 3}]
    ih, sigma, rev = _normalize_pair(a, x, y, {(1, 2), (1, 3), (3, 4)}, swaps)
    n = a.n

    def build(x, y):
        pair = (x[ih - 1], y[ih - 1])
        if pair == (1, 2):
            i2 = x.index(4) + 1
            i4 = y.index(3) + 1
            i1 = next(i for i in range(2, n + 1) if i not in (ih, i2))
            i3 = next(i for i in range(2, n + 1) if i not in (ih, i4, i1))
            plan = _chain_plan(a, x, y, ih, [1, 3, 4, 2], "H2''a")
            plan.positions.update({"i1": i1, "i2": i2, "i3": i3, "i4": i4})
            pins = [(0, "v", i1, 4), (3, "u", i3, 3), (1, "u", i1, 4), (1, "v", i1, 1),
                    (2, "u", i3, 2), (2, "v", i3, 3)]
        elif pair == (1, 3):
            t = y[0]
            p = pq(4, 2, t)[0]
            i1 = next(i for i in range(2, n + 1) if i != ih and x[i - 1] != 2)
            i2 = next(i for i in range(2, n + 1) if i != ih and x[i - 1] == 2)
            i3 = next(i for i in range(2, n + 1) if i != ih and y[i - 1] == 2)
            plan = _chain_plan(a, x, y, ih, [1, 4, 2, 3], "H2''b")
            plan.positions.update({"i1": i1, "i2": i2, "i3": i3})
            pins = [(0, "v", i1, 2), (1, "u", i1, 2), (1, "v", i1, 1), (3, "u", i3, p)]
        else:
            t, t2 = y[0], x[0]
            p = pq(3, 2, t)[0]
            p2 = pq(4, 1, t2)[0]
            i1 = next(i for i in range(2, n + 1) if i != ih and x[i - 1] == 1)
            i3 = next(i for i in range(2, n + 1) if i != ih and y[i - 1] == 2)
            plan = _chain_plan(a, x, y, ih, [3, 1, 2, 4], "H2''c")
            plan.positions.update({"i1": i1, "i3": i3})
            pins = [(0, "v", i1, p2), (3, "u", i3, p)]
        plan.transform = _describe_transform(sigma, rev)
        return realize(plan, oracle, pins)

    return _run_transformed(a, x, y, sigma, rev, build)


def compose_L12(a, x, y, oracle: Oracle | None = None) -> HamPath:
    """G(alpha,alpha,1), alpha >= 3, between endpoint pairs of the L12 table."""
    a, x, y = _prepare(a, x, y)
    if not (a.k == 3 and a.parts[0] == a.parts[1] >= 3 and a.parts[2] == 1):
        raise UnsupportedInstance(f"compose_L12 needs (alpha,alpha,1) with alpha >= 3, got {format_partition(a)}")
    oracle = _default_oracle(oracle)
    options = []
    for sigma in ({}, {1: 2, 2: 1}):
        for rev in (False, True):
            tx, ty = _transform(x, sigma), _transform(y, sigma)
            if rev:
                tx, ty = ty, tx
            if tx[0] == 1 and l12_positions(tx, ty):
                options.append((sigma, rev, l12_positions(tx, ty)[0]))
    if not options:
        checked = list(range(2, a.n + 1))
        raise ValueError(f"no position in {checked} gives an L12 endpoint combination for "
                         f"{format_vertex(x)}, {format_vertex(y)}")
    sigma, rev, ih = options[0]

    def build(x, y):
        t = y[0]
        if t in (1, 3):
            plan = _chain_plan(a, x, y, ih, [3, 2, 1], "L12a")
        else:
            plan = _chain_plan(a, x, y, ih, [2, 3, 1], "L12b")
        plan.transform = _describe_transform(sigma, rev)
        return realize(plan, oracle)

    return _run_transformed(a, x, y, sigma, rev, build)


# ------------------------------------------------------------ H1 family


def _h1_indices(a: FrequencyVector, x: Vertex, y: Vertex) -> int:
    for i in range(2, a.n + 1):
        if x[i - 1] == 1 and y[i - 1] != 1:
            return i
    for i in range(2, a.n + 1):
        if x[i - 1] == 1 and y[i - 1] == 1:
            return i
    raise CompositionError("no position holds symbol 1 in both endpoints")


def _h1_case(k: int, y: Vertex, ic: int) -> str:
    if y[ic - 1] == 1:
        return "oa" if k % 2 else "ea"
    if k % 2:
        return "ob1" if y[0] == 1 else "ob2"
    return "eb1" if y[0] == 1 else "eb2"


def _h1_sequence(case: str, k: int) -> list[tuple[str, int]]:
    """Block labels in concatenation order; Q1 and Q2 are the two halves of Q."""
    ell = (k - 1) // 2 if k % 2 else k // 2
    seq: list[tuple[str, int]] = []
    triple = lambda j: [("P", j), ("Ph", j), ("Pc", j)]  # noqa: E731
    if case == "oa":
        for j in range(1, ell + 1):
            seq += triple(j)
        seq += [("P", j) for j in range(ell + 1, k + 1)]
    elif case == "ob1":
        for j in range(1, ell):
            seq += triple(j)
        seq += [("P", j) for j in range(ell, k + 1)]
        seq += [("Ph", ell), ("Pc", ell)]
    elif case == "ob2":
        seq += [("P", 1), ("Q1", 0), ("Pc", 1)]
        for j in range(2, ell + 1):
            seq += triple(j)
        seq += [("P", j) for j in range(ell + 1, k + 1)]
        seq += [("Q2", 0)]
    elif case == "eb2":
        for j in range(1, ell):
            seq += triple(j)
        seq += [("P", j) for j in range(ell, k + 1)]
        seq += [("Ph", ell)]
    elif case == "eb1":
        seq += [("P", 1), ("Q1", 0), ("Pc", 1)]
        for j in range(2, ell):
            seq += triple(j)
        seq += [("P", j) for j in range(ell, k + 1)]
        seq += [("Q2", 0), ("Pc", ell)]
    elif case == "ea":
        seq += [("P", 1), ("Q1", 0), ("Pc", 1)]
        for j in range(2, ell):
            seq += triple(j)
        seq += [("P", j) for j in range(ell, k)]
        seq += [("Q2", 0), ("Pc", ell), ("P", k)]
    elif case == "ea2":
        seq = [("P", 1), ("Ph", 1), ("Q1", 0), ("P", 2), ("Ph", 2), ("Q2", 0), ("P", 3), ("P", 4)]
    else:
        raise ValueError(case)
    return seq


def _h1_fixed(case: str, kind: str, j: int, k: int, ic: int, ih: int, pi, rho) -> dict[int, int]:
    if kind == "P":
        return {ic: 1, ih: rho[j - 1]}
    if kind == "Ph":
        return {ic: pi[2 * j - 1]}
    ell = k // 2
    if kind == "Pc" and case in ("eb1", "ea") and j == ell:
        return {ic: pi[k - 1]}
    return {ic: pi[2 * j]}


@dataclass
class _H1Setup:
    case: str
    ic: int
    ih: int
    pi: tuple[int, ...]
    rho: tuple[int, ...]
    positions: dict[str, int]
    pins: list  # pins keyed by block label: (label, side, pos, sym)
    tag: str
    z_pins: Callable | None = None  # callable(z) -> extra label pins once Q is known


def _h1_standard_setup(a: FrequencyVector, x: Vertex, y: Vertex, ic: int, case: str) -> _H1Setup:
    """Positions, permutations and pins of the general construction."""
    k = a.k
    n = a.n
    positions = {"i^": 0, "iv": ic}
    pins: list = []
    if case in ("oa", "ea"):
        ih = _first_diff(x, y, (ic,), lambda i: x[i - 1] > 1 and y[i - 1] > 1)
        if ih is None:
            ih = _first_diff(x, y, (ic,))
        i1, i2 = _distinct_pair(x, (ih, ic))
        i3, i4 = _distinct_pair(y, (ih, ic))
        positions.update({"i1": i1, "i2": i2, "i3": i3, "i4": i4})
        pi, rho = matching_perms(k, case, a=x[ih - 1], b=y[ih - 1])
        if case == "oa":
            pins = [(("P", 1), "v", i1, x[i2 - 1]), (("P", k), "u", i3, y[i4 - 1])]
        else:
            pins = [(("P", k), "u", i3, y[i4 - 1])]
    else:
        ih = next(i for i in range(2, n + 1) if i != ic and x[i - 1] == 1)
        i1, i2 = _distinct_pair(x, (ih, ic))
        positions.update({"i1": i1, "i2": i2})
        pi, rho = matching_perms(k, case, c=y[ic - 1])
        if case in ("ob1", "eb2"):
            pins = [(("P", 1), "v", i1, x[i2 - 1])]
    positions["i^"] = ih
    return _H1Setup(case, ic, ih, pi, rho, positions, pins, case)


def _h1_realize(a: FrequencyVector, x: Vertex, y: Vertex, st: _H1Setup, oracle: Oracle) -> HamPath:
    k = a.k
    case = st.case
    ic, ih, pi, rho = st.ic, st.ih, st.pi, st.rho
    seq = _h1_sequence(case, k)
    labels = [(kind, j) for kind, j in seq]

    def pins_for(extra=()):
        out = []
        for label, side, pos, sym in list(st.pins) + list(extra):
            out.append((labels.index(label), side, pos, sym))
        return out

    def make_plan(segments, z=None, zp=None):
        plan = BlockPlan(st.tag, a, x, y, segments, dict(st.positions), pi, rho, z=z, z_prime=zp)
        return plan

    if case in ("oa", "ob1", "eb2"):
        segs = [_block(a, f"{kind}{j}", _h1_fixed(case, kind, j, k, ic, ih, pi, rho)) for kind, j in seq]
        return realize(make_plan(segs), oracle, pins_for())

    # the cases that split one Delta-zero path Q at z
    if case == "ea2":
        q_fixed = {ic: pi[2]}
        q_start_pins = {1: 1, ih: rho[1]}
        q_end = None
        q_end_pins = {1: pi[3]}
        target = pi[1]
        backward = True
    else:
        q_fixed = {ic: pi[1]}
        q_start_pins = {1: 1, st.positions["i1"]: x[st.positions["i2"] - 1], ih: rho[0]}
        if case == "ob2":
            q_end = y
            q_end_pins = {}
        else:
            q_end = None
            q_end_pins = {1: pi[k - 1]}
        target = pi[2]
        backward = False
    q_view = view_for(a, q_fixed)
    q_prop = block_property(q_view.reduced)

    def vertex_options(pins: dict[int, int]) -> Iterator[Vertex]:
        partial = {p - 1: s for p, s in {**q_fixed, **pins}.items()}
        yield from _lex_completions(a.n, list(a.parts), partial)

    # the pin at i1 only serves to keep v^1 away from x; when the Q block has
    # no copy of that symbol left, unpinned starts are tried instead
    loose = {p: s for p, s in q_start_pins.items() if p in (1, ih)}
    starts = []
    for qs in itertools.chain(itertools.islice(vertex_options(q_start_pins), 64),
                              itertools.islice(vertex_options(loose), 64)):
        if qs not in starts and (backward or _swap(qs, ic) != x):
            starts.append(qs)
    ends = [q_end] if q_end is not None else list(itertools.islice(vertex_options(q_end_pins), 64))
    last_error: Exception | None = None
    for qs, qe in itertools.product(starts, ends):
        if not admissible(q_view.reduced, q_prop, q_view.reduce(qs), q_view.reduce(qe)):
            continue
        sub = oracle(q_view.reduced, q_view.reduce(qs), q_view.reduce(qe), q_prop)
        qrows = q_view.lift_rows(sub.vertices)
        hit = np.nonzero(qrows[:, ih - 1] == target)[0]
        if len(hit) == 0 or hit[0] == 0:
            raise CompositionError("the split vertex z does not exist on Q")
        iz = int(hit[0])
        z = tuple(int(s) for s in qrows[iz])
        zp = tuple(int(s) for s in qrows[iz - 1])
        # consequence of alternation in Delta-zero graphs
        assert zp[0] == target and zp[ih - 1] == 1 and z[0] == 1, "split vertex violates z'_i = z_1 = 1"
        if backward:
            q1, q2 = qrows[:iz][::-1], qrows[iz:][::-1]
        else:
            q1, q2 = qrows[:iz], qrows[iz:]
        segs = []
        for kind, j in seq:
            if kind == "Q1":
                segs.append(_prebuilt("Q'", q_fixed, np.ascontiguousarray(q1)))
            elif kind == "Q2":
                segs.append(_prebuilt("Q''", q_fixed, np.ascontiguousarray(q2)))
            else:
                segs.append(_block(a, f"{kind}{j}", _h1_fixed(case, kind, j, k, ic, ih, pi, rho)))
        extra = st.z_pins(z) if st.z_pins is not None else []
        plan = make_plan(segs, z, zp)
        try:
            return realize(plan, oracle, pins_for(extra))
        except CompositionTimeout:
            raise
        except CompositionError as exc:
            last_error = exc
            continue
    raise CompositionError(f"no choice of Q endpoints completes case {case}: {last_error}")


def compose_H1(a, x, y, oracle: Oracle | None = None) -> HamPath:
    """Delta = 1 with a unique largest part, from L1 paths and H paths two levels down."""
    a, x, y = _prepare(a, x, y)
    parts = a.parts
    if delta(a) != 1:
        raise UnsupportedInstance(f"compose_H1 needs Delta = 1, got {delta(a)}")
    if parts in ((1, 1, 1), (2, 1, 1, 1), (2, 2, 1), (3, 1, 1, 1, 1)) or parts[0] < 3:
        raise UnsupportedInstance(f"{format_partition(a)} is a base case")
    if a.k == 3 and parts[0] == parts[1]:
        raise UnsupportedInstance("(alpha,alpha,1) is covered by compose_L12")
    alpha = parts[0]
    if alpha >= 4 and ((a.k == 3 and parts[1:] == (alpha - 1, 2)) or (a.k == 4 and parts[1:] == (alpha - 1, 1, 1))):
        raise UnsupportedInstance("(alpha,alpha-1,2) and (alpha,alpha-1,1,1) need compose_H1p / compose_H1pp")
    oracle = _default_oracle(oracle)
    ic = _h1_indices(a, x, y)
    case = _h1_case(a.k, y, ic)
    st = _h1_standard_setup(a, x, y, ic, case)
    return _h1_realize(a, x, y, st, oracle)


def _h1_oriented(a: FrequencyVector, x: Vertex, y: Vertex):
    """Pick the orientation and the positions i-check, i-hat used by compose_H1p and compose_H1pp.

    When x and y both hold 1 at i-check, i-hat must carry symbols > 1 in
    both; if no such position exists the pair is processed reversed.
    """
    for rev in (False, True):
        sx, sy = (y, x) if rev else (x, y)
        ic = _h1_indices(a, sx, sy)
        if sy[ic - 1] == 1:
            ih = _first_diff(sx, sy, (ic,), lambda i: sx[i - 1] > 1 and sy[i - 1] > 1)
            if ih is None:
                continue
        return rev, ic
    raise CompositionError("no orientation admits the position choices")


def compose_H1p(a, x, y, oracle: Oracle | None = None) -> HamPath:
    """G(alpha,alpha-1,2), alpha >= 3."""
    a, x, y = _prepare(a, x, y)
    parts = a.parts
    if not (a.k == 3 and parts[0] >= 3 and parts[1:] == (parts[0] - 1, 2)):
        raise UnsupportedInstance(f"compose_H1p needs (alpha,alpha-1,2), got {format_partition(a)}")
    oracle = _default_oracle(oracle)
    n = a.n
    rev0, ic = _h1_oriented(a, x, y)

    def build(x, y):
        case = _h1_case(3, y, ic)
        if case == "oa":
            ih = _first_diff(x, y, (ic,), lambda i: x[i - 1] > 1 and y[i - 1] > 1)
            if (x[ih - 1], y[ih - 1]) == (3, 2):
                return _run_transformed(a, x, y, {}, True, lambda x2, y2: oa_build(x2, y2, ih))
            return oa_build(x, y, ih)
        ih = next(i for i in range(2, n + 1) if i != ic and x[i - 1] == 1)
        i1, i2 = _distinct_pair(x, (ih, ic))
        free = [i for i in range(2, n + 1) if i not in (ic, ih)]
        if case == "ob1":
            pi2 = 5 - y[ic - 1]  # the remaining symbol of {2, 3}
            pi = (1, pi2, y[ic - 1])
            rho = (1, 2, 3)
            it = next(i for i in free if i != i1)
            pins = [(("P", 1), "v", i1, x[i2 - 1]), (("P", 3), "u", it, 3), (("P", 3), "v", it, 2)]
            st = _H1Setup("ob1", ic, ih, pi, rho, {"iv": ic, "i^": ih, "i1": i1, "i2": i2, "i~": it}, pins, "H1'ob1")
            return _h1_realize(a, x, y, st, oracle)
        pi = (1, y[ic - 1], 5 - y[ic - 1])
        rho = pi
        pins = []
        st = _H1Setup("ob2", ic, ih, pi, rho, {"iv": ic, "i^": ih, "i1": i1, "i2": i2}, pins, "H1'ob2")
        if pi[1] == 3:
            it = free[0] if free[0] != i1 else free[1]
            st.positions["i~"] = it
            st.pins = [(("P", 2), "u", it, 3), (("P", 2), "v", it, 2)]
        else:
            def z_pins(z):
                cands = [i for i in free if z[i - 1] == 2]
                if not cands:
                    return []
                st.positions["i~"] = cands[0]
                return [(("P", 3), "u", cands[0], 3)]
            st.z_pins = z_pins
        return _h1_realize(a, x, y, st, oracle)

    def oa_build(x, y, ih):
        i1, i2 = _distinct_pair(x, (ih, ic))
        t = y[0]
        p = pq(3, 1, t)[0]
        i3 = next(i for i in range(2, n + 1) if i not in (ic, ih) and y[i - 1] == 1)
        pi, rho = (1, 2, 3), (2, 1, 3)
        pins = [(("P", 1), "v", i1, x[i2 - 1]), (("P", 3), "u", i3, p)]
        st = _H1Setup("oa", ic, ih, pi, rho, {"iv": ic, "i^": ih, "i1": i1, "i2": i2, "i3": i3}, pins, "H1'oa")
        return _h1_realize(a, x, y, st, oracle)

    return _run_transformed(a, x, y, {}, rev0, build)


def compose_H1pp(a, x, y, oracle: Oracle | None = None) -> HamPath:
    """G(alpha,alpha-1,1,1), alpha >= 3."""
    a, x, y = _prepare(a, x, y)
    parts = a.parts
    if not (a.k == 4 and parts[0] >= 3 and parts[1:] == (parts[0] - 1, 1, 1)):
        raise UnsupportedInstance(f"compose_H1pp needs (alpha,alpha-1,1,1), got {format_partition(a)}")
    oracle = _default_oracle(oracle)
    n = a.n
    rev0, ic = _h1_oriented(a, x, y)

    def build(x, y):
        case = _h1_case(4, y, ic)
        if case in ("eb1", "eb2"):
            ih = next(i for i in range(2, n + 1) if i != ic and x[i - 1] == 1)
            i1, i2 = _distinct_pair(x, (ih, ic))
            free = [i for i in range(2, n + 1) if i not in (ic, ih)]
            yc = y[ic - 1]
            pos = {"iv": ic, "i^": ih, "i1": i1, "i2": i2}
            if case == "eb2":
                if yc == 2:
                    pi, rho = (1, 3, 4, 2), (1, 2, 3, 4)
                else:
                    pi, rho = (1, 7 - yc, 2, yc), (1, 3, 4, 2)
                j = 2 if rho[1] == 3 else 3
                it = next(i for i in free if i != i1)
                pos["i~"] = it
                pins = [(("P", 1), "v", i1, x[i2 - 1]),
                        (("P", j), "u", it, 4), (("P", j), "v", it, 2),
                        (("P", j + 1), "u", it, 2), (("P", j + 1), "v", it, 3)]
                st = _H1Setup("eb2", ic, ih, pi, rho, pos, pins, "H1''eb2")
                return _h1_realize(a, x, y, st, oracle)
            if yc == 2:
                pi, rho = (1, 3, 4, 2), (1, 3, 2, 4)
            else:
                pi, rho = (1, 2, 7 - yc, yc), (1, yc, 2, 7 - yc)
            st = _H1Setup("eb1", ic, ih, pi, rho, pos, [], "H1''eb1")

            def z_pins(z):
                cands = [i for i in free if z[i - 1] == pi[3]]
                if not cands:
                    return []
                st.positions["i~"] = cands[0]
                it = cands[0]
                return [(("P", 2), "u", it, 2), (("P", 2), "v", it, pi[2]), (("P", 4), "u", it, pi[1])]
            st.z_pins = z_pins
            return _h1_realize(a, x, y, st, oracle)
        ih, sigma, rev = _normalize_pair(a, x, y, {(2, 3), (3, 4)}, [{}, {3: 4, 4: 3}], exclude=(ic,))
        return _run_transformed(a, x, y, sigma, rev, lambda x2, y2: ea_build(x2, y2, ih))

    def ea_build(x, y, ih):
        free = [i for i in range(2, n + 1) if i not in (ic, ih)]
        if (x[ih - 1], y[ih - 1]) == (2, 3):
            pi, rho = (1, 3, 4, 2), (2, 1, 4, 3)
            t = y[0]
            p = pq(4, 2, t)[0]
            i1, i2 = _distinct_pair(x, (ih, ic))
            i3 = next(i for i in free if y[i - 1] == 2)
            pos = {"iv": ic, "i^": ih, "i1": i1, "i2": i2, "i3": i3}
            st = _H1Setup("ea", ic, ih, pi, rho, pos, [(("P", 4), "u", i3, p)], "H1''ea1")

            def z_pins(z):
                cands = [i for i in free if z[i - 1] == 1 and i != i3]
                if not cands:
                    return []
                st.positions["i~"] = cands[0]
                return [(("P", 3), "u", cands[0], 3)]
            st.z_pins = z_pins
            return _h1_realize(a, x, y, st, oracle)
        pi, rho = (1, 2, 3, 4), (3, 1, 2, 4)
        t, t2 = y[0], x[0]
        p = pq(3, 2, t)[0]
        p2 = pq(4, 2, t2)[0]
        i1 = next(i for i in free if x[i - 1] == 2)
        i3 = next(i for i in free if y[i - 1] == 2)
        pos = {"iv": ic, "i^": ih, "i1": i1, "i3": i3}
        pins = [(("P", 1), "v", i1, p2), (("P", 4), "u", i3, p)]
        st = _H1Setup("ea2", ic, ih, pi, rho, pos, pins, "H1''ea2")
        return _h1_realize(a, x, y, st, oracle)

    return _run_transformed(a, x, y, {}, rev0, build)


# ------------------------------------------------------------ dispatcher


def gray_code(a: FrequencyVector | Sequence[int] | str, x: Sequence[int] | None = None,
              y: Sequence[int] | None = None, mode: str = "path", *, composer: Composer | None = None,
              allow_conditional: bool = False) -> HamPath:
    """A Hamilton path (x..y) or Hamilton cycle in G(a), built recursively.

    Without endpoints a path starts at the lexicographically first vertex and
    ends at its neighbor across the smallest flip position, so closing it
    gives the cycle.
    """
    a = as_partition(a)
    if delta(a) < 0:
        raise UnsupportedInstance(f"G({format_partition(a)}) has Delta < 0: "
                                  f"{'no Hamilton cycle' if a.parts == (2, 1) else 'no Hamilton cycle or path'}")
    if mode not in ("path", "cycle"):
        raise ValueError(f"unknown mode {mode!r}")
    if is_conditional(a) and not allow_conditional:
        raise UnsupportedInstance(f"G({format_partition(a)}) has a_1 > 4: the construction is conditional on "
                                  "unverified Delta-zero cases; pass allow_conditional")
    composer = composer or Composer(allow_conditional=allow_conditional)
    if is_conditional(a):
        log.warning("G(%s): conditional construction", format_partition(a))
    if mode == "cycle":
        if x is not None or y is not None:
            raise ValueError("a cycle takes no endpoints")
        s = first_vertex(a)
        t = star_neighbors(s)[0]
        if a.parts == (1, 1):
            return ham_lab.search_ham_cycle(a).path
        path = composer.solve(a, s, t, "H")
        cyc = ham_lab._rows_to_hampath(a, path.vertices, "cycle")
        report = ham_lab.verify(a, cyc)
        if not report.ok:
            raise AssertionError(f"closed cycle failed verification: {report.reason}")
        return cyc
    if x is None:
        x = first_vertex(a)
    if y is None:
        y = star_neighbors(tuple(x))[0]
    return composer.solve(a, tuple(x), tuple(y), "H")


def warmup_partitions(max_a1: int) -> list[FrequencyVector]:
    """Delta-zero partitions with 2 <= a_1 <= max_a1, where the recursion bottoms out."""
    out = []
    for a1 in range(2, max_a1 + 1):
        out.extend(b for b in partitions_of(2 * a1, a1) if b.parts[0] == a1)
    return out


def warmup(max_a1: int, cache: ham_lab.CertificateCache | None = None, timeout: float | None = 600.0,
           progress: Callable[[str], None] | None = None) -> list[ham_lab.PropertyReport]:
    """Search every endpoint family of the Delta-zero base cases into the cache.

    Each base case is checked for the property the composer asks of it, so
    later compositions find their base paths cached.
    """
    cache = cache if cache is not None else ham_lab.get_cache()
    reports = []
    for b in warmup_partitions(max_a1):
        if b.parts == (2, 2):
            continue
        prop = block_property(b)
        rep = ham_lab.check_property(b, prop, stop_at_failure=False, timeout=timeout, cap=None, cache=cache)
        reports.append(rep)
        if progress is not None:
            progress(rep.summary())
    return reports
