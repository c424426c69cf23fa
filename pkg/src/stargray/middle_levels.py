"""Cycle factors and gluing in the Delta-zero graphs G_n(a).

Vertices are the strings of length 2n-1 over {0,..,k} obtained by dropping
the first entry of a multiset permutation with n zeros and a_i copies of
symbol i. Two such strings are adjacent when they differ in exactly one
position, which is a star transposition of the full strings. For a=(n) these
are the middle levels of the (2n-1)-cube.

A cycle factor comes from the maps f and g; rotating a string until a Dyck
word appears gives a rooted tree whose rotation class indexes the factor
cycle. Gluing cycles merge factor cycles by symmetric difference.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .certificate import HamPath
from .partition_core import FrequencyVector, as_partition, multinomial

log = logging.getLogger(__name__)

Word = tuple[int, ...]
Edge = frozenset

__all__ = [
    "CycleFactor",
    "GluingTuple",
    "MiddleLevelsError",
    "alternating_path",
    "automorphism_h",
    "build_factor",
    "canonical_class",
    "check_alternating",
    "count_plane_classes",
    "cycle_M_prime",
    "dyck_words",
    "factor_hamilton_cycle",
    "f",
    "g",
    "gluing_cycle",
    "gluing_pairs",
    "hamming",
    "hat",
    "is_dyck",
    "laceable_path",
    "map_pair",
    "plane_classes",
    "potential",
    "rho",
    "shift_and_tree",
    "short_strings",
    "sigma",
    "spanning_gluing_set",
    "star",
    "suppressed",
    "to_full",
]


class MiddleLevelsError(ValueError):
    pass


def _parts(a: FrequencyVector | Sequence[int] | int) -> tuple[int, ...]:
    if isinstance(a, int):
        return (a,)
    return as_partition(a).parts


# ------------------------------------------------------------ basics


def hat(x: Sequence[int]) -> Word:
    """Replace every non-zero symbol by 1."""
    return tuple(1 if s else 0 for s in x)


def suppressed(x: Sequence[int], a: Sequence[int] | None = None) -> int:
    """The symbol dropped from x; without ``a`` the all-ones labels are assumed."""
    m = len(x)
    if m % 2 == 0:
        raise MiddleLevelsError(f"short strings have odd length, got {m}")
    key = a if a is None or type(a) is tuple else _parts(a)
    want = _wanted_counts((m + 1) // 2, key)
    x = tuple(x)
    missing = -1
    total = 0
    for s, c in want:
        have = x.count(s)
        total += have
        if have == c - 1 and missing < 0:
            missing = s
        elif have != c:
            missing = -2
            break
    if missing < 0 or total != m:
        raise MiddleLevelsError(f"{x} is not a shortened string for a={want}")
    return missing


@lru_cache(maxsize=None)
def _wanted_counts(n: int, a: tuple[int, ...] | None) -> tuple[tuple[int, int], ...]:
    parts = (n,) if a is None else _parts(a)
    if sum(parts) != n:
        raise MiddleLevelsError(f"partition {parts} does not sum to n={n}")
    return ((0, n),) + tuple((i, c) for i, c in enumerate(parts, start=1))


def sigma(x: Sequence[int], ell: int) -> Word:
    """Cyclic left rotation by ell steps (right rotation for negative ell)."""
    m = len(x)
    ell %= m
    return tuple(x[ell:]) + tuple(x[:ell])


def hamming(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(1 for s, t in zip(x, y) if s != t)


def is_dyck(w: Sequence[int]) -> bool:
    """Balanced with every prefix holding at least as many 1s as 0s (on hat(w))."""
    h = 0
    for s in w:
        h += 1 if s else -1
        if h < 0:
            return False
    return h == 0


def _match_first(w: Sequence[int]) -> int:
    """Index of the 0 matching the leading 1 of a hat-Dyck word."""
    h = 0
    for i, s in enumerate(w):
        h += 1 if s else -1
        if h == 0:
            return i
    raise MiddleLevelsError("not a Dyck word")


def _match_last(w: Sequence[int]) -> int:
    """Index of the 1 matching the trailing 0 of a hat-Dyck word."""
    h = 0
    for i in range(len(w) - 1, -1, -1):
        h += -1 if w[i] else 1
        if h == 0:
            return i
    raise MiddleLevelsError("not a Dyck word")


def shift_and_tree(x: Sequence[int]) -> tuple[int, Word]:
    """The shift l(x) and the tree word t(x).

    With n-1 non-zero entries the first 2n-2 entries of the rotation are a
    Dyck word; with n of them the last 2n-2 are.
    """
    x = tuple(x)
    m = len(x)
    ones = sum(hat(x))
    n = (m + 1) // 2
    if ones == n - 1:
        for ell in range(m):
            r = sigma(x, ell)
            if is_dyck(r[:-1]):
                return ell, r[:-1]
    elif ones == n:
        for ell in range(m):
            r = sigma(x, ell)
            if is_dyck(r[1:]):
                return ell, r[1:]
    raise MiddleLevelsError(f"{x} has no Dyck rotation")


@lru_cache(maxsize=None)
def _changed_position(x: Word) -> tuple[int, int, int]:
    """Positions (in x) changed by f and by g, plus the shift."""
    m = len(x)
    n = (m + 1) // 2
    ell, t = shift_and_tree(x)
    if sum(hat(x)) == n - 1:
        # rotation is 1 u 0 v 0: f sets the 0 after u, g sets the last bit
        pf = _match_first(t)
        pg = m - 1
    else:
        # rotation is 1 u 1 v 0: f clears the first bit, g clears the 1 after u
        pf = 0
        pg = 1 + _match_last(t)
    return (pf + ell) % m, (pg + ell) % m, ell


def _replace(x: Word, pos: int, a) -> Word:
    s = suppressed(x, a)
    y = list(x)
    y[pos] = s
    return tuple(y)


def f(x: Sequence[int], a: Sequence[int] | None = None) -> Word:
    """Successor on the factor cycle through x."""
    x = tuple(x)
    pf, _, _ = _changed_position(hat(x))
    return _replace(x, pf, a)


def g(x: Sequence[int], a: Sequence[int] | None = None) -> Word:
    """Predecessor on the factor cycle; the inverse of f."""
    x = tuple(x)
    _, pg, _ = _changed_position(hat(x))
    return _replace(x, pg, a)


def rho(x: Sequence[int], a: Sequence[int] | None = None) -> Word:
    """Tree rotation of a (labeled) tree word: b u 0 v -> u s v 0 with s the root label."""
    x = tuple(x)
    if not is_dyck(x):
        raise MiddleLevelsError(f"{x} is not a tree word")
    if not x:
        return x
    j = _match_first(x)
    root = suppressed(x + (0,), a)
    u, v = x[1:j], x[j + 1:]
    return u + (root,) + v + (0,)


def star(n: int) -> Word:
    """The star on n vertices rooted at its center, (10)^(n-1)."""
    return (1, 0) * (n - 1)


def dyck_words(n: int) -> list[Word]:
    """All Dyck words of length 2n-2 in lexicographic order."""
    out: list[Word] = []

    def rec(prefix: list[int], ones: int, zeros: int) -> None:
        if ones == zeros == n - 1:
            out.append(tuple(prefix))
            return
        if zeros < ones:
            prefix.append(0)
            rec(prefix, ones, zeros + 1)
            prefix.pop()
        if ones < n - 1:
            prefix.append(1)
            rec(prefix, ones + 1, zeros)
            prefix.pop()

    rec([], 0, 0)
    return out


def labeled_tree_words(n: int, a: Sequence[int] | int) -> list[Word]:
    """D_n(a): Dyck skeletons labeled so that one label is left for the root."""
    parts = _parts(a)
    out = []
    for w in dyck_words(n):
        ones = [i for i, s in enumerate(w) if s]
        for root in range(1, len(parts) + 1):
            counts = list(parts)
            counts[root - 1] -= 1
            if counts[root - 1] < 0:
                continue
            labels = [s for s, c in enumerate(counts, start=1) for _ in range(c)]
            for perm in sorted(set(itertools.permutations(labels))):
                word = list(w)
                for i, s in zip(ones, perm):
                    word[i] = s
                out.append(tuple(word))
    return sorted(set(out))


def canonical_class(x: Sequence[int], a: Sequence[int] | None = None) -> Word:
    """Smallest member of the rotation orbit of a tree word."""
    x = tuple(x)
    best = x
    cur = rho(x, a)
    while cur != x:
        best = min(best, cur)
        cur = rho(cur, a)
    return best


def plane_classes(n: int, a: Sequence[int] | int | None = None) -> list[Word]:
    """Canonical representatives of all (labeled) plane trees on n vertices."""
    words = dyck_words(n) if a is None else labeled_tree_words(n, a)
    aa = None if a is None else _parts(a)
    return sorted({canonical_class(w, aa) for w in words})


def count_plane_classes(n: int, a: Sequence[int] | int | None = None) -> int:
    return len(plane_classes(n, a))


def _tree_adjacency(w: Sequence[int]) -> list[list[int]]:
    adj: list[list[int]] = [[]]
    stack = [0]
    for s in w:
        if s:
            adj.append([])
            v = len(adj) - 1
            adj[stack[-1]].append(v)
            adj[v].append(stack[-1])
            stack.append(v)
        else:
            stack.pop()
    return adj


def potential(w: Sequence[int]) -> int:
    """Smallest total distance from one vertex of the tree to all others."""
    adj = _tree_adjacency(hat(w))
    best = None
    for s in range(len(adj)):
        dist = [-1] * len(adj)
        dist[s] = 0
        queue = [s]
        for u in queue:
            for v in adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        total = sum(dist)
        best = total if best is None else min(best, total)
    return best


# ------------------------------------------------------------ factor


def short_strings(n: int, a: Sequence[int] | int | None = None) -> list[Word]:
    """All vertices of G_n(a), sorted."""
    parts = (n,) if a is None else _parts(a)
    if sum(parts) != n:
        raise MiddleLevelsError(f"partition {parts} does not sum to n={n}")
    full = [0] * n + [s for s, c in enumerate(parts, start=1) for _ in range(c)]
    out = set()
    for drop in set(full):
        rest = list(full)
        rest.remove(drop)
        out.update(_multiset_perms(rest))
    return sorted(out)


def _multiset_perms(items: list[int]) -> Iterator[Word]:
    x = sorted(items)
    while True:
        yield tuple(x)
        i = len(x) - 2
        while i >= 0 and x[i] >= x[i + 1]:
            i -= 1
        if i < 0:
            return
        j = len(x) - 1
        while x[j] <= x[i]:
            j -= 1
        x[i], x[j] = x[j], x[i]
        x[i + 1:] = reversed(x[i + 1:])


@dataclass
class CycleFactor:
    """The f-cycles of G_n(a) with a vertex-to-cycle index."""

    n: int
    a: tuple[int, ...]
    cycles: list[list[Word]]
    cycle_of: dict[Word, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.cycles)

    @property
    def num_vertices(self) -> int:
        return len(self.cycle_of)

    def succ(self, x: Sequence[int]) -> Word:
        return f(x, self.a)

    def pred(self, x: Sequence[int]) -> Word:
        return g(x, self.a)

    def edges(self) -> set[Edge]:
        out = set()
        for cyc in self.cycles:
            for i, v in enumerate(cyc):
                out.add(frozenset((v, cyc[(i + 1) % len(cyc)])))
        return out

    def is_factor_edge(self, u: Sequence[int], v: Sequence[int]) -> bool:
        u, v = tuple(u), tuple(v)
        return f(u, self.a) == v or g(u, self.a) == v

    def summary(self) -> dict:
        lengths = Counter(len(c) for c in self.cycles)
        reps = []
        for cyc in self.cycles:
            m = len(cyc[0])
            trees = [shift_and_tree(x)[1] for x in cyc if sum(hat(x)) == (m + 1) // 2 - 1]
            rep = canonical_class(trees[0], self.a)
            reps.append({"tree": "".join(map(str, rep)), "length": len(cyc), "potential": potential(rep)})
        return {
            "n": self.n,
            "a": list(self.a),
            "vertices": self.num_vertices,
            "cycles": len(self.cycles),
            "cycle_lengths": {str(k): v for k, v in sorted(lengths.items())},
            "classes": sorted(reps, key=lambda r: r["tree"]),
        }


def build_factor(n: int, a: Sequence[int] | int | None = None, cap: int | None = 2_000_000) -> CycleFactor:
    """Split the vertices of G_n(a) into the cycles generated by f."""
    parts = (n,) if a is None else _parts(a)
    total = multinomial([n, *parts])
    if cap is not None and total > cap:
        from .flip_graph import CapExceeded

        raise CapExceeded(f"{total} vertices exceed cap {cap}")
    cycle_of: dict[Word, int] = {}
    cycles: list[list[Word]] = []
    for x in short_strings(n, parts):
        if x in cycle_of:
            continue
        cyc = [x]
        cycle_of[x] = len(cycles)
        cur = f(x, parts)
        while cur != x:
            if cur in cycle_of:
                raise MiddleLevelsError("f is not a permutation")
            cycle_of[cur] = len(cycles)
            cyc.append(cur)
            cur = f(cur, parts)
        cycles.append(cyc)
    return CycleFactor(n, parts, cycles, cycle_of)


@dataclass
class FactorLaws:
    """Outcome of checking the cycle factor of G_n(a) against its laws."""

    n: int
    a: tuple[int, ...]
    vertices: int
    inverse: bool
    rotation: bool
    shift: bool
    cycles: int
    classes: int
    failure: str = ""

    @property
    def ok(self) -> bool:
        return self.inverse and self.rotation and self.shift and self.cycles == self.classes

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "a": list(self.a),
            "vertices": self.vertices,
            "g_after_f_is_identity": self.inverse,
            "tree_rotates": self.rotation,
            "shift_increments": self.shift,
            "cycles": self.cycles,
            "plane_classes": self.classes,
            "ok": self.ok,
            "failure": self.failure,
        }


def check_factor_laws(n: int, a: Sequence[int] | int | None = None, cap: int | None = 2_000_000) -> FactorLaws:
    """Check g(f(x)) = x everywhere and, on the lower level, that two f-steps
    rotate the tree and advance the shift by one; compare the number of
    f-cycles with the number of labeled plane trees counted separately.
    """
    if n < 2:
        raise MiddleLevelsError("factor laws need n >= 2")
    parts = (n,) if a is None else _parts(a)
    factor = build_factor(n, parts, cap)
    m = 2 * n - 1
    inverse = rotation = shift = True
    failure = ""
    for x in factor.cycle_of:
        y = f(x, parts)
        if g(y, parts) != x:
            inverse = False
            failure = failure or f"g(f({_fmt(x)})) != {_fmt(x)}"
        if sum(1 for s in x if s) != n - 1:
            continue
        ell, t = shift_and_tree(x)
        ell2, t2 = shift_and_tree(f(y, parts))
        if t2 != rho(t, parts):
            rotation = False
            failure = failure or f"t(f^2({_fmt(x)})) is not the rotated tree"
        if ell2 != (ell + 1) % m:
            shift = False
            failure = failure or f"shift of f^2({_fmt(x)}) is not {(ell + 1) % m}"
    classes = count_plane_classes(n, None if a is None else parts)
    if len(factor) != classes and not failure:
        failure = f"{len(factor)} cycles but {classes} plane classes"
    return FactorLaws(n, parts, factor.num_vertices, inverse, rotation, shift, len(factor), classes, failure)


def _fmt(x: Sequence[int]) -> str:
    return "".join(str(s) for s in x)


# ------------------------------------------------------------ gluing


@dataclass(frozen=True)
class GluingTuple:
    """Six tree words x1, x2, x3, x4, y1, y2 that collapse to one gluing pair."""

    x1: Word
    x2: Word
    x3: Word
    x4: Word
    y1: Word
    y2: Word

    @classmethod
    def from_pair(cls, x: Sequence[int], y: Sequence[int]) -> "GluingTuple":
        x, y = tuple(x), tuple(y)
        return cls(x, x, x, x, y, y)

    def validate(self, a: Sequence[int] | None = None) -> None:
        hx = {hat(w) for w in (self.x1, self.x2, self.x3, self.x4)}
        hy = {hat(w) for w in (self.y1, self.y2)}
        if len(hx) != 1 or len(hy) != 1:
            raise MiddleLevelsError("gluing tuple words do not share a skeleton")
        if not is_gluing_pair(hx.pop(), hy.pop()):
            raise MiddleLevelsError("skeletons are not a gluing pair 110u0v / 101u0v")
        sa = {suppressed(w + (0,), a) for w in (self.x1, self.x2, self.y1)}
        sc = {suppressed(w + (0,), a) for w in (self.x3, self.x4, self.y2)}
        if len(sa) != 1 or len(sc) != 1:
            raise MiddleLevelsError("suppressed symbols do not follow the gluing pattern")


def is_gluing_pair(x: Sequence[int], y: Sequence[int]) -> bool:
    x, y = hat(x), hat(y)
    if len(x) != len(y) or len(x) < 4 or x[:3] != (1, 1, 0) or y[:3] != (1, 0, 1):
        return False
    if x[3:] != y[3:]:
        return False
    rest = x[3:]
    # rest = u 0 v with u, v Dyck
    h = 0
    for i, s in enumerate(rest):
        if h == 0 and s == 0:
            return is_dyck(rest[i + 1:])
        h += 1 if s else -1
    return False


def gluing_pairs(n: int) -> list[tuple[Word, Word]]:
    """All gluing pairs of D_n."""
    out = []
    for x in dyck_words(n):
        if x[:3] == (1, 1, 0):
            y = (1, 0, 1) + x[3:]
            if is_gluing_pair(x, y):
                out.append((x, y))
    return out


def _orbit(x: Word, a, steps: int) -> list[Word]:
    out = [x]
    for _ in range(steps):
        out.append(f(out[-1], a))
    return out


def gluing_cycle(t: GluingTuple | tuple, a: Sequence[int] | None = None) -> list[Word]:
    """Vertices of the gluing cycle of a tuple (or of an unlabeled pair).

    The result is a 6-cycle when the two halves coincide and a 12-cycle
    otherwise.
    """
    if not isinstance(t, GluingTuple):
        t = GluingTuple.from_pair(*t) if len(t) == 2 else GluingTuple(*t)
    t.validate(a)
    x1 = _orbit(t.x1 + (0,), a, 1)
    x2 = _orbit(t.x2 + (0,), a, 6)
    y1 = _orbit(t.y1 + (0,), a, 1)
    x3 = _orbit(t.x3 + (0,), a, 1)
    x4 = _orbit(t.x4 + (0,), a, 6)
    y2 = _orbit(t.y2 + (0,), a, 1)
    seq = [x1[0], x1[1], x2[6], x2[5], y1[0], y1[1], x3[0], x3[1], x4[6], x4[5], y2[0], y2[1]]
    if seq[:6] == seq[6:]:
        seq = seq[:6]
    for i, v in enumerate(seq):
        if hamming(v, seq[(i + 1) % len(seq)]) != 1:
            raise MiddleLevelsError("gluing sequence is not a cycle of G_n(a)")
    if len(set(seq)) != len(seq):
        raise MiddleLevelsError("gluing sequence repeats a vertex")
    return seq


def cycle_edges(seq: Sequence[Word]) -> set[Edge]:
    return {frozenset((seq[i], seq[(i + 1) % len(seq)])) for i in range(len(seq))}


def path_edges(seq: Sequence[Word]) -> set[Edge]:
    return {frozenset((seq[i], seq[i + 1])) for i in range(len(seq) - 1)}


def gluing_candidates(n: int) -> dict[Word, list[tuple[Word, Word]]]:
    """Per non-star plane class, all rootings giving a potential-lowering gluing pair."""
    s_class = canonical_class(star(n))
    out: dict[Word, list[tuple[Word, Word]]] = {}
    for rep in plane_classes(n):
        if rep == s_class:
            continue
        phi = potential(rep)
        cands = []
        for x in sorted(_rotation_orbit(rep)):
            if x[:3] != (1, 1, 0):
                continue
            y = (1, 0, 1) + x[3:]
            if is_gluing_pair(x, y) and potential(y) == phi - 1:
                cands.append((x, y))
        if not cands:
            raise MiddleLevelsError(f"no potential-lowering gluing pair for class {rep}")
        out[rep] = cands
    return out


def spanning_gluing_set(n: int) -> list[tuple[Word, Word]]:
    """One gluing pair per plane tree other than the star, lowering potential by one.

    For each class the lexicographically smallest admissible rooting is
    used. The pairs form a spanning tree on the plane trees since every
    non-star class points to a class of smaller potential.
    """
    if n < 4:
        raise MiddleLevelsError("gluing sets are defined for n >= 4")
    s_class = canonical_class(star(n))
    chosen = []
    for rep in plane_classes(n):
        if rep == s_class:
            continue
        orbit = sorted(_rotation_orbit(rep))
        phi = potential(rep)
        pick = None
        for x in orbit:
            if x[:3] != (1, 1, 0):
                continue
            y = (1, 0, 1) + x[3:]
            if is_gluing_pair(x, y) and potential(y) == phi - 1:
                pick = (x, y)
                break
        if pick is None:
            raise MiddleLevelsError(f"no potential-lowering gluing pair for class {rep}")
        chosen.append(pick)
    _check_spanning(n, chosen)
    return chosen


def _rotation_orbit(x: Word, a=None) -> list[Word]:
    out = [x]
    cur = rho(x, a)
    while cur != x:
        out.append(cur)
        cur = rho(cur, a)
    return out


def _check_spanning(n: int, pairs: list[tuple[Word, Word]]) -> None:
    classes = plane_classes(n)
    parent = {c: c for c in classes}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    for x, y in pairs:
        cx, cy = find(canonical_class(x)), find(canonical_class(y))
        if cx == cy:
            raise MiddleLevelsError("gluing pairs contain a cycle of plane trees")
        parent[cx] = cy
    if len(pairs) != len(classes) - 1:
        raise MiddleLevelsError("gluing pairs do not span the plane trees")


def symmetric_difference(edges: set[Edge], cycles: Iterable[Sequence[Word]]) -> set[Edge]:
    out = set(edges)
    for cyc in cycles:
        out ^= cycle_edges(cyc)
    return out


def trace_cycle(edges: set[Edge]) -> list[Word] | None:
    """The single cycle formed by ``edges``, or None if they form anything else."""
    adj: dict[Word, list[Word]] = {}
    for e in edges:
        u, v = tuple(e)
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if any(len(nb) != 2 for nb in adj.values()):
        return None
    start = min(adj)
    seq = [start]
    prev, cur = None, start
    while True:
        a, b = adj[cur]
        nxt = b if a == prev else a
        if nxt == start:
            break
        seq.append(nxt)
        prev, cur = cur, nxt
    return seq if len(seq) == len(adj) else None


def trace_path(edges: set[Edge], x: Word, y: Word) -> list[Word] | None:
    """The single path x..y formed by ``edges``, or None."""
    adj: dict[Word, list[Word]] = {}
    for e in edges:
        u, v = tuple(e)
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    for v, nb in adj.items():
        if len(nb) != (1 if v in (x, y) else 2):
            return None
    seq = [x]
    prev = None
    while seq[-1] != y:
        cur = seq[-1]
        nxt = [w for w in adj[cur] if w != prev]
        if not nxt:
            return None
        prev = cur
        seq.append(nxt[0])
        if len(seq) > len(adj):
            return None
    return seq if len(seq) == len(adj) else None


def count_cycles(edges: set[Edge]) -> int:
    """Number of components of a 2-regular edge set."""
    adj: dict[Word, list[Word]] = {}
    for e in edges:
        u, v = tuple(e)
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen: set[Word] = set()
    count = 0
    for s in adj:
        if s in seen:
            continue
        count += 1
        stack = [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count


def factor_hamilton_cycle(n: int) -> list[Word]:
    """C_n with the gluing 6-cycles of the spanning set applied; a Hamilton cycle of G_n."""
    factor = build_factor(n)
    cycles = [gluing_cycle(p) for p in spanning_gluing_set(n)]
    seq = trace_cycle(symmetric_difference(factor.edges(), cycles))
    if seq is None or len(seq) != factor.num_vertices:
        raise MiddleLevelsError("symmetric difference is not a Hamilton cycle")
    return seq


# ------------------------------------------------------- automorphisms


def automorphism_h(x: Sequence[int]) -> Word:
    """(x_1..x_{2n-1}) -> (~x_{2n-2}, .., ~x_1, ~x_{2n-1}) on bitstrings."""
    x = tuple(x)
    if any(s not in (0, 1) for s in x):
        raise MiddleLevelsError("h is defined on bitstrings")
    comp = tuple(1 - s for s in x)
    return comp[-2::-1] + (comp[-1],)


def map_pair(x1: Sequence[int], y1: Sequence[int], x2: Sequence[int], y2: Sequence[int]) -> tuple[int, ...]:
    """A coordinate permutation p with x2[p[i]] = x1[i] and y2[p[i]] = y1[i]."""
    if len(x1) != len(x2) or len(y1) != len(y2) or len(x1) != len(y1):
        raise MiddleLevelsError("length mismatch")
    if hamming(x1, y1) != hamming(x2, y2):
        raise MiddleLevelsError(f"Hamming distances differ: {hamming(x1, y1)} vs {hamming(x2, y2)}")
    if sorted(x1) != sorted(x2) or sorted(y1) != sorted(y2):
        raise MiddleLevelsError("weights differ")
    src: dict[tuple[int, int], list[int]] = {}
    dst: dict[tuple[int, int], list[int]] = {}
    for i, pair in enumerate(zip(x1, y1)):
        src.setdefault(pair, []).append(i)
    for i, pair in enumerate(zip(x2, y2)):
        dst.setdefault(pair, []).append(i)
    perm = [0] * len(x1)
    for key, idx in src.items():
        target = dst.get(key, [])
        if len(target) != len(idx):
            raise MiddleLevelsError("coordinate types do not match")
        for i, j in zip(idx, target):
            perm[i] = j
    return tuple(perm)


def apply_coordinate_map(perm: Sequence[int], x: Sequence[int]) -> Word:
    out = [0] * len(x)
    for i, j in enumerate(perm):
        out[j] = x[i]
    return tuple(out)


def to_full(x: Sequence[int], a: Sequence[int] | None = None) -> Word:
    """The multiset permutation of G(a_0, a) behind a short string, symbols shifted by one."""
    return (suppressed(x, a) + 1,) + tuple(s + 1 for s in x)


def from_full(z: Sequence[int]) -> Word:
    return tuple(s - 1 for s in z[1:])


# ------------------------------------------------------- alternating path


def _alt_trees(n: int) -> dict[str, Word]:
    """Tree words of the path vertices x_1..x_n and x'."""
    s = lambda i: star(i)  # noqa: E731
    trees = {
        "1": s(n - 3) + (1, 1, 0, 0, 1, 0),
        str(n - 3): (1, 1, 0) + s(n - 3) + (0, 1, 0),
        str(n): (1, 0, 1, 1, 0) + s(n - 3) + (0,),
        # diameter 4 with two adjacent degree-2 vertices; the only word meeting
        # every distance and edge condition of the path for n = 5, 6, 7
        str(n - 1): (1, 1) + s(n - 3) + (0, 0, 1, 0),
        str(n - 2): s(n),
        "'": s(n),
    }
    for i in range(2, n - 3):
        trees[str(i)] = (1,) + s(i) + (0,) + s(n - i - 3) + (1, 1, 0, 0, 1, 0)
    return trees


@lru_cache(maxsize=None)
def _alternating_full(n: int) -> tuple[Word, ...]:
    """The full path x_1 y_1 x_2 y_2 .. x_n y_n, with x', y' spliced in after y_(n-2).

    Only the tree words and three shifts are fixed in advance; the remaining
    shifts are found by requiring each non-factor step to be an edge, the
    distances from x_1 to be 2i-2 and 2i-1, and every vertex but the last to
    carry a 0 at position 2n-5. The result is checked for alternation.
    """
    if n < 5:
        raise MiddleLevelsError("the alternating path needs n >= 5")
    m = 2 * n - 1
    trees = _alt_trees(n)
    fixed_shift = {"1": 0, str(n - 3): 0, str(n): 2 * n - 5}
    order = [str(i) for i in range(1, n - 1)] + ["'"] + [str(n - 1), str(n)]
    forward = {str(i) for i in range(1, n - 3)} | {"'"}

    def vertex(label: str, ell: int) -> Word:
        return sigma(trees[label] + (0,), -ell)

    def partner(label: str, x: Word) -> Word:
        return f(x) if label in forward else g(x)

    x1 = vertex("1", 0)

    def target(label: str) -> int:
        if label == "'":
            return 2 * n - 4
        return 2 * int(label) - 2

    def rec(idx: int, path: list[Word]) -> list[Word] | None:
        if idx == len(order):
            return path
        label = order[idx]
        shifts = [fixed_shift[label]] if label in fixed_shift else range(m)
        for ell in shifts:
            x = vertex(label, ell)
            if path and (hamming(path[-1], x) != 1 or _is_factor_edge(path[-1], x)):
                continue
            if hamming(x1, x) != target(label):
                continue
            want = 2 * n - 5 if label == "'" else target(label) + 1
            for y in (partner(label, x),):
                if hamming(x1, y) != want:
                    continue
                cand = path + [x, y]
                if len(set(cand)) != len(cand):
                    continue
                if idx < len(order) - 1 and (x[2 * n - 6] != 0 or y[2 * n - 6] != 0):
                    continue
                out = rec(idx + 1, cand)
                if out is not None:
                    return out
        return None

    path = rec(0, [])
    if path is None:
        raise MiddleLevelsError(f"could not reconstruct the alternating path for n={n}")
    return tuple(path)


def _is_factor_edge(u: Word, v: Word) -> bool:
    return f(u) == v or g(u) == v


def _path_end_index(n: int, i: int) -> int:
    """Index of y_i in the full path."""
    if i <= n - 2:
        return 2 * i - 1
    return 2 * i + 1


def alternating_path(n: int, i: int) -> list[Word]:
    """The subpath from x_1 to y_i; d(x_1, y_i) = 2i-1."""
    if not 1 <= i <= n:
        raise MiddleLevelsError(f"i must lie in 1..{n}")
    full = _alternating_full(n)
    return list(full[: _path_end_index(n, i) + 1])


def check_alternating(path: Sequence[Word], factor: CycleFactor | None = None) -> list[Word]:
    """Check the path alternates factor and non-factor edges and splices its cycles into one path.

    Returns that spliced path.
    """
    path = [tuple(v) for v in path]
    if len(path) < 2 or len(path) % 2:
        raise MiddleLevelsError("an alternating path has an even number of vertices")
    for j in range(len(path) - 1):
        u, v = path[j], path[j + 1]
        if hamming(u, v) != 1:
            raise MiddleLevelsError(f"step {j} is not an edge")
        if _is_factor_edge(u, v) != (j % 2 == 0):
            raise MiddleLevelsError(f"step {j} breaks the alternation")
    m = len(path[0])
    n = (m + 1) // 2
    factor = factor or build_factor(n)
    touched = {factor.cycle_of[v] for v in path}
    edges = set()
    for c in touched:
        edges |= cycle_edges(factor.cycles[c])
    edges ^= path_edges(path)
    seq = trace_path(edges, path[0], path[-1])
    if seq is None:
        raise MiddleLevelsError("symmetric difference is not a single spanning path")
    return seq


# ------------------------------------------------------- assemblies


def _hampath_from_short(rows: Sequence[Word], n: int, a: Sequence[int] | None, kind: str) -> HamPath:
    from . import ham_lab

    parts = (n,) if a is None else _parts(a)
    full = np.array([to_full(v, parts) for v in rows], dtype=np.int8)
    big = as_partition(tuple(sorted((n, *parts), reverse=True)))
    path = ham_lab._rows_to_hampath(big, full, kind)
    report = ham_lab.verify(big, path)
    if not report.ok:
        raise MiddleLevelsError(f"assembled {kind} failed verification: {report.reason}")
    return path


def laceable_path(n: int, x: Sequence[int], y: Sequence[int]) -> HamPath:
    """Hamilton path in G_n = G(n, n) between x with n-1 ones and y with n ones.

    The returned certificate is in the full G(n, n) coordinates (0 -> 1,
    1 -> 2, suppressed symbol in front).
    """
    x, y = tuple(x), tuple(y)
    m = 2 * n - 1
    if len(x) != m or len(y) != m or set(x) - {0, 1} or set(y) - {0, 1}:
        raise MiddleLevelsError(f"endpoints must be bitstrings of length {m}")
    if sum(x) != n - 1 or sum(y) != n:
        raise MiddleLevelsError("x needs n-1 ones and y needs n ones")
    d = hamming(x, y)
    if n < 5:
        from . import ham_lab

        big = as_partition((n, n))
        res = ham_lab.search_ham_path(big, to_full(x), to_full(y))
        if res.path is None:
            raise MiddleLevelsError(f"no Hamilton path found in G({n},{n})")
        return res.path
    factor = build_factor(n)
    q = [sigma(v, -4) for v in alternating_path(n, (d + 1) // 2)]
    spliced = check_alternating(q, factor)
    edges = factor.edges() ^ path_edges(q)
    # components: the spliced path and every untouched factor cycle
    touched = {factor.cycle_of[v] for v in spliced}
    parent = list(range(len(factor)))

    def find(c: int) -> int:
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    base = min(touched)
    for c in touched:
        parent[find(c)] = find(base)
    used = 0
    for pair in spanning_gluing_set(n):
        cyc = [automorphism_h(v) for v in gluing_cycle(pair)]
        ids = {factor.cycle_of[v] for v in cyc}
        roots = {find(c) for c in ids}
        if len(roots) < 2:
            continue
        ce = cycle_edges(cyc)
        if ce & path_edges(q):
            raise MiddleLevelsError("a gluing cycle meets the alternating path")
        edges ^= ce
        for c in ids:
            parent[find(c)] = find(base)
        used += 1
    seq = trace_path(edges, q[0], q[-1])
    if seq is None or len(seq) != factor.num_vertices:
        raise MiddleLevelsError("gluing did not produce a Hamilton path")
    perm = map_pair(q[0], q[-1], x, y)
    rows = [apply_coordinate_map(perm, v) for v in seq]
    return _hampath_from_short(rows, n, None, "path")


def _labeled_gluing_tuples(n: int, a: Sequence[int], factor: "CycleFactor") -> Iterator[GluingTuple]:
    """All gluing tuples of G_n(a) in lexicographic order of (x1, y2)."""
    by_hat: dict[Word, list[Word]] = {}
    for v in factor.cycle_of:
        by_hat.setdefault(hat(v[:-1]), []).append(v[:-1])
    out = []
    for x, _ in gluing_pairs(n):
        for x1 in by_hat.get(x, []):
            b, c = x1[0], x1[1]
            s1 = suppressed(x1 + (0,), a)
            rest = x1[2:]
            words = (x1, (c, b) + rest, (b, s1) + rest, (s1, b) + rest,
                     (b, 0, c) + rest[1:], (b, 0, s1) + rest[1:])
            if not all(w + (0,) in factor.cycle_of for w in words):
                continue
            t = GluingTuple(*words)
            try:
                gluing_cycle(t, a)
            except MiddleLevelsError:
                continue
            out.append(t)
    out.sort(key=lambda t: (t.x1, t.y2))
    yield from out


def cycle_M_prime(n: int, pairs: list[tuple[Word, Word]] | None = None) -> HamPath:
    """Hamilton cycle in G_n(n-1, 1) = G(n, n-1, 1) by the potential sweep.

    Certificates are in the full G(n, n-1, 1) coordinates.
    """
    if n < 4:
        from . import ham_lab

        big = as_partition((n, n - 1, 1))
        res = ham_lab.search_ham_cycle(big)
        if res.path is None:
            raise MiddleLevelsError(f"no Hamilton cycle found in G{big.parts}")
        return res.path
    a = (n - 1, 1)
    factor = build_factor(n, a)
    edges = factor.edges()
    parent = list(range(len(factor)))

    def find(c: int) -> int:
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def cid(word: Word) -> int:
        return factor.cycle_of[word + (0,)]

    pairs = spanning_gluing_set(n) if pairs is None else pairs
    by_potential: dict[int, list[tuple[Word, Word]]] = {}
    for x, y in pairs:
        by_potential.setdefault(potential(x), []).append((x, y))
    ncycles = len(factor)

    def glue(t: GluingTuple) -> bool:
        # apply t only if it merges the cycles it touches into exactly one
        nonlocal edges, ncycles
        cyc = gluing_cycle(t, a)
        roots = {find(factor.cycle_of[v]) for v in cyc}
        trial = edges ^ cycle_edges(cyc)
        if count_cycles(trial) != ncycles - len(roots) + 1:
            return False
        edges, ncycles = trial, ncycles - len(roots) + 1
        root = roots.pop()
        for c in roots:
            parent[c] = root
        return True

    skipped = 0
    p_hat, p_check = n * n // 4, n - 1
    for p in range(p_hat, p_check, -1):
        level = []
        for x, y in sorted(by_potential.get(p, [])):
            # x = 1 1 0 u 0 v; markings of x other than root and its first two descendants
            x1 = (1, 2) + x[2:]
            x2 = (2, 1) + x[2:]
            x3 = x
            marked = {}
            for j, s in enumerate(x):
                if s:
                    w = list(x)
                    w[j] = 2
                    marked[tuple(w)] = None
            marked[x3] = None
            classes: dict[int, list[Word]] = {}
            for w in marked:
                classes.setdefault(find(cid(w)), []).append(w)
            main = GluingTuple(x1, x2, x3, x3, (1, 0, 2) + x[3:], y)
            extras = []
            for members in classes.values():
                if any(w in members for w in (x1, x2, x3)):
                    continue
                xp = min(members)
                yp = (xp[0], xp[2], xp[1]) + xp[3:]
                extras.append(GluingTuple(xp, xp, xp, xp, yp, yp))
            level.append((main, extras))
        for main, extras in level:
            # the main tuple can split a cycle when [x2] and [x3] were joined
            # earlier in the opposite orientation; the repair pass covers it
            skipped += not glue(main)
            for t in extras:
                if not glue(t):
                    raise MiddleLevelsError(f"gluing at potential {p} broke the cycle factor")
    if ncycles > 1:
        log.debug("M'(%d): %d main tuples skipped, %d cycles left for repair", n, skipped, ncycles)
        for t in _labeled_gluing_tuples(n, a, factor):
            if len({find(cid(w)) for w in (t.x1, t.x2, t.x3, t.x4, t.y1, t.y2)}) > 1:
                glue(t)
            if ncycles == 1:
                break
    seq = trace_cycle(edges)
    if seq is None or len(seq) != factor.num_vertices:
        raise MiddleLevelsError("the potential sweep did not produce a Hamilton cycle")
    return _hampath_from_short(seq, n, a, "cycle")


def _degrees(edges: set[Edge]) -> dict[Word, list[Word]]:
    adj: dict[Word, list[Word]] = {}
    for e in edges:
        u, v = tuple(e)
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    return adj
