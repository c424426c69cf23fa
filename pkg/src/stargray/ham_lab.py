"""Hamiltonicity search, property checks and certificate verification.

Searches first run a randomized rotation-extension finder, whose successes
are certificates, and then fall back to a complete backtracking search whose
exhaustion is a definitive negative answer. Endpoint pairs are reduced modulo
position permutations fixing position 1 and relabelings of equal-frequency
symbols before searching, and results are cached under that canonical form.
"""

from __future__ import annotations

import enum
import itertools
import json
import os
import sqlite3
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _search
from .certificate import Certificate, HamPath, rows_from_flips
from .flip_graph import (
    DEFAULT_CAP,
    CapExceeded,
    Vertex,
    check_vertex,
    enumerate_vertices,
    first_vertex,
    flip_graph,
    flip_position,
    format_vertex,
    inversion_parity,
)
from .partition_core import FrequencyVector, as_partition, delta, format_partition, num_vertices


class PropertyKind(enum.Enum):
    C = "C"
    P = "P"
    E = "E"
    L = "L"
    L1 = "L1"
    L12 = "L12"
    H = "H"


class SearchStatus(enum.Enum):
    FOUND = "found"
    NONE = "none"
    TIMEOUT = "timeout"


class SearchTimeout(RuntimeError):
    """A search ran out of time or step budget without a verdict."""


@dataclass
class SearchResult:
    status: SearchStatus
    path: HamPath | None = None
    method: str = ""
    steps: int = 0


# ---------------------------------------------------------------- caching


def default_cache_dir() -> str | None:
    return os.environ.get("STARGRAY_CACHE") or None


class CertificateCache:
    """Maps canonical (partition, endpoint pair) keys to flip sequences.

    Always keeps an in-memory table; with a directory it also persists to a
    sqlite file. Writes are serialized by a lock and by sqlite itself.
    """

    def __init__(self, directory: str | None = None):
        self._mem: dict[str, tuple[int, ...] | None] = {}
        self._lock = threading.Lock()
        self._db = None
        if directory:
            os.makedirs(directory, exist_ok=True)
            self._db = sqlite3.connect(os.path.join(directory, "certificates.sqlite"), check_same_thread=False)
            self._db.execute("CREATE TABLE IF NOT EXISTS paths (key TEXT PRIMARY KEY, flips TEXT)")
            self._db.commit()

    def get(self, key: str):
        if key in self._mem:
            return self._mem[key]
        if self._db is not None:
            with self._lock:
                row = self._db.execute("SELECT flips FROM paths WHERE key = ?", (key,)).fetchone()
            if row is not None:
                value = None if row[0] == "none" else tuple(int(f) for f in row[0].split())
                self._mem[key] = value
                return value
        raise KeyError(key)

    def put(self, key: str, flips: tuple[int, ...] | None) -> None:
        with self._lock:
            self._mem[key] = flips
            if self._db is not None:
                text = "none" if flips is None else " ".join(map(str, flips))
                self._db.execute("INSERT OR REPLACE INTO paths (key, flips) VALUES (?, ?)", (key, text))
                self._db.commit()

    def __len__(self) -> int:
        return len(self._mem)


_default_cache: CertificateCache | None = None


def get_cache() -> CertificateCache:
    global _default_cache
    if _default_cache is None:
        _default_cache = CertificateCache(default_cache_dir())
    return _default_cache


def set_cache(cache: CertificateCache | None) -> None:
    global _default_cache
    _default_cache = cache


# ------------------------------------------------------- canonical pairs


def _symbol_groups(a: FrequencyVector) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for s, c in enumerate(a.parts, start=1):
        groups.setdefault(c, []).append(s)
    return [g for g in groups.values()]


MAX_RELABELINGS = 5040


@lru_cache(maxsize=256)
def _relabelings(parts: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Symbol maps permuting equal-frequency symbols (identity first)."""
    a = FrequencyVector(parts)
    groups = _symbol_groups(a)
    total = 1
    for g in groups:
        for i in range(2, len(g) + 1):
            total *= i
    if total > MAX_RELABELINGS:
        return (tuple(range(1, a.k + 1)),)
    out = []
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        sigma = [0] * a.k
        for g, img in zip(groups, choice):
            for s, t in zip(g, img):
                sigma[s - 1] = t
        out.append(tuple(sigma))
    return tuple(out)


def _pair_key(x: Sequence[int], y: Sequence[int], sigma: Sequence[int]) -> tuple:
    cols = sorted((sigma[x[i] - 1], sigma[y[i] - 1]) for i in range(1, len(x)))
    return (sigma[x[0] - 1], sigma[y[0] - 1], tuple(cols))


@dataclass(frozen=True)
class CanonicalPair:
    key: tuple
    sigma: tuple[int, ...]
    perm: tuple[int, ...]
    swapped: bool

    def representative(self) -> tuple[Vertex, Vertex]:
        return realize_key(self.key)


def realize_key(key: tuple) -> tuple[Vertex, Vertex]:
    s, t, cols = key
    return (s,) + tuple(c[0] for c in cols), (t,) + tuple(c[1] for c in cols)


def canonical_pair(a: FrequencyVector, x: Sequence[int], y: Sequence[int], ordered: bool = False) -> CanonicalPair:
    """Smallest key over the reduction group; unordered unless ``ordered``."""
    best = None
    for sigma in _relabelings(a.parts):
        options = [(False, x, y)] if ordered else [(False, x, y), (True, y, x)]
        for swapped, u, v in options:
            key = _pair_key(u, v, sigma)
            if best is None or key < best[0]:
                best = (key, sigma, swapped, u, v)
    key, sigma, swapped, u, v = best
    positions = sorted(range(2, len(x) + 1), key=lambda p: (sigma[u[p - 1] - 1], sigma[v[p - 1] - 1], p))
    return CanonicalPair(key, sigma, (1,) + tuple(positions), swapped)


def _contingency(rows: list[int], cols: list[int]) -> Iterator[list[list[int]]]:
    k = len(rows)
    if k == 0:
        yield []
        return
    first, rest = rows[0], rows[1:]

    def split(total: int, caps: list[int], idx: int):
        if idx == len(caps):
            if total == 0:
                yield []
            return
        for v in range(min(total, caps[idx]), -1, -1):
            for tail in split(total - v, caps, idx + 1):
                yield [v] + tail

    for row in split(first, cols, 0):
        remaining = [c - r for c, r in zip(cols, row)]
        for tail in _contingency(rest, remaining):
            yield [row] + tail


def pair_orbits(a: FrequencyVector | Sequence[int], ordered: bool = False,
                first_symbols: Iterable[tuple[int, int]] | None = None) -> list[tuple[Vertex, Vertex]]:
    """One representative per orbit of distinct vertex pairs.

    ``first_symbols`` restricts the (x_1, y_1) combinations enumerated.
    """
    a = as_partition(a)
    k = a.k
    if first_symbols is None:
        first_symbols = [(s, t) for s in range(1, k + 1) for t in range(1, k + 1)]
    keys = set()
    for s, t in first_symbols:
        rows = list(a.parts)
        cols = list(a.parts)
        rows[s - 1] -= 1
        cols[t - 1] -= 1
        for mat in _contingency(rows, cols):
            if s == t and all(mat[i][j] == 0 for i in range(k) for j in range(k) if i != j):
                continue
            cells = []
            for i in range(k):
                for j in range(k):
                    cells.extend([(i + 1, j + 1)] * mat[i][j])
            x = (s,) + tuple(c[0] for c in cells)
            y = (t,) + tuple(c[1] for c in cells)
            keys.add(canonical_pair(a, x, y, ordered).key)
    return [realize_key(key) for key in sorted(keys)]


def edge_orbits(a: FrequencyVector | Sequence[int]) -> list[tuple[Vertex, Vertex]]:
    a = as_partition(a)
    keys = set()
    for s in range(1, a.k + 1):
        for t in range(1, a.k + 1):
            if s == t:
                continue
            x = [s, t]
            rest = list(a.parts)
            rest[s - 1] -= 1
            rest[t - 1] -= 1
            for sym, c in enumerate(rest, start=1):
                x.extend([sym] * c)
            y = [t, s] + x[2:]
            keys.add(canonical_pair(a, x, y).key)
    return [realize_key(key) for key in sorted(keys)]


# ------------------------------------------------------------- searching


@lru_cache(maxsize=128)
def _search_graph(parts: tuple[int, ...], alternate: bool):
    """CSR arrays of G(a); with ``alternate`` only edges touching symbol 1 first."""
    g = flip_graph(FrequencyVector(parts), cap=None)
    nbr = g.nbr.copy()
    cls = (g.first - 1).astype(np.int32)
    if alternate:
        other = cls[np.maximum(nbr, 0)]
        nbr[(cls[:, None] != 0) & (other != 0)] = -1
    mask = nbr >= 0
    indptr = np.zeros(g.size + 1, dtype=np.int32)
    np.cumsum(mask.sum(axis=1), out=indptr[1:])
    indices = nbr[mask].astype(np.int32)
    return g, indptr, indices, cls


def alternation_applies(a: FrequencyVector, x: Sequence[int], y: Sequence[int]) -> bool:
    """Delta zero with exactly one endpoint starting with symbol 1."""
    return delta(a) == 0 and (x[0] == 1) != (y[0] == 1)


def class_count_feasible(a: FrequencyVector, x: Sequence[int], y: Sequence[int]) -> bool:
    """Necessary condition from the sizes of the first-symbol classes.

    A Hamilton path visits every class; two consecutive vertices never share
    their first symbol, so each class can be at most one larger than the
    rest, minus one for each endpoint lying outside it.
    """
    from .partition_core import class_sizes

    sizes = class_sizes(a)
    total = sum(sizes)
    for c, size in enumerate(sizes, start=1):
        bound = total - size + 1 - (x[0] != c) - (y[0] != c)
        if size > bound:
            return False
    return True


def _rows_to_hampath(a: FrequencyVector, rows: np.ndarray, kind: str = "path") -> HamPath:
    from .certificate import flips_from_rows

    flips = flips_from_rows(rows)
    if kind == "cycle":
        closing = flips_from_rows(np.stack([rows[-1], rows[0]]))
        flips = np.concatenate([flips, closing])
    return HamPath(a, rows, flips, kind)


def _raw_search(a: FrequencyVector, x: Vertex, y: Vertex, prune: int, timeout: float | None,
                heuristic: bool, max_steps: int | None = None) -> SearchResult:
    alternate = bool(prune & _search.PRUNE_ALTERNATE) and alternation_applies(a, x, y)
    g, indptr, indices, cls = _search_graph(a.parts, alternate)
    s, t = g.index(x), g.index(y)
    total = g.size
    if prune & _search.PRUNE_CLASSES and not class_count_feasible(a, x, y):
        return SearchResult(SearchStatus.NONE, method="class-count")
    if heuristic and total > 2:
        path = np.zeros(total, dtype=np.int32)
        pos = np.zeros(total, dtype=np.int32)
        iters = 20 * total + 10000
        for seed in range(4):
            used = _search.rotation_search(indptr, indices, s, t, seed, iters, path, pos)
            if used >= 0:
                return SearchResult(SearchStatus.FOUND, _rows_to_hampath(a, g.vertices[path]),
                                    "rotation", int(used))
    flags = prune if alternate else prune & ~_search.PRUNE_ALTERNATE
    ps = _search.PathSearch(indptr, indices, cls, a.k, s, t, flags, 0, 1)
    deadline = None if timeout is None else time.monotonic() + timeout
    while True:
        status = ps.run(200_000)
        if status == _search.FOUND:
            return SearchResult(SearchStatus.FOUND, _rows_to_hampath(a, g.vertices[ps.path]), "backtrack", ps.steps)
        if status == _search.EXHAUSTED:
            return SearchResult(SearchStatus.NONE, method="backtrack", steps=ps.steps)
        if deadline is not None and time.monotonic() > deadline:
            return SearchResult(SearchStatus.TIMEOUT, method="backtrack", steps=ps.steps)
        if max_steps is not None and ps.steps >= max_steps:
            return SearchResult(SearchStatus.TIMEOUT, method="backtrack", steps=ps.steps)


def _map_back(a: FrequencyVector, canon: CanonicalPair, x: Vertex, y: Vertex, flips: Sequence[int]) -> HamPath:
    mapped = [canon.perm[f - 1] for f in flips]
    if canon.swapped:
        rows = rows_from_flips(y, mapped)[::-1].copy()
    else:
        rows = rows_from_flips(x, mapped)
    return _rows_to_hampath(a, rows)


def search_ham_path(a: FrequencyVector | Sequence[int], x: Sequence[int], y: Sequence[int], *,
                    timeout: float | None = 600.0, cap: int | None = DEFAULT_CAP,
                    prune: int = _search.PRUNE_ALL, heuristic: bool = True, reduce: bool = True,
                    cache: CertificateCache | None = None, max_steps: int | None = None) -> SearchResult:
    """Search a Hamilton path from x to y and report found/none/timeout."""
    a = as_partition(a)
    x = check_vertex(a, x)
    y = check_vertex(a, y)
    if x == y:
        raise ValueError("endpoints must be distinct")
    if cap is not None and num_vertices(a) > cap:
        raise CapExceeded(f"{num_vertices(a)} vertices exceed cap {cap}")
    if not reduce:
        res = _raw_search(a, x, y, prune, timeout, heuristic, max_steps)
        if res.path is not None:
            _assert_valid(a, res.path, x, y)
        return res
    cache = cache if cache is not None else get_cache()
    canon = canonical_pair(a, x, y)
    key = f"{format_partition(a)}|{canon.key}"
    try:
        flips = cache.get(key)
    except KeyError:
        cx, cy = canon.representative()
        res = _raw_search(a, cx, cy, prune, timeout, heuristic, max_steps)
        if res.status is SearchStatus.TIMEOUT:
            return res
        flips = None if res.path is None else tuple(int(f) for f in res.path.flips)
        cache.put(key, flips)
        method = res.method
    else:
        method = "cache"
    if flips is None:
        return SearchResult(SearchStatus.NONE, method=method)
    path = _map_back(a, canon, x, y, flips)
    _assert_valid(a, path, x, y)
    return SearchResult(SearchStatus.FOUND, path, method)


def _assert_valid(a, path, x, y) -> None:
    report = verify(a, path)
    if not report.ok or path.start != tuple(x) or path.end != tuple(y):
        raise AssertionError(f"search produced an invalid path: {report.reason}")


def find_ham_path(a, x, y, **kwargs) -> HamPath | None:
    """Hamilton path x..y, or None when the search space was exhausted."""
    res = search_ham_path(a, x, y, **kwargs)
    if res.status is SearchStatus.TIMEOUT:
        raise SearchTimeout(f"no verdict for {format_vertex(x)} -> {format_vertex(y)} in G({format_partition(as_partition(a))})")
    return res.path


def search_ham_cycle(a, **kwargs) -> SearchResult:
    a = as_partition(a)
    s = first_vertex(a)
    if num_vertices(a) == 2:
        t = (s[1], s[0])
        rows = np.array([s, t], dtype=np.int8)
        return SearchResult(SearchStatus.FOUND, HamPath(a, rows, np.array([2, 2], dtype=np.int32), "cycle"), "trivial")
    from .flip_graph import star_neighbors

    timed_out = False
    seen = set()
    for t in star_neighbors(s):
        key = canonical_pair(a, s, t).key
        if key in seen:
            continue
        seen.add(key)
        res = search_ham_path(a, s, t, **kwargs)
        if res.status is SearchStatus.FOUND:
            rows = res.path.vertices
            return SearchResult(SearchStatus.FOUND, _rows_to_hampath(a, rows, "cycle"), res.method)
        if res.status is SearchStatus.TIMEOUT:
            timed_out = True
    return SearchResult(SearchStatus.TIMEOUT if timed_out else SearchStatus.NONE)


def find_ham_cycle(a, **kwargs) -> HamPath | None:
    res = search_ham_cycle(a, **kwargs)
    if res.status is SearchStatus.TIMEOUT:
        raise SearchTimeout(f"no cycle verdict for G({format_partition(as_partition(a))})")
    return res.path


# ------------------------------------------------------------ verifying


@dataclass
class VerifyReport:
    ok: bool
    reason: str = ""
    index: int | None = None

    def __bool__(self) -> bool:
        return self.ok


EXPECTATIONS = ("path", "cycle", "laceable-endpoints", "L1-endpoints")


def bipartition_class(a: FrequencyVector, x: Sequence[int]) -> int | None:
    """Side of x in the bipartition of G(a), or None if G(a) is not bipartite."""
    if all(p == 1 for p in a.parts) and a.k >= 3:
        return inversion_parity(x)
    if a.k == 2:
        return x[0]
    return None


def verify(a: FrequencyVector | Sequence[int], cert: Certificate | HamPath, expect: str | None = None) -> VerifyReport:
    """Independent replay check of a certificate."""
    a = as_partition(a)
    if isinstance(cert, HamPath):
        cert = cert.to_certificate()
    if cert.a != a:
        return VerifyReport(False, f"certificate is for {format_partition(cert.a)}, not {format_partition(a)}")
    kind = cert.kind
    if expect is None:
        expect = kind
    if expect not in EXPECTATIONS:
        return VerifyReport(False, f"unknown expectation {expect!r}")
    n = a.n
    start = tuple(cert.start)
    counts = [0] * a.k
    for s in start:
        if not 1 <= s <= a.k:
            return VerifyReport(False, f"start vertex has symbol {s} outside 1..{a.k}", 0)
        counts[s - 1] += 1
    if tuple(counts) != a.parts:
        return VerifyReport(False, "start vertex is not a multiset permutation of a", 0)
    total = num_vertices(a)
    expected_flips = total if kind == "cycle" else total - 1
    if len(cert.flips) != expected_flips:
        return VerifyReport(False, f"expected {expected_flips} flips, found {len(cert.flips)}")
    seen = set()
    cur = list(start)
    seen.add(bytes(cur))
    for i, f in enumerate(cert.flips):
        if not 2 <= f <= n:
            return VerifyReport(False, f"flip position {f} out of range", i)
        if cur[f - 1] == cur[0]:
            return VerifyReport(False, f"flip at position {f} swaps equal symbols", i)
        cur[0], cur[f - 1] = cur[f - 1], cur[0]
        b = bytes(cur)
        if kind == "cycle" and i == len(cert.flips) - 1:
            if tuple(cur) != start:
                return VerifyReport(False, "closing flip does not return to the start", i)
            break
        if b in seen:
            return VerifyReport(False, f"vertex {format_vertex(cur)} repeated", i + 1)
        seen.add(b)
    if len(seen) != total:
        return VerifyReport(False, f"visited {len(seen)} of {total} vertices")
    if expect == "cycle" and kind != "cycle":
        return VerifyReport(False, "certificate is a path, a cycle was expected")
    if expect in ("laceable-endpoints", "L1-endpoints"):
        if kind != "path":
            return VerifyReport(False, "endpoint conditions apply to paths")
        end = tuple(cur)
        if expect == "L1-endpoints":
            if (start[0] == 1) == (end[0] == 1):
                return VerifyReport(False, "exactly one endpoint must start with symbol 1")
        else:
            cs, ce = bipartition_class(a, start), bipartition_class(a, end)
            if cs is None:
                return VerifyReport(False, "graph is not bipartite")
            if cs == ce:
                return VerifyReport(False, "endpoints lie in the same partition class")
    return VerifyReport(True)


# ------------------------------------------------------ property checks


def pq(ell: int, s: int, t: int) -> tuple[int, int]:
    """First-symbol table for the L12 variant of laceability."""
    if ell not in (3, 4) or s not in (1, 2) or t not in (1, 2, ell):
        raise ValueError(f"pq undefined for ell={ell}, s={s}, t={t}")
    p = ell if t in (s, ell) else t
    return p, s


def l12_positions(x: Sequence[int], y: Sequence[int], ell: int = 3) -> list[int]:
    """Positions i>1 with (x_i, y_i) = (p, q); empty when the pair does not qualify."""
    s, t = x[0], y[0]
    if s not in (1, 2) or t not in (1, 2, ell):
        return []
    p, q = pq(ell, s, t)
    return [i + 1 for i in range(1, len(x)) if x[i] == p and y[i] == q]


@dataclass
class PropertyReport:
    a: FrequencyVector
    prop: PropertyKind
    holds: bool | None
    pairs_checked: int = 0
    counterexample: tuple[Vertex, Vertex] | None = None
    witnesses: list[HamPath] = field(default_factory=list)
    applicable: bool = True
    timeouts: int = 0

    def summary(self) -> str:
        verdict = {True: "holds", False: "fails", None: "unknown"}[self.holds]
        text = f"G({format_partition(self.a)}) {self.prop.value}: {verdict} ({self.pairs_checked} pairs)"
        if self.counterexample:
            x, y = self.counterexample
            text += f", counterexample {format_vertex(x)} {format_vertex(y)}"
        return text


def is_bipartite(a: FrequencyVector) -> bool:
    return a.k == 2 or all(p == 1 for p in a.parts)


def required_pairs(a: FrequencyVector, prop: PropertyKind, reduce: bool = True) -> list[tuple[Vertex, Vertex]]:
    """Endpoint pairs that a property quantifies over."""
    k = a.k
    if prop is PropertyKind.H:
        pairs = pair_orbits(a) if reduce else _all_pairs(a, lambda x, y: True)
    elif prop is PropertyKind.L1:
        fs = [(1, t) for t in range(2, k + 1)]
        pairs = pair_orbits(a, ordered=True, first_symbols=fs) if reduce else _all_pairs(a, lambda x, y: x[0] == 1 and y[0] != 1)
    elif prop is PropertyKind.L:
        if not is_bipartite(a):
            return []
        side = lambda v: bipartition_class(a, v)
        pool = pair_orbits(a) if reduce else _all_pairs(a, lambda x, y: True)
        pairs = [(x, y) for x, y in pool if side(x) != side(y)]
    elif prop is PropertyKind.L12:
        pool = pair_orbits(a, ordered=True) if reduce else _all_pairs(a, lambda x, y: True)
        pairs = [(x, y) for x, y in pool if l12_positions(x, y)]
    elif prop is PropertyKind.E:
        pairs = edge_orbits(a) if reduce else [(x, y) for x, y in _all_pairs(a, lambda x, y: flip_position(x, y) > 0)]
    else:
        raise ValueError(f"{prop} does not quantify over pairs")
    return pairs


def _all_pairs(a: FrequencyVector, pred) -> list[tuple[Vertex, Vertex]]:
    vs = list(enumerate_vertices(a, cap=None))
    return [(x, y) for x in vs for y in vs if x != y and pred(x, y)]


def check_property(a: FrequencyVector | Sequence[int], prop: PropertyKind | str, *, reduce: bool = True,
                   stop_at_failure: bool = True, timeout: float | None = 600.0, cap: int | None = DEFAULT_CAP,
                   keep_witnesses: bool = False, cache: CertificateCache | None = None,
                   threads: int = 1) -> PropertyReport:
    """Check a property pair by pair.

    With ``threads > 1`` the pair searches run in a thread pool (the kernels
    release the GIL); results are consumed in canonical pair order, so the
    report does not depend on completion order.
    """
    a = as_partition(a)
    prop = PropertyKind(prop) if isinstance(prop, str) else prop
    if cap is not None and num_vertices(a) > cap:
        raise CapExceeded(f"{num_vertices(a)} vertices exceed cap {cap}")
    if prop in (PropertyKind.C, PropertyKind.P):
        res = search_ham_cycle(a, timeout=timeout, cap=cap, cache=cache, reduce=reduce)
        if res.status is SearchStatus.FOUND:
            return PropertyReport(a, prop, True, 1, witnesses=[res.path] if keep_witnesses else [])
        if prop is PropertyKind.C:
            return PropertyReport(a, prop, None if res.status is SearchStatus.TIMEOUT else False, 1)
        prop_pairs = required_pairs(a, PropertyKind.H, reduce)
        report = PropertyReport(a, prop, False, 0)
        for x, y in prop_pairs:
            r = search_ham_path(a, x, y, timeout=timeout, cap=cap, cache=cache, reduce=reduce)
            report.pairs_checked += 1
            if r.status is SearchStatus.FOUND:
                report.holds = True
                return report
            if r.status is SearchStatus.TIMEOUT:
                report.timeouts += 1
        if report.timeouts:
            report.holds = None
        return report
    if prop is PropertyKind.L and not is_bipartite(a):
        return PropertyReport(a, prop, False, 0, applicable=False)
    if prop is PropertyKind.L12 and not (a.k == 3 and a.parts[0] == a.parts[1] and a.parts[2] == 1):
        return PropertyReport(a, prop, False, 0, applicable=False)
    pairs = required_pairs(a, prop, reduce)
    if num_vertices(a) == 2 and prop is PropertyKind.E:
        return PropertyReport(a, prop, True, len(pairs))
    # cheap class-count refutations first
    pairs.sort(key=lambda p: class_count_feasible(a, p[0], p[1]))
    report = PropertyReport(a, prop, True, 0)

    def one(pair: tuple[Vertex, Vertex]) -> SearchResult:
        return search_ham_path(a, pair[0], pair[1], timeout=timeout, cap=cap, cache=cache, reduce=reduce)

    if threads > 1 and len(pairs) > 1:
        pool = ThreadPoolExecutor(max_workers=threads)
        results: Iterable[SearchResult] = pool.map(one, pairs)
    else:
        pool = None
        results = map(one, pairs)
    try:
        report = _consume(report, pairs, results, keep_witnesses, stop_at_failure)
    finally:
        if pool is not None:
            pool.shutdown(wait=True, cancel_futures=True)
    return report


def _consume(report: PropertyReport, pairs, results, keep_witnesses: bool, stop_at_failure: bool) -> PropertyReport:
    for (x, y), res in zip(pairs, results):
        report.pairs_checked += 1
        if res.status is SearchStatus.FOUND:
            if keep_witnesses:
                report.witnesses.append(res.path)
            continue
        if res.status is SearchStatus.TIMEOUT:
            report.timeouts += 1
            report.holds = None if report.holds else report.holds
            continue
        report.holds = False
        if report.counterexample is None:
            report.counterexample = (x, y)
        if stop_at_failure:
            break
    return report


# ---------------------------------------------------------------- table


TABLE1_PARTITIONS: tuple[tuple[int, ...], ...] = (
    (1, 1),
    (1, 1, 1), (2, 2), (2, 1, 1),
    (2, 2, 1), (2, 1, 1, 1),
    (3, 3), (3, 2, 1), (3, 1, 1, 1),
    (3, 3, 1), (3, 2, 2), (3, 2, 1, 1), (3, 1, 1, 1, 1),
    (4, 4), (4, 3, 1), (4, 2, 2), (4, 2, 1, 1), (4, 1, 1, 1, 1),
    (4, 4, 1), (4, 3, 2), (4, 3, 1, 1), (4, 2, 2, 1), (4, 2, 1, 1, 1), (4, 1, 1, 1, 1, 1),
)


@dataclass
class Table1Row:
    a: FrequencyVector
    delta: int
    vertices: int
    verdict: str
    properties: dict[str, bool | None]
    pairs: int
    seconds: float

    def as_dict(self) -> dict:
        return {
            "partition": list(self.a.parts),
            "n": self.a.n,
            "delta": self.delta,
            "vertices": self.vertices,
            "verdict": self.verdict,
            "properties": self.properties,
            "pairs": self.pairs,
            "seconds": round(self.seconds, 3),
        }


def _verdict_text(a: FrequencyVector, props: dict[str, bool | None]) -> str:
    if props.get("H"):
        return "H"
    if is_bipartite(a):
        if props.get("L"):
            return "L1=L but not H" if a.k == 2 else "L but not H"
        above = "L"
    else:
        if props.get("L1"):
            return "L1 but not H"
        above = "L1"
    if props.get("E"):
        return f"E but not {above}"
    if props.get("C"):
        return "C but not E"
    if props.get("P"):
        return "P but not C"
    return "not P"


def table1_row(a: FrequencyVector | Sequence[int], timeout: float | None = 600.0,
               cache: CertificateCache | None = None, threads: int = 1) -> Table1Row:
    a = as_partition(a)
    t0 = time.monotonic()
    props: dict[str, bool | None] = {}
    pairs = 0
    if a.n >= 9:
        rep = check_property(a, PropertyKind.C, timeout=timeout, cap=None, cache=cache)
        props["C"] = rep.holds
        verdict = "C" if rep.holds else "not C"
        return Table1Row(a, delta(a), num_vertices(a), verdict, props, 0, time.monotonic() - t0)

    def run(p: PropertyKind) -> bool | None:
        nonlocal pairs
        rep = check_property(a, p, timeout=timeout, cache=cache, threads=threads)
        if p in (PropertyKind.H, PropertyKind.L1, PropertyKind.L):
            pairs = max(pairs, len(required_pairs(a, p)))
        return rep.holds

    props["H"] = run(PropertyKind.H)
    if not props["H"]:
        if is_bipartite(a):
            props["L"] = run(PropertyKind.L)
        if a.k >= 2 and not all(p == 1 for p in a.parts):
            props["L1"] = run(PropertyKind.L1)
        if not (props.get("L") if is_bipartite(a) else props.get("L1")):
            props["E"] = run(PropertyKind.E)
            if not props["E"]:
                props["C"] = run(PropertyKind.C)
                if not props["C"]:
                    props["P"] = run(PropertyKind.P)
    verdict = _verdict_text(a, props)
    return Table1Row(a, delta(a), num_vertices(a), verdict, props, pairs, time.monotonic() - t0)


def table1_report(max_n: int = 8, timeout: float | None = 600.0,
                  cache: CertificateCache | None = None, threads: int = 1) -> list[Table1Row]:
    return [table1_row(p, timeout, cache, threads) for p in TABLE1_PARTITIONS if sum(p) <= max_n]
