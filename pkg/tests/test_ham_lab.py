import itertools

import networkx as nx
import pytest

from stargray import ham_lab
from stargray.flip_graph import enumerate_vertices, inversion_parity, star_neighbors
from stargray.ham_lab import (
    CertificateCache, PropertyKind, SearchStatus, canonical_pair, check_property, class_count_feasible,
    edge_orbits, find_ham_cycle, l12_positions, pair_orbits, pq, search_ham_path, table1_row, verify,
)
from stargray.partition_core import as_partition


def brute_graph(a):
    word = [s for s, p in enumerate(a.parts, 1) for _ in range(p)]
    g = nx.Graph()
    for x in set(itertools.permutations(word)):
        for i in range(1, len(x)):
            if x[i] != x[0]:
                y = list(x)
                y[0], y[i] = y[i], y[0]
                g.add_edge(x, tuple(y))
    return g


def naive_path_exists(g, x, y):
    """Plain DFS over simple paths; fine up to a few dozen vertices."""
    total = g.number_of_nodes()
    seen = {x}

    def dfs(v):
        if len(seen) == total:
            return v == y
        for w in g[v]:
            if w in seen or (w == y and len(seen) != total - 1):
                continue
            seen.add(w)
            if dfs(w):
                return True
            seen.discard(w)
        return False

    return dfs(x)


ORACLE_CASES = [(1, 1), (2, 1), (1, 1, 1), (2, 2), (2, 1, 1), (3, 1), (1, 1, 1, 1), (3, 2)]


@pytest.mark.parametrize("parts", ORACLE_CASES, ids=str)
def test_search_agrees_with_naive_dfs(parts):
    a = as_partition(parts)
    g = brute_graph(a)
    for x, y in itertools.combinations(sorted(g.nodes), 2):
        expected = naive_path_exists(g, x, y)
        reduced = search_ham_path(a, x, y)
        raw = search_ham_path(a, x, y, reduce=False, heuristic=False)
        assert (reduced.status is SearchStatus.FOUND) == expected, (x, y)
        assert (raw.status is SearchStatus.FOUND) == expected, (x, y)
        if expected:
            assert reduced.path.start == x and reduced.path.end == y
            assert verify(a, reduced.path).ok


@pytest.mark.parametrize("parts", [(2, 2, 1), (3, 2, 1), (1, 1, 1, 1), (2, 2, 2)], ids=str)
def test_pair_orbits_cover_every_pair(parts):
    a = as_partition(parts)
    vs = list(enumerate_vertices(a))
    reps = pair_orbits(a)
    keys = {canonical_pair(a, x, y).key for x, y in reps}
    assert len(keys) == len(reps)
    for x, y in itertools.combinations(vs, 2):
        assert canonical_pair(a, x, y).key in keys
        assert canonical_pair(a, x, y).key == canonical_pair(a, y, x).key


def test_ordered_orbits_distinguish_direction():
    a = as_partition((2, 1, 1))
    assert len(pair_orbits(a, ordered=True)) >= len(pair_orbits(a))


def test_edge_orbits_are_edges():
    for parts in [(2, 2, 1), (3, 1, 1), (1, 1, 1, 1)]:
        for x, y in edge_orbits(parts):
            assert y in star_neighbors(x)


def test_class_count_bound():
    a = as_partition((3, 2))
    assert not class_count_feasible(a, (2, 1, 1, 1, 2), (2, 1, 1, 2, 1))
    assert not class_count_feasible(a, (1, 1, 1, 2, 2), (2, 1, 1, 2, 1))
    a = as_partition((2, 2))
    assert class_count_feasible(a, (1, 1, 2, 2), (2, 2, 1, 1))
    assert not class_count_feasible(a, (2, 1, 1, 2), (2, 2, 1, 1))


def test_cache_round_trip(tmp_path):
    cache = CertificateCache(str(tmp_path))
    cache.put("k", (2, 3))
    cache.put("none", None)
    fresh = CertificateCache(str(tmp_path))
    assert fresh.get("k") == (2, 3)
    assert fresh.get("none") is None
    with pytest.raises(KeyError):
        fresh.get("missing")


def test_search_uses_cache():
    cache = CertificateCache()
    a = (2, 2, 1)
    first = search_ham_path(a, (1, 1, 2, 2, 3), (3, 1, 1, 2, 2), cache=cache)
    again = search_ham_path(a, (1, 1, 2, 2, 3), (3, 1, 1, 2, 2), cache=cache)
    assert first.status is SearchStatus.FOUND and again.method == "cache"
    assert again.path.vertex_list() == first.path.vertex_list()


def test_verify_rejects_tampering():
    cyc = find_ham_cycle((2, 2, 1))
    cert = cyc.to_certificate()
    assert verify((2, 2, 1), cert).ok
    bad = type(cert)(cert.a, cert.kind, cert.start, cert.flips[:-2] + (cert.flips[-1], cert.flips[-2]))
    assert not verify((2, 2, 1), bad).ok
    short = type(cert)(cert.a, "path", cert.start, cert.flips[:-2])
    assert not verify((2, 2, 1), short).ok
    assert not verify((2, 1, 1, 1), cert).ok
    assert not verify((2, 2, 1), cert.to_hampath(), expect="laceable-endpoints").ok


def test_verify_endpoint_expectations():
    a = as_partition((1, 1, 1, 1))
    x = (1, 2, 3, 4)
    y = next(v for v in enumerate_vertices(a) if inversion_parity(v) != inversion_parity(x) and v != x)
    path = search_ham_path(a, x, y).path
    assert verify(a, path, "laceable-endpoints").ok
    a = as_partition((3, 2, 1))
    path = search_ham_path(a, (1, 1, 1, 2, 2, 3), (2, 1, 1, 1, 2, 3)).path
    assert verify(a, path, "L1-endpoints").ok


def test_pq_values():
    expected = {(1, 1): (3, 1), (1, 2): (2, 1), (1, 3): (3, 1), (2, 1): (1, 2), (2, 2): (3, 2), (2, 3): (3, 2)}
    for (s, t), value in expected.items():
        assert pq(3, s, t) == value
    assert pq(4, 1, 4) == (4, 1) and pq(4, 2, 1) == (1, 2)
    with pytest.raises(ValueError):
        pq(3, 3, 1)


@pytest.mark.parametrize("parts,prop,holds", [
    ((1, 1, 1), "H", False), ((1, 1, 1), "E", True), ((1, 1, 1), "L", False),
    ((2, 2), "E", True), ((2, 2), "L", False),
    ((2, 1, 1), "L1", False), ((2, 1, 1), "E", False), ((2, 1, 1), "C", True),
    ((2, 2, 1), "H", True),
])
def test_small_properties(parts, prop, holds):
    assert check_property(parts, prop).holds is holds


def test_property_threads_match_serial():
    a = (3, 2, 1)
    serial = check_property(a, "L1", stop_at_failure=False)
    threaded = check_property(a, "L1", stop_at_failure=False, threads=3)
    assert (serial.holds, serial.pairs_checked, serial.counterexample) == \
        (threaded.holds, threaded.pairs_checked, threaded.counterexample)


def test_unreduced_property_check_agrees():
    for prop in ("H", "L1", "E"):
        assert check_property((2, 1, 1), prop).holds == check_property((2, 1, 1), prop, reduce=False).holds


def test_inapplicable_properties():
    assert check_property((2, 2, 1), "L").applicable is False
    assert check_property((3, 2, 1), "L12").applicable is False
    assert check_property((2, 2, 1), "L12").holds is True


def test_l12_positions_only_for_matching_pairs():
    x, y = (1, 1, 2, 2, 3), (2, 1, 1, 2, 3)
    for i in l12_positions(x, y):
        assert 2 <= i <= len(x)


def test_table1_row_verdict():
    row = table1_row((2, 1, 1))
    assert row.vertices == 12 and row.verdict == "C but not E"
    assert row.as_dict()["verdict"] == "C but not E"
    assert table1_row((2, 2, 1)).verdict == "H"
    ham_lab.set_cache(None)
