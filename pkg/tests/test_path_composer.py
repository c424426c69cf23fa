import itertools
import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from stargray.flip_graph import enumerate_vertices, inversion_parity
from stargray.ham_lab import verify
from stargray.partition_core import as_partition
from stargray.path_composer import (
    MATCHING_CASES, Composer, CompositionError, PQTable, UnsupportedInstance, admissible,
    block_property, brute_force_matchings, check_matching, compose_H1, compose_H1p, compose_H1pp,
    compose_H2, compose_H2p, compose_H2pp, compose_L12, compose_T1k, compose_Tp, gray_code,
    is_conditional, matching_perms, route, warmup_partitions,
)


def admissible_args(k, case):
    if case in ("oa", "ea"):
        return [(a, b, None) for a in range(1, k + 1) for b in range(1, k + 1) if a != b]
    return [(None, None, c) for c in range(2, k + 1)]


def matching_instances(ks):
    for k in ks:
        for case in MATCHING_CASES:
            if (case[0] == "o") == (k % 2 == 1):
                for args in admissible_args(k, case):
                    yield k, case, args


@pytest.mark.parametrize("k,case,args", list(matching_instances([3, 4, 5])))
def test_matching_against_exhaustive_search(k, case, args):
    pi, rho = matching_perms(k, case, *args)
    assert check_matching(k, case, *args, pi, rho)
    assert (pi, rho) in set(brute_force_matchings(k, case, *args))


@pytest.mark.parametrize("k,case,args", list(matching_instances([6, 7, 8, 9])))
def test_matching_larger_k(k, case, args):
    pi, rho = matching_perms(k, case, *args)
    assert check_matching(k, case, *args, pi, rho)


def test_matching_argument_checks():
    with pytest.raises(ValueError):
        matching_perms(4, "oa", 1, 2)
    with pytest.raises(ValueError):
        matching_perms(5, "oa", 2, 2)
    with pytest.raises(ValueError):
        matching_perms(5, "ob1", c=1)
    with pytest.raises(ValueError):
        matching_perms(5, "zz")


def test_check_matching_rejects_non_permutations():
    assert not check_matching(3, "oa", 1, 2, None, (1, 1, 2), (1, 3, 2))


def test_pq_table():
    t = PQTable(3)
    assert t(1, 1) == (3, 1)
    assert len(t.rows()) == 6
    with pytest.raises(ValueError):
        PQTable(5)


@pytest.mark.parametrize("parts,expected", [
    ((2, 1), "negative"), ((1, 1), "trivial"), ((2, 2), "lab"), ((5, 5), "lab-conditional"),
    ((1, 1, 1, 1, 1), "T1k"), ((2, 1, 1, 1, 1), "Tp"), ((2, 2, 1), "lab"), ((3, 2, 2), "H1p"),
    ((3, 2, 1, 1), "H1pp"), ((4, 2, 1, 1, 1), "H1"), ((3, 3, 2), "H2p"), ((3, 3, 1, 1), "H2pp"),
    ((2, 2, 2), "H2"), ((5, 5, 1), "L12"),
])
def test_route(parts, expected):
    assert route(parts) == expected


def test_route_for_l12_requests():
    assert route((3, 3, 1), "L12") == "L12"
    assert route((3, 3, 1)) == "lab"


def test_conditional_instances():
    assert is_conditional((5, 4, 2))
    assert not is_conditional((4, 4, 1))
    with pytest.raises(UnsupportedInstance):
        gray_code((5, 4, 2))
    with pytest.raises(UnsupportedInstance):
        gray_code((3, 1))


def test_block_property():
    assert block_property(as_partition((3, 3))) == "L"
    assert block_property(as_partition((3, 2, 1))) == "L1"
    assert block_property(as_partition((3, 3, 1))) == "L12"
    assert block_property(as_partition((1, 1, 1, 1))) == "L"
    assert block_property(as_partition((2, 2, 1))) == "H"


def test_admissible():
    b = as_partition((2, 2))
    assert admissible(b, "L", (1, 1, 2, 2), (2, 1, 1, 2))
    assert not admissible(b, "L", (1, 1, 2, 2), (1, 2, 1, 2))
    b = as_partition((3, 2, 1))
    assert admissible(b, "L1", (1, 1, 1, 2, 2, 3), (3, 1, 1, 2, 2, 1))
    assert not admissible(b, "H", (1, 1, 1, 2, 2, 3), (1, 1, 1, 2, 2, 3))


def test_warmup_partitions():
    assert [b.parts for b in warmup_partitions(3)] == [(2, 2), (2, 1, 1), (3, 3), (3, 2, 1), (3, 1, 1, 1)]


def _random_pair(a, rng, laceable=False):
    vs = list(enumerate_vertices(a, cap=None))
    while True:
        x, y = rng.sample(vs, 2)
        if not laceable or inversion_parity(x) != inversion_parity(y):
            return x, y


COMPOSE_CASES = [
    (compose_H2, (2, 2, 2)),
    (compose_H2, (2, 2, 1, 1)),
    (compose_H1p, (3, 2, 2)),
    (compose_H1pp, (3, 2, 1, 1)),
    (compose_H1, (3, 2, 1, 1)),
    (compose_H2p, (3, 3, 2)),
    (compose_H2pp, (3, 3, 1, 1)),
    (compose_Tp, (2, 1, 1, 1, 1)),
]


@pytest.mark.parametrize("fn,parts", COMPOSE_CASES, ids=lambda v: getattr(v, "__name__", str(v)))
def test_compositions_verify(fn, parts):
    a = as_partition(parts)
    rng = random.Random(11)
    oracle = Composer()
    for _ in range(6):
        x, y = _random_pair(a, rng)
        path = fn(a, x, y, oracle=oracle)
        assert verify(a, path).ok
        assert (path.start, path.end) == (x, y)


def test_t1k_laceable():
    rng = random.Random(5)
    a = as_partition((1,) * 5)
    for _ in range(6):
        x, y = _random_pair(a, rng, laceable=True)
        path = compose_T1k(5, x, y, oracle=Composer())
        assert verify(a, path, "laceable-endpoints").ok


def test_l12_composition():
    a = as_partition((3, 3, 1))
    x, y = (1, 1, 1, 2, 2, 2, 3), (2, 1, 1, 2, 1, 2, 3)
    assert admissible(a, "L12", x, y)
    path = compose_L12(a, x, y, oracle=Composer())
    assert verify(a, path).ok and (path.start, path.end) == (x, y)


def test_h1_with_distinct_first_symbols():
    a = as_partition((4, 2, 1, 1, 1))
    vs = list(enumerate_vertices(a, cap=None))
    rng = random.Random(2)
    for _ in range(3):
        x, y = rng.sample(vs, 2)
        path = compose_H1(a, x, y, oracle=Composer())
        assert verify(a, path).ok


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from([(2, 2, 2), (3, 2, 2), (2, 2, 1, 1), (3, 3, 1), (2, 2, 2, 1)]), st.randoms(use_true_random=False))
def test_gray_code_random_pairs(parts, rnd):
    a = as_partition(parts)
    x, y = _random_pair(a, rnd)
    path = gray_code(a, x, y)
    assert verify(a, path).ok and (path.start, path.end) == (x, y)


@pytest.mark.parametrize("parts", [(1, 1), (2, 2, 1), (2, 2, 2), (3, 2, 1, 1), (1, 1, 1, 1, 1)], ids=str)
def test_gray_code_cycle(parts):
    cyc = gray_code(parts, mode="cycle")
    assert cyc.kind == "cycle" and verify(parts, cyc, "cycle").ok


def test_gray_code_default_endpoints_are_deterministic():
    p1 = gray_code((2, 2, 2))
    p2 = gray_code((2, 2, 2))
    assert p1.vertex_list() == p2.vertex_list()


def test_composer_records_plans():
    c = Composer(record=True)
    c.solve((2, 2, 2), (1, 1, 2, 2, 3, 3), (3, 3, 2, 2, 1, 1))
    assert c.plans


def test_lab_refusal_surfaces():
    c = Composer()
    with pytest.raises(CompositionError):
        c.lab(as_partition((3, 1)), (1, 1, 1, 2), (2, 1, 1, 1))


def test_same_endpoint_rejected():
    with pytest.raises(ValueError):
        gray_code((2, 2, 2), (1, 1, 2, 2, 3, 3), (1, 1, 2, 2, 3, 3))


def test_all_pairs_small_instance():
    a = as_partition((2, 2, 1))
    c = Composer()
    for x, y in itertools.combinations(list(enumerate_vertices(a)), 2):
        assert verify(a, c.solve(a, x, y)).ok
