import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from stargray.ham_lab import verify
from stargray.middle_levels import (
    MiddleLevelsError, alternating_path, automorphism_h, build_factor, canonical_class, check_alternating,
    check_factor_laws, count_cycles, count_plane_classes, cycle_edges, cycle_M_prime, dyck_words, f, g,
    factor_hamilton_cycle, gluing_cycle, gluing_pairs, hamming, hat, is_dyck, is_gluing_pair,
    labeled_tree_words, laceable_path, map_pair, apply_coordinate_map, potential, rho, shift_and_tree,
    short_strings, sigma, spanning_gluing_set, star, suppressed, to_full, from_full, trace_cycle,
)


def test_dyck_words_are_catalan():
    for n in range(1, 9):
        words = dyck_words(n)
        assert len(words) == math.comb(2 * n - 2, n - 1) // n
        assert all(is_dyck(w) for w in words)
        assert words == sorted(words)


def test_is_dyck():
    assert is_dyck((1, 0, 1, 0)) and is_dyck(())
    assert not is_dyck((0, 1)) and not is_dyck((1, 1, 0))


def test_sigma_rotates():
    assert sigma((1, 2, 3, 4), 1) == (2, 3, 4, 1)
    assert sigma((1, 2, 3, 4), -1) == (4, 1, 2, 3)


def test_suppressed_symbol():
    assert suppressed((0, 1, 0, 1, 1)) == 0
    assert suppressed((0, 1, 0, 0, 1)) == 1
    assert suppressed((0, 2, 0, 1, 1), (2, 1)) == 0
    assert suppressed((0, 1, 0, 1, 0), (2, 1)) == 2
    with pytest.raises(MiddleLevelsError):
        suppressed((0, 0, 0, 0, 0))
    with pytest.raises(MiddleLevelsError):
        suppressed((0, 1))


# plane trees on n vertices, 1..7 (OEIS A002995)
PLANE_TREES = {1: 1, 2: 1, 3: 1, 4: 2, 5: 3, 6: 6, 7: 14}


def brute_plane_classes(n):
    """Rotation classes of Dyck words, found by closing under rho from scratch."""
    seen, classes = set(), 0
    for w in dyck_words(n):
        if w in seen:
            continue
        classes += 1
        cur = w
        while cur not in seen:
            seen.add(cur)
            cur = rho(cur)
    return classes


@pytest.mark.parametrize("n", range(2, 8))
def test_plane_tree_counts(n):
    assert count_plane_classes(n) == PLANE_TREES[n] == brute_plane_classes(n)


def test_small_labeled_counts():
    assert count_plane_classes(3, (1, 1, 1)) == 3
    assert count_plane_classes(3, (2, 1)) == 2
    assert count_plane_classes(3, (3,)) == 1


def test_rho_is_rerooting():
    w = (1, 1, 0, 0, 1, 0)
    assert rho(w) == (1, 0, 1, 1, 0, 0)
    orbit = {w}
    cur = rho(w)
    while cur != w:
        orbit.add(cur)
        cur = rho(cur)
    assert canonical_class(w) == min(orbit)
    with pytest.raises(MiddleLevelsError):
        rho((0, 1))


def test_potential():
    assert potential(star(5)) == 4
    assert potential((1, 1, 1, 1, 0, 0, 0, 0)) == 6  # path on 5 vertices: floor(25/4)
    for n in range(3, 8):
        path = (1,) * (n - 1) + (0,) * (n - 1)
        assert potential(path) == n * n // 4
        assert potential(star(n)) == n - 1


def test_short_strings_count():
    for n in range(2, 7):
        assert len(short_strings(n)) == 2 * math.comb(2 * n - 1, n)
    assert len(short_strings(4, (3, 1))) == 280
    assert len(short_strings(3, (1, 1, 1))) == math.factorial(6) // math.factorial(3)


@pytest.mark.parametrize("n,a", [(4, None), (5, None), (4, (3, 1)), (3, (1, 1, 1))])
def test_factor_steps_are_edges(n, a):
    for x in short_strings(n, a):
        y = f(x, a)
        assert hamming(x, y) == 1
        i = next(j for j in range(len(x)) if x[j] != y[j])
        assert y[i] == suppressed(x, a) and x[i] == suppressed(y, a)
        assert g(y, a) == x
        assert tuple(to_full(y, a)) != tuple(to_full(x, a))


@settings(max_examples=40)
@given(st.integers(3, 7).flatmap(lambda n: st.permutations([0] * n + [1] * (n - 1))))
def test_shift_and_tree_rebuilds_x(x):
    x = tuple(x)
    ell, t = shift_and_tree(x)
    assert is_dyck(t)
    assert sigma(t + (0,), -ell) == x


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("kind", ["n", "n-1,1", "ones"])
def test_factor_laws(n, kind):
    if kind == "n-1,1" and n < 2:
        return
    a = {"n": None, "n-1,1": (n - 1, 1), "ones": (1,) * n}[kind]
    if n >= 6 and kind == "ones":
        pytest.skip("covered by the acceptance suite")
    laws = check_factor_laws(n, a)
    assert laws.ok, laws.failure


def test_factor_summary():
    s = build_factor(4).summary()
    assert s["vertices"] == 70 and s["cycles"] == 2
    assert sum(int(k) * v for k, v in s["cycle_lengths"].items()) == 70


def test_gluing_pairs_shape():
    for n in range(4, 8):
        for x, y in gluing_pairs(n):
            assert is_gluing_pair(x, y)
            assert hat(x)[:3] == (1, 1, 0) and hat(y)[:3] == (1, 0, 1)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_gluing_cycles_are_six_cycles(n):
    factor = build_factor(n)
    for pair in gluing_pairs(n):
        cyc = gluing_cycle(pair)
        assert len(cyc) == 6
        assert count_cycles(cycle_edges(cyc)) == 1
        assert len({factor.cycle_of[v] for v in cyc}) in (1, 2)


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_spanning_set_lowers_potential(n):
    pairs = spanning_gluing_set(n)
    assert len(pairs) == count_plane_classes(n) - 1
    for x, y in pairs:
        assert potential(y) == potential(x) - 1


@pytest.mark.parametrize("n", [4, 5, 6])
def test_factor_hamilton_cycle(n):
    seq = factor_hamilton_cycle(n)
    assert len(seq) == len(set(seq)) == 2 * math.comb(2 * n - 1, n)
    for i, v in enumerate(seq):
        assert hamming(v, seq[(i + 1) % len(seq)]) == 1


@settings(max_examples=30)
@given(st.permutations([0] * 5 + [1] * 4))
def test_h_is_an_involution_preserving_edges(x):
    x = tuple(x)
    assert automorphism_h(automorphism_h(x)) == x
    y = f(x)
    assert hamming(automorphism_h(x), automorphism_h(y)) == 1


def test_map_pair():
    x1, y1 = (0, 0, 1, 1, 0), (1, 0, 1, 0, 1)
    x2, y2 = (1, 0, 0, 0, 1), (1, 1, 0, 1, 0)
    p = map_pair(x1, y1, x2, y2)
    assert apply_coordinate_map(p, x1) == x2 and apply_coordinate_map(p, y1) == y2
    with pytest.raises(MiddleLevelsError):
        map_pair(x1, y1, x2, x2)


def test_full_round_trip():
    for x in short_strings(4):
        z = to_full(x)
        assert from_full(z) == x and sorted(z) == [1] * 4 + [2] * 4


@pytest.mark.parametrize("n", [5, 6])
def test_alternating_path_distances(n):
    factor = build_factor(n)
    for i in range(1, n + 1):
        path = alternating_path(n, i)
        assert hamming(path[0], path[-1]) == 2 * i - 1
        spliced = check_alternating(path, factor)
        assert spliced[0] == path[0] and spliced[-1] == path[-1]
    with pytest.raises(MiddleLevelsError):
        alternating_path(n, n + 1)


def test_check_alternating_rejects_bad_paths():
    path = alternating_path(5, 2)
    with pytest.raises(MiddleLevelsError):
        check_alternating(path[:-1])
    with pytest.raises(MiddleLevelsError):
        check_alternating(path[1:-1] + path[:1])


@pytest.mark.parametrize("n", [4, 5])
def test_laceable_path_small(n):
    m = 2 * n - 1
    x = (0,) * n + (1,) * (n - 1)
    for d in range(1, m + 1, 2):
        y = list(x)
        for j in range((d + 1) // 2):
            y[j] = 1
        for j in range((d - 1) // 2):
            y[n + j] = 0
        path = laceable_path(n, x, tuple(y))
        assert verify(path.a, path).ok
        assert from_full(path.start) == x and from_full(path.end) == tuple(y)


def test_laceable_path_argument_checks():
    with pytest.raises(MiddleLevelsError):
        laceable_path(5, (0,) * 9, (1,) * 9)
    with pytest.raises(MiddleLevelsError):
        laceable_path(5, (0, 1), (1, 0))


def test_cycle_m_prime_four():
    cyc = cycle_M_prime(4)
    assert cyc.kind == "cycle" and len(cyc) == 280
    assert verify(cyc.a, cyc, "cycle").ok
    assert cyc.a.parts == (4, 3, 1)


def test_trace_cycle_rejects_two_cycles():
    a = [(0, 0), (0, 1), (1, 1), (1, 0)]
    b = [(2, 0), (2, 1), (3, 1)]
    assert trace_cycle(cycle_edges(a)) is not None
    assert trace_cycle(cycle_edges(a) | cycle_edges(b)) is None
    assert count_cycles(cycle_edges(a) | cycle_edges(b)) == 2


def test_labeled_tree_words_count():
    # D_3(1,1,1): 2 skeletons, 3 roots, 2 labelings of the other two
    assert len(labeled_tree_words(3, (1, 1, 1))) == 12
    assert len(labeled_tree_words(3, (3,))) == 2
    assert list(itertools.islice(labeled_tree_words(3, (2, 1)), 1))


def test_factor_laws_need_two_vertices():
    with pytest.raises(MiddleLevelsError):
        check_factor_laws(1)
