import pytest
from hypothesis import given, settings, strategies as st

from cochaindg.atlas import (
    RandomProfile,
    cone_example,
    dz_algebra,
    random_module,
    sphere_algebra,
    wedge_algebra,
)
from cochaindg.complex import INF, Window, cohomology_dims
from cochaindg.derived import betti_via_bar
from cochaindg.dgcore import (
    algebra_as_module,
    direct_sum,
    shift_module,
    trivial_k_module,
    validate_module,
    zero_module,
)
from cochaindg.tower import (
    CompactCertificate,
    NothingToKillError,
    betti_numbers,
    build_tower,
    is_compact_within,
    kill_bottom,
    module_inf,
    pcd,
)

S2 = sphere_algebra(2)


def test_free_module_has_single_betti_number():
    t = build_tower(shift_module(algebra_as_module(S2), -3), 10)
    assert t.terminated and t.termination_level == 3
    assert t.betti == {3: 1}
    assert t.certificate() == [(3, 1)]


def test_k_over_sphere_never_terminates():
    t = build_tower(trivial_k_module(S2), 8)
    assert not t.terminated
    assert t.betti == {j: 1 for j in range(9)}
    p = pcd(trivial_k_module(S2), 8)
    assert p.certainty == "at-least"
    assert str(p) == "at-least 8 (window-limited)"
    nt = is_compact_within(trivial_k_module(S2), 8)
    assert not nt
    assert nt.u == 8


def test_cone_instance():
    C = cone_example(S2)
    t = build_tower(C, 10)
    assert t.betti == {0: 1, 1: 1}
    assert pcd(C, 10).value == 1
    cert = is_compact_within(C, 10)
    assert isinstance(cert, CompactCertificate)
    assert cert.pieces == ((0, 1), (1, 1))
    assert cert.inf == 0


def test_zero_module():
    t = build_tower(zero_module(S2), 5)
    assert t.terminated and t.termination_level == -INF
    with pytest.raises(NothingToKillError):
        kill_bottom(zero_module(S2))
    assert module_inf(zero_module(S2)) == (INF, True)


def test_gaps_in_levels_are_recorded():
    M = direct_sum(algebra_as_module(S2), shift_module(algebra_as_module(S2), -4))
    t = build_tower(M, 10)
    assert [s.level for s in t.steps] == [0, 1, 2, 3, 4]
    assert t.betti == {0: 1, 4: 1}
    space = t.betti_space()
    assert space.window.is_complete
    assert space.dim(2) == 0


def test_window_limited_algebra_is_not_certified():
    A = sphere_algebra(2, window=Window(-INF, 6))
    R = algebra_as_module(A)
    assert R.window == Window(-INF, 6)
    t = build_tower(R, 20)
    assert not t.terminated
    p = pcd(R, 20)
    assert p.certainty == "at-least"
    # the Betti numbers found inside the window are still exact ...
    assert t.betti == {0: 1}
    # ... but vanishing above the window can never be certified
    assert pcd(R, 4).certainty == "at-least"


@pytest.mark.parametrize("A,expected", [
    (wedge_algebra([2, 3]), [1, 1, 2, 3, 5, 8, 13, 21]),
    (dz_algebra(), [1, 1, 1, 1, 2, 3, 4, 5]),
    (sphere_algebra(3), [1, 0, 1, 0, 1, 0, 1, 0]),
])
def test_loop_betti_numbers(A, expected):
    b = betti_numbers(trivial_k_module(A), 7)
    assert [b.dim(j) for j in range(8)] == expected


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_tower_kills_cohomology_below_level(seed):
    M = random_module(S2, seed)
    t = build_tower(M, 6)
    for s in t.steps:
        H = cohomology_dims(s.next.complex)
        assert all(H.dim(j) == 0 for j in H.support if j <= s.level)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_tower_matches_bar_on_random_modules(seed):
    A = wedge_algebra([2, 3]) if seed % 2 else S2
    M = random_module(A, seed, RandomProfile(gmax=3, blocks=2))
    lo = min(M.dims, default=0)
    tw = betti_numbers(M, lo + 8)
    bar = betti_via_bar(M, lo + 8)
    for j in range(lo - 1, lo + 9):
        assert tw.dim(j) == bar.dim(j)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.integers(-3, 3))
def test_pcd_under_suspension(seed, s):
    M = random_module(S2, seed, RandomProfile(kinds=("R",), gmax=3, blocks=2))
    N = shift_module(M, s)
    assert validate_module(N).ok
    p, q = pcd(M, 10), pcd(N, 13)
    assert p.certainty == q.certainty == "exact"
    assert q.value == (p.value - s if p.value != -INF else -INF)


def test_compact_random_modules_terminate():
    for seed in range(10):
        M = random_module(S2, seed, RandomProfile(kinds=("R",)))
        assert is_compact_within(M, 12), seed
