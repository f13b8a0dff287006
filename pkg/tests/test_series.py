import pytest
from hypothesis import given, settings, strategies as st

from cochaindg.atlas import cone_example, sphere_algebra, standard_modules, wedge_algebra
from cochaindg.complex import INF, Window
from cochaindg.dgcore import algebra_as_module, dual
from cochaindg.series import (
    WindowSeries,
    check_compact_inequalities,
    check_degree_identity,
    check_tower_inequalities,
    f_R_series,
    f_series,
    series_degree,
    termwise_leq,
)
from cochaindg.tower import pcd


def series_st():
    return st.builds(
        lambda coeffs, lo, width: WindowSeries({l: c for l, c in coeffs.items() if lo <= l <= lo + width}, Window(lo, lo + width)),
        st.dictionaries(st.integers(-5, 10), st.integers(0, 4), max_size=6),
        st.integers(-5, 2),
        st.integers(0, 10),
    )


def test_render_and_window():
    s = WindowSeries({0: 1, 3: 2}, Window(-INF, 6))
    assert s.render() == "1·t^0 + 2·t^3"
    assert s[5] == 0
    with pytest.raises(KeyError):
        s[7]
    assert WindowSeries.zero().render() == "0"


def test_negative_or_outside_coefficients_rejected():
    with pytest.raises(ValueError):
        WindowSeries({0: -1})
    with pytest.raises(ValueError):
        WindowSeries({9: 1}, Window(0, 4))


def test_polynomial_product_shrinks_window():
    s = WindowSeries({0: 1}, Window(0, 5))
    p = s.times_polynomial({1: 1, 2: 3})
    assert p.window == Window(2, 6)
    assert p.coeffs == {2: 3}


def test_shift():
    s = WindowSeries({0: 1}, Window(0, 5)).shift(-1)
    assert s.window == Window(-1, 4)
    assert s.coeffs == {-1: 1}


def test_termwise_leq_reports_first_violation():
    a = WindowSeries({0: 1, 2: 3}, Window(0, 4))
    b = WindowSeries({0: 2, 2: 1}, Window(-INF, 3))
    v = termwise_leq(a, b)
    assert v.holds is False and v.first_violation == 2
    assert termwise_leq(a.restrict(Window(0, 1)), b).holds
    v = termwise_leq(a, WindowSeries({}, Window(10, 12)))
    assert v.holds is None


def test_series_degree():
    s = WindowSeries({0: 1, 3: 2}, Window(-INF, 6))
    assert str(series_degree(s)) == "at-least 3"
    assert series_degree(s, certified=True).value == 3
    assert series_degree(WindowSeries.zero()).value == -INF


@settings(max_examples=50, deadline=None)
@given(series_st(), series_st())
def test_addition_commutes_and_dominates(a, b):
    assert a + b == b + a
    assert termwise_leq(a.restrict((a + b).window), a + b).holds is not False


@settings(max_examples=50, deadline=None)
@given(series_st(), st.integers(-4, 4), st.integers(0, 3))
def test_shift_and_scale_laws(a, s, c):
    assert a.shift(s).shift(-s) == a
    assert a.scale(c).coeffs == {l: c * v for l, v in a.coeffs.items() if c}
    assert a.times_polynomial({s: 1}) == a.shift(s)


def test_f_series_of_cone():
    A = sphere_algebra(2)
    P = dual(algebra_as_module(A))
    C = cone_example(A)
    assert f_R_series(P).render() == "1·t^-2 + 1·t^0"
    f = f_series(P, C, 4, pcd_M=pcd(C, 10).value)
    assert f.window.is_complete
    assert f.render() == "1·t^-2 + 1·t^1"


@pytest.mark.parametrize("A", [sphere_algebra(2), sphere_algebra(3), wedge_algebra([2, 3])], ids=lambda A: A.name)
def test_series_inequalities_on_atlas(A):
    P = dual(algebra_as_module(A))
    for M in standard_modules(A):
        for u in range(0, 5):
            r = check_tower_inequalities(M, P, u)
            assert r.status == "verified", (M.name, u, str(r))
        for check in (check_compact_inequalities, check_degree_identity):
            r = check(M, P)
            assert r.status in ("verified", "inconclusive-window"), (M.name, str(r))
            if r.status == "inconclusive-window":
                assert M.name.startswith("k")
