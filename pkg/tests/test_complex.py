import pytest
from hypothesis import given, settings, strategies as st

from cochaindg.complex import (
    INF,
    CochainComplex,
    GradedSpace,
    InvalidComplexError,
    OutsideWindowError,
    Window,
    cohomology,
    cohomology_dims,
    inf_sup_amp,
    shift_complex,
)
from cochaindg.exactfield import GF, QQ, Matrix


def two_term(field=QQ, window=None):
    # k --1--> k in degrees 0, 1 plus a lone k in degree 3
    d = {0: Matrix.from_lists(field, [[1]])}
    return CochainComplex(field, {0: 1, 1: 1, 3: 1}, d, window or Window.complete())


def test_window_algebra():
    w = Window(0, 8)
    assert 0 in w and 8 in w and 9 not in w
    assert w.shift(2) == Window(-2, 6)
    assert w.negate() == Window(-8, 0)
    assert w.interior() == Window(1, 7)
    assert w.intersect(Window(-INF, 3)) == Window(0, 3)
    assert Window.make(5, 2).empty
    assert Window.complete().is_complete
    assert str(Window(-INF, 3)) == "[-inf, 3]"


def test_graded_space_outside_window_raises():
    H = GradedSpace({0: 1}, Window(0, 4))
    assert H.dim(2) == 0
    with pytest.raises(OutsideWindowError):
        H.dim(5)


def test_d_squared_checked():
    d = {0: Matrix.from_lists(QQ, [[1]]), 1: Matrix.from_lists(QQ, [[1]])}
    with pytest.raises(InvalidComplexError) as exc:
        CochainComplex(QQ, {0: 1, 1: 1, 2: 1}, d)
    assert exc.value.degree == 0


def test_cohomology_of_small_complex():
    c = two_term()
    H = cohomology(c)
    assert H.H.dims == {3: 1}
    assert H.reps(3) == [(1,)]


def test_cohomology_window_is_interior():
    c = two_term(window=Window(0, 3))
    H = cohomology(c)
    assert H.window == Window(1, 2)
    with pytest.raises(OutsideWindowError):
        H.dim(3)


def test_extent_conventions():
    assert inf_sup_amp(GradedSpace({}, Window.complete())).as_tuple() == (INF, -INF, -INF, "exact")
    e = inf_sup_amp(GradedSpace({2: 1, 5: 3}, Window.complete()))
    assert (e.inf, e.sup, e.amp, e.certainty) == (2, 5, 3, "exact")
    e = inf_sup_amp(GradedSpace({2: 1}, Window(-INF, 6)))
    assert e.certainty == "lower-bound-only"


def test_shift_complex():
    c = shift_complex(two_term(), 2)
    assert cohomology(c).H.dims == {1: 1}


def test_classify_cycle():
    c = two_term()
    H = cohomology(c)
    assert H.classify(3, (2,)) == (2,)


@st.composite
def random_complexes(draw, field):
    dims = {j: draw(st.integers(0, 3)) for j in range(4)}
    d = {}
    prev = None
    for j in range(3):
        if not dims[j] or not dims[j + 1]:
            prev = None
            continue
        # d^j = B[j] * (projection killing the image of d^{j-1})
        rows = [[draw(st.integers(-2, 2)) for _ in range(dims[j])] for _ in range(dims[j + 1])]
        m = Matrix.from_lists(field, rows)
        if prev is not None and not (m @ prev).is_zero():
            m = Matrix.zero(field, dims[j + 1], dims[j])
        d[j] = m
        prev = m
    return CochainComplex(field, dims, d)


@settings(max_examples=50, deadline=None)
@given(random_complexes(QQ))
def test_euler_characteristic(c):
    H = cohomology(c).H
    chi_c = sum((-1) ** j * n for j, n in c.dims.items())
    chi_h = sum((-1) ** j * n for j, n in H.dims.items())
    assert chi_c == chi_h
    assert cohomology_dims(c) == H


@settings(max_examples=30, deadline=None)
@given(random_complexes(GF(5)))
def test_reps_are_independent_cycles(c):
    H = cohomology(c)
    for j in H.H.support:
        for z in H.reps(j):
            if j in c._d:
                assert not any(c.differential(j).apply(z))
