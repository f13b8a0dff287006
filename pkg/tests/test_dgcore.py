import pytest
from hypothesis import given, settings, strategies as st

from cochaindg.atlas import (
    cone_example,
    dz_algebra,
    random_module,
    sphere_algebra,
    standard_algebras,
    standard_modules,
    wedge_algebra,
)
from cochaindg.complex import OutsideWindowError, Window
from cochaindg.dgcore import (
    AlgebraMismatchError,
    DGAlgebra,
    DGModule,
    algebra_as_module,
    change_of_basis,
    combine_morphisms,
    cone,
    direct_sum,
    dual,
    free_module,
    free_morphism,
    hom_space,
    shift_module,
    trivial_k_module,
    validate_algebra,
    validate_module,
)
from cochaindg.exactfield import GF, QQ, Matrix


@pytest.mark.parametrize("field", [QQ, GF(5)], ids=repr)
def test_atlas_algebras_validate(field):
    for A in standard_algebras(field) + [dz_algebra(field)]:
        rep = validate_algebra(A)
        assert rep.ok, rep.summary()


@pytest.mark.parametrize("field", [QQ, GF(5)], ids=repr)
def test_standard_modules_and_duals_validate(field):
    for A in [sphere_algebra(2, field), wedge_algebra([2, 3], field), dz_algebra(field)]:
        for M in standard_modules(A):
            assert validate_module(M).ok, (A.name, M.name)
            assert validate_module(dual(M)).ok, (A.name, M.name)


def test_nonassociative_algebra_detected():
    # x*x = w, x*w = w*x = u is associative; changing w*x to 2u breaks it
    dims = {0: 1, 2: 1, 4: 1, 6: 1}
    x, w = (2, 0), (4, 0)
    A = DGAlgebra(QQ, dims, {(x, x): {0: 1}, (x, w): {0: 1}, (w, x): {0: 1}}, name="good")
    assert validate_algebra(A).ok
    B = DGAlgebra(QQ, dims, {(x, x): {0: 1}, (x, w): {0: 1}, (w, x): {0: 2}}, name="bad2")
    rep = validate_algebra(B)
    assert not rep.ok
    assert any(v.kind == "associativity" for v in rep.violations)


def test_degree_one_rejected():
    A = DGAlgebra(QQ, {0: 1, 1: 1})
    rep = validate_algebra(A)
    assert any("degree-1" in v.kind for v in rep.violations)


def test_leibniz_violation_named():
    A = sphere_algebra(2)
    # d m0 = m1 and x m1 = m3, but x m0 = 0: d(x m0) = 0 while x (d m0) = m3
    d = {0: Matrix.from_lists(QQ, [[1]])}
    act = {((2, 0), 1): Matrix.from_lists(QQ, [[1]])}
    M = DGModule(A, "left", {0: 1, 1: 1, 3: 1}, d, act, name="bad")
    rep = validate_module(M)
    assert not rep.ok
    kinds = {v.kind for v in rep.violations}
    assert "Leibniz" in kinds


def test_cone_of_top_class_cohomology():
    A = sphere_algebra(2)
    C = cone_example(A)
    assert validate_module(C).ok
    assert C.cohomology().H.dims == {0: 1, 3: 1}


def test_shift_and_sum():
    A = sphere_algebra(3)
    R = algebra_as_module(A)
    S = shift_module(R, -2)
    assert S.dims == {2: 1, 5: 1}
    assert validate_module(S).ok
    T = direct_sum(R, S)
    assert T.dims == {0: 1, 2: 1, 3: 1, 5: 1}
    assert validate_module(T).ok


def test_dual_degrees_and_sides():
    A = sphere_algebra(2)
    R = algebra_as_module(A)
    D = dual(R)
    assert D.side == "right"
    assert D.dims == {0: 1, -2: 1}
    assert dual(D).side == "left"
    assert dual(D).dims == R.dims


def test_mismatched_algebras():
    A, B = sphere_algebra(2), sphere_algebra(2)
    with pytest.raises(AlgebraMismatchError):
        direct_sum(algebra_as_module(A), algebra_as_module(B))


def test_unknown_action_outside_window():
    A = sphere_algebra(2, window=Window(-100, 1))
    M = DGModule(A, "left", {0: 1}, window=Window(-100, 1))
    with pytest.raises(OutsideWindowError):
        M.action((2, 0), 0)


def test_free_module_and_morphism():
    A = wedge_algebra([2, 3])
    F = free_module(A, [("e", 1)])
    assert validate_module(F).ok
    R = algebra_as_module(A)
    # a generator of degree 2 sent to the cycle x2
    F2 = free_module(A, [("e", 2)])
    f = free_morphism(F2, R, [{0: QQ.one}])
    assert f.validate().ok
    assert validate_module(cone(f)).ok


def test_hom_space_maps_are_morphisms():
    A = sphere_algebra(2)
    R = algebra_as_module(A)
    X = shift_module(R, -2)
    basis = hom_space(X, R)
    assert len(basis) == 1
    for f in basis:
        assert f.validate().ok
    g = combine_morphisms(X, R, basis, [QQ(3)])
    assert g.validate().ok


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_random_modules_validate(seed):
    A = sphere_algebra(2)
    M = random_module(A, seed)
    assert validate_module(M).ok
    assert validate_module(dual(M)).ok


def test_change_of_basis_preserves_cohomology():
    A = sphere_algebra(2)
    M = direct_sum(algebra_as_module(A), shift_module(trivial_k_module(A), -2))
    mats = {2: Matrix.from_lists(QQ, [[1, 1], [0, 1]])}
    N = change_of_basis(M, mats)
    assert validate_module(N).ok
    assert N.cohomology().H.dims == M.cohomology().H.dims
