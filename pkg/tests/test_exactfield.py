from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cochaindg.exactfield import (
    GF,
    QQ,
    EchelonBasis,
    FieldMismatchError,
    Matrix,
    block_diagonal,
    complement_basis,
    hstack,
    image_basis,
    kernel_basis,
    kernel_basis_sparse,
    parse_field,
    product_is_zero,
    rref,
    solve,
    sparse_rank,
    vstack,
)


def matrices(field, max_rows=6, max_cols=6):
    entry = st.integers(-3, 3)
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(entry, min_size=c, max_size=c), min_size=r, max_size=r).map(
                lambda rows: Matrix.from_lists(field, rows)
            )
        )
    )


def test_field_coercion():
    assert QQ("3/4") == Fraction(3, 4)
    assert QQ(2) * QQ.inv(QQ(2)) == 1
    F = GF(5)
    assert F(7) == 2
    assert F(Fraction(1, 2)) == 3  # 2 * 3 = 6 = 1 mod 5
    assert F.inv(2) == 3
    with pytest.raises(ZeroDivisionError):
        F(Fraction(1, 5))
    with pytest.raises(TypeError):
        QQ(0.5)
    with pytest.raises(TypeError):
        F(True)


def test_prime_field_validation():
    with pytest.raises(ValueError):
        GF(4)
    with pytest.raises(ValueError):
        GF(1)
    assert GF(7) is GF(7)


def test_parse_field():
    assert parse_field("QQ") == QQ
    assert parse_field("GF(5)") == GF(5)
    assert parse_field("GF 7") == GF(7)
    with pytest.raises(ValueError):
        parse_field("RR")


def test_mixing_fields_raises():
    a = Matrix.identity(QQ, 2)
    b = Matrix.identity(GF(3), 2)
    with pytest.raises(FieldMismatchError):
        a @ b


def test_matrix_basics():
    m = Matrix.from_lists(QQ, [[1, 2], [3, 4]])
    assert m.shape == (2, 2)
    assert m[1, 0] == 3
    assert m.T[0, 1] == 3
    assert (m @ Matrix.identity(QQ, 2)) == m
    assert (m - m).is_zero()
    assert m.apply((1, 1)) == (3, 7)
    assert m.rank() == 2
    assert hstack(QQ, [m, m]).shape == (2, 4)
    assert vstack(QQ, [m, m]).shape == (4, 2)
    assert block_diagonal(QQ, [m, m]).rank() == 4


def test_rref_deterministic():
    m = Matrix.from_lists(QQ, [[0, 2, 4], [1, 1, 1], [1, 2, 3]])
    r, piv = rref(m)
    assert piv == [0, 1]
    assert r.entries == [[1, 0, -1], [0, 1, 2], [0, 0, 0]]
    assert rref(m) == (r, piv)


def test_kernel_one_vector_per_free_column():
    m = Matrix.from_lists(QQ, [[1, 1, 1]])
    ker = kernel_basis(m)
    assert len(ker) == 2
    for v in ker:
        assert m.apply(v) == (0,)
    assert [dict(v) for v in kernel_basis_sparse(m)] == [{0: -1, 1: 1}, {0: -1, 2: 1}]


def test_solve_and_inconsistent():
    m = Matrix.from_lists(QQ, [[1, 2], [2, 4]])
    x = solve(m, (3, 6))
    assert m.apply(x) == (3, 6)
    assert solve(m, (1, 0)) is None


def test_echelon_basis_coordinates():
    eb = EchelonBasis(QQ, 3, track=True)
    assert eb.add({0: 1, 1: 1})
    assert eb.add({1: 1, 2: 1})
    assert not eb.add({0: 1, 2: -1})  # dependent: first - second
    coords = eb.coordinates({0: 2, 1: 3, 2: 1})
    assert coords == {0: 2, 1: 1}
    assert eb.coordinates({2: 1}) is None


def test_complement_basis():
    comp = complement_basis(QQ, [(1, 1, 0)], 3)
    assert len(comp) == 2


def test_product_is_zero_over_qq():
    d1 = Matrix.from_lists(QQ, [[Fraction(1, 2)], [Fraction(1, 3)]])
    d2 = Matrix.from_lists(QQ, [[2, -3]])
    assert product_is_zero(d2, d1)
    assert not product_is_zero(d2, Matrix.from_lists(QQ, [[1], [0]]))


@settings(max_examples=60, deadline=None)
@given(matrices(QQ))
def test_rank_nullity_qq(m):
    assert m.rank() + len(kernel_basis(m)) == m.ncols
    assert sparse_rank(m) == len(rref(m)[1])
    assert len(image_basis(m)) == m.rank()


@settings(max_examples=60, deadline=None)
@given(matrices(GF(5)))
def test_rank_nullity_gf5(m):
    assert sparse_rank(m) == len(rref(m)[1])
    for v in kernel_basis(m):
        assert not any(m.apply(v))


@settings(max_examples=40, deadline=None)
@given(matrices(QQ, 4, 4), matrices(QQ, 4, 4))
def test_product_is_zero_matches_product(a, b):
    if a.ncols == b.nrows:
        assert product_is_zero(a, b) == (a @ b).is_zero()
