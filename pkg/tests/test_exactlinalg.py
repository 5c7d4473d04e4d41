import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, strategies as st

from gradedreg import _kernels
from gradedreg.exactlinalg import (ExactMatrix, FieldSpec, column_span_complement, kernel_basis, rank, rref,
                                   solve)

from oracles import kernel_by_enumeration, rank_mod

F2, F3, Q = FieldSpec(2), FieldSpec(3), FieldSpec(0)
BIG = FieldSpec(1000003)


def mat(field, rows):
    return ExactMatrix.from_rows(field, rows)


def test_rref_identity():
    red, piv = rref(ExactMatrix.identity(F2, 2))
    assert red == ExactMatrix.identity(F2, 2) and piv == [0, 1]


def test_rref_rank_one():
    red, piv = rref(mat(F2, [[1, 1], [1, 1]]))
    assert red.tolist() == [[1, 1], [0, 0]] and piv == [0]


def test_rref_over_q():
    red, piv = rref(mat(Q, [[2, 4], [1, 3]]))
    assert red.tolist() == [[1, 0], [0, 1]] and piv == [0, 1]


def test_kernel_examples():
    assert kernel_basis(ExactMatrix.identity(F2, 3)).ncols == 0
    assert kernel_basis(ExactMatrix.zeros(F2, 2, 3)).ncols == 3
    k = kernel_basis(mat(F2, [[1, 1]]))
    assert k.tolist() == [[1], [1]]
    assert [v for v in kernel_by_enumeration([[1, 1]], 2, 2) if any(v)] == [(1, 1)]


def test_span_complement_examples():
    eye = ExactMatrix.identity(F2, 2)
    assert column_span_complement(eye, eye) == []
    assert column_span_complement(ExactMatrix.zeros(F2, 2, 0), eye) == [0, 1]
    assert column_span_complement(mat(F2, [[1], [1]]), eye) == [0]


def test_solve_roundtrip():
    b = mat(F3, [[1, 0], [2, 1], [0, 1]])
    x = mat(F3, [[1, 2, 0], [2, 2, 1]])
    assert solve(b, b @ x) == x


def test_solve_rejects_outside_span():
    with pytest.raises(ValueError):
        solve(mat(F2, [[1], [0]]), mat(F2, [[0], [1]]))


fields = st.sampled_from([F2, F3, FieldSpec(5), Q, BIG])


@st.composite
def matrices(draw, max_dim=7):
    field = draw(fields)
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    hi = 4 if field.characteristic in (0, 1000003) else field.characteristic - 1
    rows = draw(st.lists(st.lists(st.integers(-hi if field.characteristic == 0 else 0, hi), min_size=c, max_size=c),
                         min_size=r, max_size=r))
    return field, r, c, rows


def build(field, r, c, rows):
    return ExactMatrix.from_rows(field, rows) if r else ExactMatrix.zeros(field, 0, c)


@given(matrices())
def test_rref_idempotent(data):
    m = build(*data)
    red, piv = rref(m)
    red2, piv2 = rref(red)
    assert red2 == red and piv2 == piv


@given(matrices())
def test_rank_nullity(data):
    field, r, c, rows = data
    m = build(*data)
    assert rank(m) + kernel_basis(m).ncols == c
    if r and c:
        assert rank(m) == rank_mod(rows, field.characteristic)


@given(matrices())
def test_kernel_is_annihilated(data):
    m = build(*data)
    k = kernel_basis(m)
    assert (m @ k).is_zero()
    assert rank(k) == k.ncols


@given(matrices())
def test_deterministic(data):
    a, b = build(*data), build(*data)
    assert rref(a)[0].tolist() == rref(b)[0].tolist()
    assert kernel_basis(a).tolist() == kernel_basis(b).tolist()


@given(st.integers(1, 40), st.integers(1, 40), st.sampled_from([2, 3, 7]), st.integers(0, 2 ** 32 - 1))
def test_kernel_backends_agree(r, c, p, seed):
    a = np.random.default_rng(seed).integers(0, p, size=(r, c), dtype=np.int64)
    x, y = a.copy(), a.copy()
    px = _kernels.rref_modp_numpy(x, p)
    if _kernels.HAVE_NUMBA:
        py = _kernels.rref_modp_numba(y, p)
        assert np.array_equal(px, py) and np.array_equal(x, y)
    assert len(px) == rank_mod(a.tolist(), p)


def test_algebra_ops():
    a = mat(F3, [[1, 2], [0, 1]])
    assert (a - a).is_zero()
    assert a.T.tolist() == [[1, 0], [2, 1]]
    assert (a @ ExactMatrix.identity(F3, 2)) == a
    assert a.scale(2).tolist() == [[2, 1], [0, 2]]
    assert ExactMatrix.identity(F3, 2).kron(a).shape == (4, 4)
    assert mat(Q, [[Fraction(1, 2)]]).scale(2).tolist() == [[1]]
