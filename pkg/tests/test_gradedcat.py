import pytest
from hypothesis import given, strategies as st

from gradedreg.errors import BadPieceIndex, MixedDegrees, UnsoundWindow
from gradedreg.gradedcat import (as_complex, direct_sum, fractional_veronese, fractional_veronese_algebra,
                                 homology, homology_module, identity_map, koszul_complex, mapping_cone,
                                 multiplication_map, phi_complex, phi_functor, pushforward, residue_field, shift,
                                 twist, twist_complex, veronese_algebra, veronese_piece, zero_map, zero_module)
from gradedreg.regmorph import frobenius_hom
from gradedreg.resolve import betti_table, module_regularity, regularity, resolve

from fixtures import cube, path, plane, quad, quotient, ring, xy


def hdims(c, i_range, j_range):
    return {(i, j): homology(c, i, j)[0] for i in i_range for j in j_range}


def test_twist_examples():
    R = xy()
    M = R.as_module()
    assert twist(M, 0) is M
    assert twist(M, 1).dims_list(0, 4) == [0, 1, 2, 2, 2]
    P = plane()
    assert module_regularity(twist(P.as_module(), 3), 4, 10).value == 3


def test_shift_examples():
    R = xy()
    c = koszul_complex([R.generator(0)], R.as_module())
    assert shift(c, 0) is c
    assert shift(c, 2).i_min == c.i_min - 2
    S = ring(2, "x", ("x^2",), 14)
    G = koszul_complex([S.generator(0)], S.as_module())
    base = regularity(betti_table(resolve(G, 6, 10))).value
    # (G[m])_i = G_{i+m}, so Tor moves down by m and j - i grows by m
    for m in (-2, -1, 1, 2):
        assert regularity(betti_table(resolve(shift(G, m), 6, 10))).value == base + m
        assert shift(G, m).i_min == G.i_min - m


def test_veronese_algebra_examples():
    R = xy()
    assert veronese_algebra(R, 1) is R
    V = veronese_algebra(R, 2)
    assert list(V.dims[:4]) == [1, 2, 2, 2] and V.ngens == 2
    P1 = ring(2, "x", (), 15)
    V3 = veronese_algebra(P1, 3)
    assert list(V3.dims[:5]) == [1, 1, 1, 1, 1] and V3.ngens == 1


def test_veronese_piece_examples():
    R = xy()
    V = veronese_algebra(R, 2)
    assert veronese_piece(R.as_module(), 2, 0, V).dims_list(0, 4) == [1, 2, 2, 2, 2]
    assert veronese_piece(R.as_module(), 2, 1, V).dims_list(0, 4) == [2, 2, 2, 2, 2]
    assert not veronese_piece(residue_field(R), 2, 1, V).dims
    with pytest.raises(BadPieceIndex):
        veronese_piece(R.as_module(), 2, 2, V)


def test_fractional_veronese_examples():
    R = xy()
    assert fractional_veronese_algebra(R, 1) is R
    Rh = fractional_veronese_algebra(R, 2)
    assert list(Rh.dims[:7]) == [1, 0, 2, 0, 2, 0, 2]
    M = quotient(R, ["x+y"])
    a = fractional_veronese(fractional_veronese(M, 2), 3)
    b = fractional_veronese(M, 6)
    assert a.dims == b.dims and a.algebra is b.algebra


def test_phi_left_inverse():
    R = xy()
    for M in (R.as_module(), quotient(R, ["x"]), residue_field(R)):
        back = phi_functor(fractional_veronese(M, 2), 2)
        assert back.algebra is R
        for j in range(0, 8):
            assert back.dim(j) == M.dim(j)
            for a in range(R.ngens):
                assert back.action(a, j) == M.action(a, j)
    Rh = fractional_veronese_algebra(R, 2)
    back = phi_functor(Rh.as_module(), 2)
    for j in range(8):
        assert back.action(0, j) == R.act(0, j)
    assert not phi_functor(zero_module(Rh), 2).dims


def test_pushforward_examples():
    R = xy()
    phi = frobenius_hom(R)
    push = pushforward(phi, R.as_module())
    assert push.module.dims_list(0, 4) == [3, 4, 4, 4, 4]
    v0 = pushforward(phi, R.as_module(), [0]).module
    v1 = pushforward(phi, R.as_module(), [1]).module
    assert betti_table(resolve(v0, 5, 6)) == betti_table(resolve(R.as_module(), 5, 6))
    expect = direct_sum([quotient(R, ["y"]), quotient(R, ["x"])])
    assert betti_table(resolve(v1, 5, 6)) == betti_table(resolve(expect, 5, 6))
    assert pushforward(phi, residue_field(R)).module.dims == {0: 1}
    T = cube()
    pt = frobenius_hom(T)
    assert pushforward(pt, T.as_module(), [0]).module.dims == {0: 1, 1: 1}
    assert pushforward(pt, T.as_module(), [1]).module.dims == {0: 1}


@pytest.mark.parametrize("mk", [xy, cube, path, plane])
def test_pushforward_dimension_law(mk):
    A = mk()
    phi = frobenius_hom(A)
    for M in (A.as_module(), residue_field(A), quotient(A, ["x"])):
        push = pushforward(phi, M).module
        for j in range(0, 6):
            assert push.dim(j) == sum(M.dim(2 * j + i) for i in range(2))
        pieces = [pushforward(phi, M, [i]).module for i in range(2)]
        for j in range(0, 6):
            assert push.dim(j) == sum(p.dim(j) for p in pieces)


def test_koszul_complex_examples():
    R = xy()
    M = R.as_module()
    assert koszul_complex([], M).modules == {0: M}
    S = ring(2, "x", ("x^2",), 14)
    G = koszul_complex([S.generator(0)], S.as_module())
    assert [homology(G, 1, j)[0] for j in range(5)] == [0, 0, 1, 0, 0]
    assert [homology(G, 0, j)[0] for j in range(5)] == [1, 0, 0, 0, 0]
    cone = mapping_cone(multiplication_map(as_complex(S.as_module()), S.generator(0)))
    assert hdims(cone, range(0, 2), range(6)) == hdims(G, range(0, 2), range(6))
    P = plane()
    K = koszul_complex([P.generator(0), P.generator(1)], P.as_module())
    assert {k: v for k, v in hdims(K, range(0, 3), range(8)).items() if v} == {(0, 0): 1}
    with pytest.raises(MixedDegrees):
        koszul_complex([P.generator(0), P.element(P.ring.poly("x^2"))], P.as_module())


def test_cone_examples():
    R = xy()
    c = koszul_complex([R.generator(0)], R.as_module())
    assert not any(hdims(mapping_cone(identity_map(c)), range(0, 3), range(8)).values())
    z = mapping_cone(zero_map(c, c))
    for i in range(0, 3):
        for j in range(8):
            assert homology(z, i, j)[0] == homology(c, i - 1, j)[0] + homology(c, i, j)[0]


def test_homology_window_guard():
    R = xy()
    res = resolve(R.as_module(), 2, 6)
    with pytest.raises(UnsoundWindow):
        homology(res.as_complex(), 2, 3)


def test_homology_module_structure():
    S = ring(2, "x", ("x^2",), 14)
    G = koszul_complex([S.generator(0)], S.as_module())
    H1 = homology_module(G, 1, 10)
    assert H1.dims == {2: 1}
    R = xy()
    K = koszul_complex([R.element(R.ring.poly("x+y"))], R.as_module())
    H0 = homology_module(K, 0, 10)
    assert betti_table(resolve(H0, 4, 8)) == betti_table(resolve(quotient(R, ["x+y"]), 4, 8))


def test_d_squared_zero_koszul():
    for A in (xy(), path(), quad()):
        gens = [A.generator(a) for a in range(A.ngens)]
        K = koszul_complex(gens, A.as_module())
        for i in range(K.i_min + 2, K.i_max + 1):
            for j in range(0, 8):
                assert (K.diff(i - 1, j) @ K.diff(i, j)).is_zero()


@st.composite
def element_lists(draw):
    R = xy()
    n = draw(st.integers(1, 3))
    polys = draw(st.lists(st.sampled_from(["x", "y", "x+y"]), min_size=n, max_size=n))
    return R, [R.element(R.ring.poly(p)) for p in polys]


@given(element_lists())
def test_d_squared_zero_and_cone_inequality(data):
    R, elems = data
    X = koszul_complex(elems[:-1], R.as_module()) if len(elems) > 1 else as_complex(R.as_module())
    theta = multiplication_map(X, elems[-1])
    C = mapping_cone(theta)
    s = elems[-1].degree
    for i in range(C.i_min, C.i_max + 1):
        for j in range(0, 8):
            assert (C.diff(i - 1, j) @ C.diff(i, j)).is_zero()
            lhs = homology(C, i, j)[0]
            rhs = homology(X, i, j)[0] + (homology(X, i - 1, j - s)[0] if j >= s else 0)
            assert lhs <= rhs


@given(st.sampled_from(["x", "x+y", "y"]), st.integers(0, 3), st.sampled_from([2, 3]))
def test_functors_commute_with_homology(p, t, s):
    R = xy()
    K = koszul_complex([R.element(R.ring.poly(p))], R.as_module())
    base = hdims(K, range(0, 2), range(0, 8))
    tw = twist_complex(K, t)
    assert all(homology(tw, i, j + t)[0] == d for (i, j), d in base.items())
    sh = shift(K, 1)
    assert all(homology(sh, i - 1, j)[0] == d for (i, j), d in base.items())
    fr = fractional_veronese(K, s)
    assert all(homology(fr, i, s * j)[0] == d for (i, j), d in base.items())
    back = phi_complex(fr, s)
    assert all(homology(back, i, j)[0] == d for (i, j), d in base.items())
