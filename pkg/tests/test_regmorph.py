import pytest
from fractions import Fraction

from gradedreg.errors import CharZero, NotArtinian, NotWellDefined, OrderMismatch
from gradedreg.gradedcat import residue_field, zero_module
from gradedreg import regmorph as rm
from gradedreg.resolve import betti_table, module_regularity, resolve
from gradedreg.suites import hom

from fixtures import cube, plane, quotient, ring, xy


def test_orders():
    R = xy()
    assert rm.check_order(rm.frobenius_hom(R)) == 2
    assert rm.check_order(rm.identity_hom(R)) == 1
    P = plane()
    with pytest.raises(OrderMismatch):
        hom(P, P, ["x^2", "y^3"])
    assert rm.frobenius_hom(cube()).image_polys[0].format("x") == "x^2"
    assert rm.frobenius_hom(plane(), 2).order == 4
    assert rm.frobenius_hom(ring(3, "xy", (), 12)).order == 3


def test_not_well_defined():
    R = xy()
    with pytest.raises(NotWellDefined):
        hom(R, R, ["x^2", "x^2"])
    assert rm.check_order(hom(R, R, ["x^2", "x*y"])) == 2


def test_char_zero():
    Q = ring(0, "xy", (), 6)
    with pytest.raises(CharZero):
        rm.frobenius_hom(Q)


def test_koszul_sequences():
    R = xy()
    seq = rm.koszul_sequence(rm.frobenius_hom(R))
    assert seq.kappa == 0 and seq.elements == []
    S = plane()
    h = hom(ring(2, "x", (), 14), S, ["x^2"])
    seq = rm.koszul_sequence(h)
    assert seq.kappa == 2
    assert sorted(S.to_polynomial(x).format("xy") for x in seq.elements) == ["x*y", "y^2"]
    assert rm.koszul_sequence(rm.identity_hom(S)).kappa == 0


def test_betti_over_frobenius():
    R = xy()
    b = rm.betti_over_hom(rm.frobenius_hom(R), R.as_module(), 6, 12)
    assert b[0, 0] == 1 and b[0, 1] == 2
    assert b.nonzero() == {(0, 0): 1, (0, 1): 2, **{(i, 2 * i + 1): 2 for i in range(1, 6)}}


def test_betti_over_identity():
    R = xy()
    k = residue_field(R)
    assert rm.betti_over_hom(rm.identity_hom(R), k, 5, 8).nonzero() == betti_table(resolve(k, 5, 8)).nonzero()
    assert rm.reg_over_hom(rm.identity_hom(R), quotient(R, ["x"]), 5, 8).value == \
        module_regularity(quotient(R, ["x"]), 5, 8).value


def test_betti_over_non_finite():
    S = plane()
    h = hom(ring(2, "x", (), 14), S, ["x^2"])
    assert rm.betti_over_hom(h, S.as_module(), 4, 10)[0, 0] == 1
    assert rm.quotient_dims(h, 6)[:4] == [1, 2, 2, 2]


def test_reg_over_hom_examples():
    R = xy()
    phi = rm.frobenius_hom(R)
    assert rm.reg_over_hom(phi, R.as_module(), 8, 12).value == Fraction(1, 2)
    assert rm.reg_over_hom(phi, zero_module(R), 4, 8).is_minus_infinity
    assert rm.reg_hat(phi, R.as_module(), 8, rm.hat_cap(phi, 12)).value == 0


def test_artinian_shortcut():
    R = xy()
    phi = rm.frobenius_hom(R)
    assert rm.artinian_shortcut(phi, R.as_module(), 8, 12).value == rm.reg_over_hom(phi, R.as_module(), 8, 12).value
    P = plane()
    assert rm.artinian_shortcut(rm.identity_hom(P), quotient(P, ["x^2"]), 4, 8).value == 1
    h = hom(ring(2, "x", (), 14), P, ["x^2"])
    with pytest.raises(NotArtinian):
        rm.artinian_shortcut(h, P.as_module(), 4, 8)


def test_composition():
    R = xy(20)
    f = rm.frobenius_hom(R)
    assert rm.check_order(rm.compose(f, f)) == 4
    assert rm.check_order(rm.power(f, 3)) == 8
    S = plane()
    h = hom(ring(2, "x", (), 14), S, ["x^2"])
    assert rm.check_order(rm.compose(rm.frobenius_hom(S), h)) == 4
    with pytest.raises(ValueError):
        rm.compose(h, rm.frobenius_hom(S))


def test_tower_free_base():
    R = xy()
    tower = rm.composition_tower(rm.frobenius_hom(R), R.as_module(), steps=2, i_max=3, j_max=10)
    lvl = tower.levels[1]
    assert {k: v for k, v in lvl.homology.items()} == {(0, j): R.dim(j) for j in range(11)}


def test_tower_levels():
    R = xy()
    tower = rm.composition_tower(rm.frobenius_hom(R), quotient(R, ["x+y"]), steps=3, i_max=3, j_max=12)
    assert [L.hom.order for L in tower.levels] == [2, 4, 8]
    assert all(L.homology for L in tower.levels)
    assert [L.verdict.value for L in tower.levels] == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]
