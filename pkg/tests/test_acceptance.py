"""The fourteen acceptance criteria, one test each, at their stated caps and exact tolerances."""

import functools
import itertools
import time
from fractions import Fraction

from gradedreg.gradedcat import (direct_sum, image_module, koszul_complex,
                                 pushforward, residue_field, twist)
from gradedreg.regmorph import frobenius_hom
from gradedreg.resolve import (bar_tor_oracle, betti_table, is_koszul, minimal_free_resolution,
                               module_regularity, resolve)
from gradedreg.suites import complex_regularity, quotient, ring, verify_suite

from conftest import ACCEPTANCE

I_MAX, J_MAX = 8, 12


def criterion(key):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            t0 = time.perf_counter()
            try:
                detail = fn()
            except BaseException as e:
                ACCEPTANCE[key] = (False, f"{type(e).__name__}: {e} ({time.perf_counter() - t0:.1f}s)")
                raise
            ACCEPTANCE[key] = (True, f"{detail} ({time.perf_counter() - t0:.1f}s)")
            print(f"{key}: PASS {detail}")
        return run
    return wrap


def betti(m, i_max=I_MAX, j_max=J_MAX):
    return betti_table(resolve(m, i_max, j_max)).nonzero()


def suite_ok(name):
    rep = verify_suite(name, (I_MAX, J_MAX))
    bad = [c for c in rep.checks if c.certified and not c.passed]
    assert rep.passed, bad
    return rep


@criterion("AC1")
def test_ac1_example_i():
    R = ring(2, "xy", ("x*y",), 2 * J_MAX + 2)
    phi = frobenius_hom(R)
    v0 = pushforward(phi, R.as_module(), [0]).module
    v1 = pushforward(phi, R.as_module(), [1]).module
    assert betti(v0) == betti(R.as_module())
    assert betti(v1) == betti(direct_sum([quotient(R, ["y"]), quotient(R, ["x"])]))
    regs = [module_regularity(v, I_MAX, J_MAX) for v in (v0, v1)]
    assert [r.value for r in regs] == [0, 0]
    assert not any(r.boundary_j for r in regs)
    return "V_0 ~ R, V_1 ~ R/(y)+R/(x), reg 0 and 0"


@criterion("AC2")
def test_ac2_example_iii():
    T = ring(2, "x", ("x^3",), J_MAX + 2)
    b = betti(residue_field(T))
    expect = {}
    for i in range(0, I_MAX + 1):
        for j in range(0, J_MAX + 1):
            if (i % 2 == 0 and j == 3 * i // 2) or (i % 2 == 1 and j == 3 * (i - 1) // 2 + 1):
                expect[(i, j)] = 1
    assert b == expect
    v = module_regularity(residue_field(T), I_MAX, J_MAX)
    assert v.value == 4 and v.boundary_attained
    k = is_koszul(T, I_MAX, J_MAX)
    assert k.label == "NotKoszul" and k.witness == (2, 3)
    return "beta pattern exact, reg 4 at boundary, NotKoszul (2,3)"


def path_faces():
    edges = [{0, 1}, {1, 2}]
    return [set(c) for n in range(4) for c in itertools.combinations(range(3), n)
            if not any(e <= set(c) for e in edges)]


@criterion("AC3")
def test_ac3_example_ii():
    A = ring(2, "xyz", ("x*y", "y*z"), 2 * J_MAX + 2)
    phi = frobenius_hom(A)
    v0 = pushforward(phi, A.as_module(), [0]).module
    v1 = pushforward(phi, A.as_module(), [1]).module
    assert betti(v0) == betti(direct_sum([A.as_module(), twist(quotient(A, ["y"]), 1)]))
    assert betti(v1) == betti(direct_sum([quotient(A, ["y"]), quotient(A, ["x", "z"]), quotient(A, ["y"])]))
    faces = path_faces()
    formula = [max(t for t in range(3) if any(len(c) == 2 * t + i for c in faces)) for i in (0, 1)]
    regs = [module_regularity(v, I_MAX, J_MAX).value for v in (v0, v1)]
    assert regs == [1, 0] == formula
    return f"reg V_0, V_1 = {regs[0]}, {regs[1]}; face formula {formula[0]}, {formula[1]}"


def oracle_fixtures():
    out = []
    for names, rels in (("x", ("x^3",)), ("xy", ("x*y",)), ("xy", ("x^2", "x*y", "y^2"))):
        A = ring(2, names, rels, 20)
        out += [residue_field(A), A.as_module(), quotient(A, ["x"]),
                image_module(A.as_module(), [(1, A.generator(0).vec)], cap=A.cap)]
    R = ring(2, "xy", ("x*y",), 20)
    out += [quotient(R, ["x+y"]), quotient(R, ["x^2"]), pushforward(frobenius_hom(R), R.as_module(), [1]).module]
    return out


@criterion("AC4")
def test_ac4_oracle_equivalence():
    fx = oracle_fixtures()
    for m in fx:
        assert betti_table(minimal_free_resolution(m, 4, 8)).nonzero() == bar_tor_oracle(m, 4, 8).nonzero()
    return f"{len(fx)} fixtures over 3 rings"


@criterion("AC5")
def test_ac5_sandwich():
    rep = suite_ok("sandwich")
    fixtures = {c.name.rsplit(":", 1)[0] for c in rep.checks if c.certified}
    assert len(fixtures) >= 5
    lower, upper = rep.checks[0], rep.checks[1]
    assert (lower.lhs, lower.rhs, upper.rhs) == (0, Fraction(1, 2), Fraction(1, 2))
    return f"{len(fixtures)} certified fixtures; Example (i): 0 <= 1/2 <= 1/2"


@criterion("AC6")
def test_ac6_artinian():
    rep = suite_ok("artinian")
    assert all(c.certified for c in rep.checks)
    return f"{len(rep.checks)} finite fixtures agree"


@criterion("AC7")
def test_ac7_padding():
    rep = suite_ok("padding")
    assert len(rep.checks) == 2
    return "x -> x^2 and Frobenius windows match the convolution"


@criterion("AC8")
def test_ac8_factorization_polyext():
    fac = suite_ok("factorization")
    ext = suite_ok("polyext")
    assert len([c for c in ext.checks if c.certified]) >= 2
    return f"{len(fac.checks)} factorization checks, {len(ext.checks)} extension differences exact"


@criterion("AC9")
def test_ac9_complex_regularity():
    S = ring(2, "x", ("x^2",), J_MAX + 2)
    G = koszul_complex([S.generator(0)], S.as_module())
    reg_g, sup, ok = complex_regularity(G, I_MAX, J_MAX)
    assert ok and reg_g == 0 and sup == 1
    suite_ok("complex-reg")
    return "reg G = 0 < 1 = sup(reg H_i - i); inequality on all complex fixtures"


@criterion("AC10")
def test_ac10_ses():
    rep = suite_ok("ses")
    seqs = {c.name.rsplit(":", 1)[0] for c in rep.checks if c.certified}
    assert len(seqs) >= 10
    return f"{len(seqs)} certified sequences, 3 inequalities each"


@criterion("AC11")
def test_ac11_veronese_inequality():
    rep = suite_ok("veronese-ineq")
    cert = [c for c in rep.checks if c.certified]
    assert len(cert) >= 5
    assert any("xy,yz" in c.name for c in cert) and any("/(xy)" in c.name for c in cert)
    return f"{len(cert)} certified fixtures over both rings"


@criterion("AC12")
def test_ac12_veronese_koszul():
    rep = suite_ok("veronese-koszul")
    assert all(c.certified for c in rep.checks)
    return "reg R = 2 (certified), R^(2) KoszulUpToWindow at (6,10)"


@criterion("AC13")
def test_ac13_lind():
    rep = suite_ok("lind")
    assert [c.lhs for c in rep.checks] == [0, 1]
    return "lind k = 0, lind R/((x+y)^2) = 1"


@criterion("AC14")
def test_ac14_tower():
    suite_ok("tower")
    R = ring(2, "xy", ("x*y",), 14)
    from gradedreg.regmorph import composition_tower
    tower = composition_tower(frobenius_hom(R), quotient(R, ["x+y"]), steps=3, i_max=3, j_max=12)
    assert all(L.homology for L in tower.levels)
    assert all(L.verdict.value is not None and not L.verdict.boundary_j for L in tower.levels)
    vals = [str(L.verdict.value) for L in tower.levels]
    return f"levels reg {', '.join(vals)}; bound holds"
