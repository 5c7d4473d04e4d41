"""Property suites over a fixed fixture set.

Each suite returns a :class:`SuiteReport`.  A comparison is *certified* when
every regularity value it uses is either backed by a terminated resolution or
is stable under shrinking the window by two in both directions; only
certified comparisons decide whether a suite passes.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
import math

from .errors import UnknownSuite
from .exactlinalg import FieldSpec
from .gradedcat import (as_complex, cyclic_quotient, fractional_veronese, homology_module, image_module,
                        koszul_complex, pushforward, quotient_module, residue_field, veronese_algebra)
from .polyring import RingDesc, build_algebra_table
from .regmorph import (artinian_shortcut, betti_over_hom, check_order, compose, composition_tower,
                       frobenius_hom, hat_cap, hom_from_polynomials, koszul_sequence, power, reg_hat,
                       reg_over_hom)
from .resolve import betti_table, is_koszul, lind, module_regularity, regularity, resolve

DEFAULT_CAPS = (8, 12)


@dataclass
class Check:
    name: str
    lhs: object
    rhs: object
    relation: str
    passed: bool
    certified: bool
    note: str = ""


@dataclass
class SuiteReport:
    name: str
    caps: tuple
    checks: list = dc_field(default_factory=list)

    @property
    def passed(self):
        cert = [c for c in self.checks if c.certified]
        return bool(cert) and all(c.passed for c in cert)

    def add(self, name, lhs, rhs, relation, certified, note=""):
        self.checks.append(Check(name, lhs, rhs, relation, _compare(lhs, rhs, relation), bool(certified), note))


def _compare(lhs, rhs, relation):
    if relation == "<=":
        return lhs <= rhs
    if relation == "==":
        return lhs == rhs
    if relation == "<":
        return lhs < rhs
    raise ValueError(relation)


# ---------------------------------------------------------------------------
# fixtures


F2 = FieldSpec(2)
F3 = FieldSpec(3)


@lru_cache(maxsize=None)
def ring(p, names, relations=(), cap=12):
    return build_algebra_table(RingDesc.parse(FieldSpec(p), names, list(relations)), cap)


@lru_cache(maxsize=None)
def extended_ring(p, names, relations, new, cap):
    return build_algebra_table(RingDesc.parse(FieldSpec(p), names, list(relations)).extend(list(new)), cap)


def quotient(A, polys, name=None):
    if not polys:
        return A.as_module()
    return cyclic_quotient(A, [A.element(A.ring.poly(f)) for f in polys], name=name)


def fixture_module(A, kind):
    """``"R"``, ``"k"`` or a comma-separated list of relations."""
    if kind == "R":
        return A.as_module()
    if kind == "k":
        return residue_field(A)
    return quotient(A, kind.split(","), name=f"R/({kind})")


def hom(source, target, images, name="h"):
    return hom_from_polynomials(source, target, [target.ring.poly(f) for f in images], name=name)


def certified_value(compute, i_max, j_max):
    """``(verdict, certified)``: certified when terminated or stable under a window two smaller."""
    v = compute(i_max, j_max)
    if v.termination_certified:
        return v, True
    small = compute(max(i_max - 2, 1), max(j_max - 2, 1))
    return v, small.value == v.value


# ---------------------------------------------------------------------------
# suites


def _frobenius_fixtures(j_max):
    cap = j_max + 1
    return [
        ("GF(2)[x,y]/(xy), M=R", ring(2, "xy", ("x*y",), cap), "R"),
        ("GF(2)[x,y]/(xy), M=R/(x)", ring(2, "xy", ("x*y",), cap), "x"),
        ("GF(2)[x,y]/(xy), M=k", ring(2, "xy", ("x*y",), cap), "k"),
        ("GF(2)[x,y], M=R", ring(2, "xy", (), cap), "R"),
        ("GF(2)[x,y], M=R/(x+y)", ring(2, "xy", (), cap), "x+y"),
        ("GF(3)[x,y]/(xy), M=R", ring(3, "xy", ("x*y",), cap), "R"),
        ("GF(2)[x,y,z]/(xy,yz), M=R", ring(2, "xyz", ("x*y", "y*z"), cap), "R"),
    ]


def suite_sandwich(caps):
    i_max, j_max = caps
    rep = SuiteReport("sandwich", caps)
    for label, A, kind in _frobenius_fixtures(j_max):
        phi = frobenius_hom(A)
        m = fixture_module(A, kind)
        q = phi.order
        mid, c1 = certified_value(lambda i, j: reg_over_hom(phi, m, i, j), i_max, j_max)
        lo, c2 = certified_value(lambda i, j: reg_hat(phi, m, i, hat_cap(phi, j)), i_max, j_max)
        slack = Fraction(q - 1, q * A.g)
        rep.add(f"{label}: lower", lo.value, mid.value, "<=", c1 and c2)
        rep.add(f"{label}: upper", mid.value, lo.value + slack, "<=", c1 and c2)
    return rep


def _finite_fixtures(j_max):
    cap = j_max + 1
    out = []
    for label, A, kind in _frobenius_fixtures(j_max):
        out.append((label, frobenius_hom(A), fixture_module(A, kind)))
    S = ring(2, "xy", (), cap)
    hf = hom(ring(2, "xt", (), cap), S, ["x^2", "y^2"], name="hf")
    out.append(("GF(2)[x,t] -> GF(2)[x,y], M=S", hf, S.as_module()))
    return out


def suite_artinian(caps):
    i_max, j_max = caps
    rep = SuiteReport("artinian", caps)
    for label, h, m in _finite_fixtures(j_max):
        a = artinian_shortcut(h, m, i_max, j_max)
        b = reg_over_hom(h, m, i_max, j_max)
        rep.add(label, a.value, b.value, "==", True)
    return rep


def padded_window(h, m, i_max, j_max, extra):
    """Minimal and padded windows as dicts, plus the prediction ``P (1 + t y^{dg})``."""
    seq = koszul_sequence(h).elements
    base = betti_over_hom(h, m, i_max, j_max, seq)
    padded = betti_over_hom(h, m, i_max, j_max, seq + [extra])
    pred = {}
    for i in range(i_max + 1):
        for j in range(j_max + 1):
            v = base[i, j] + (base[i - 1, j - h.dg] if i >= 1 else 0)
            if v:
                pred[(i, j)] = v
    return dict(padded.entries), pred


def suite_padding(caps):
    i_max, j_max = caps
    i_max = min(i_max, 6)
    rep = SuiteReport("padding", caps)
    cap = j_max + 1
    S = ring(2, "xy", (), cap)
    A = ring(2, "x", (), cap)
    R = ring(2, "xy", ("x*y",), cap)
    fixtures = [
        ("x -> x^2 into GF(2)[x,y]", hom(A, S, ["x^2"]), S.as_module()),
        ("Frobenius on GF(2)[x,y]/(xy)", frobenius_hom(R), R.as_module()),
    ]
    for label, h, m in fixtures:
        got, pred = padded_window(h, m, i_max, j_max, h.images[0])
        rep.add(label, got, pred, "==", True)
    return rep


def suite_factorization(caps):
    i_max, j_max = caps
    rep = SuiteReport("factorization", caps)
    cap = j_max + 1
    S = ring(2, "xy", (), cap)
    h = hom(ring(2, "x", (), cap), S, ["x^2"])
    hf = hom(ring(2, "xt", (), cap), S, ["x^2", "y^2"], name="hf")
    for kind in ("R", "x+y", "y"):
        m = fixture_module(S, kind)
        a, c1 = certified_value(lambda i, j: reg_over_hom(h, m, i, j), i_max, j_max)
        b, c2 = certified_value(lambda i, j: reg_over_hom(hf, m, i, j), i_max, j_max)
        rep.add(f"M={kind}", a.value, b.value, "==", c1 and c2)
    return rep


def suite_polyext(caps):
    i_max, j_max = caps
    i_max = min(i_max, 6)
    rep = SuiteReport("polyext", caps)
    cap = j_max + 1
    R = ring(2, "xy", ("x*y",), cap)
    Rt = extended_ring(2, "xy", ("x*y",), "t", cap)
    S = ring(2, "xy", (), cap)
    St = extended_ring(2, "xy", (), "t", cap)
    A = ring(2, "x", (), cap)
    At = extended_ring(2, "x", (), "s", cap)
    fixtures = [
        ("Frobenius on GF(2)[x,y]/(xy)", frobenius_hom(R), R.as_module(), frobenius_hom(Rt), Rt.as_module()),
        ("x -> x^2 into GF(2)[x,y]", hom(A, S, ["x^2"]), S.as_module(), hom(At, St, ["x^2", "t^2"]),
         St.as_module()),
    ]
    for label, h, m, ht, mt in fixtures:
        a, c1 = certified_value(lambda i, j: reg_over_hom(h, m, i, j), i_max, j_max)
        b, c2 = certified_value(lambda i, j: reg_over_hom(ht, mt, i, j), i_max, j_max)
        expect = 1 - Fraction(h.h, h.dg)
        rep.add(label, b.value - a.value, expect, "==", c1 and c2)
    return rep


def suite_regrading(caps):
    i_max, j_max = caps
    i_max = min(i_max, 6)
    rep = SuiteReport("regrading", caps)
    cap = j_max + 1
    S = ring(2, "xy", (), cap)
    R = ring(2, "xy", ("x*y",), cap)
    fixtures = [
        ("Frobenius on GF(2)[x,y]/(xy), M=R", frobenius_hom(R), R.as_module()),
        ("x -> x^2 into GF(2)[x,y], M=S", hom(ring(2, "x", (), cap), S, ["x^2"]), S.as_module()),
    ]
    for label, h, m in fixtures:
        base = reg_over_hom(h, m, i_max, j_max)
        for t in (2, 3):
            ht = h.regrade(t)
            mt = fractional_veronese(m, t, ht.target)
            v = reg_over_hom(ht, mt, i_max, t * j_max)
            rep.add(f"{label}, t={t}", base.value, v.value, "==", True)
    return rep


def suite_koszul_invariance(caps):
    i_max, j_max = caps
    i_max = min(i_max, 6)
    rep = SuiteReport("koszul-invariance", caps)
    cap = j_max + 1
    S = ring(2, "xy", (), cap)
    R = ring(2, "xy", ("x*y",), cap)
    h = hom(ring(2, "x", (), cap), S, ["x^2"])
    phi = frobenius_hom(R)
    fixtures = [
        ("Frobenius, v=x^2", phi, R.as_module(), R.element(R.ring.poly("x^2"))),
        ("Frobenius, v=x^2+y^2", phi, R.as_module(), R.element(R.ring.poly("x^2+y^2"))),
        ("x -> x^2, v=y^2", h, S.as_module(), S.element(S.ring.poly("y^2"))),
        ("x -> x^2, v=xy", h, S.as_module(), S.element(S.ring.poly("x*y"))),
    ]
    for label, hh, m, v in fixtures:
        a, c1 = certified_value(lambda i, j: reg_over_hom(hh, m, i, j), i_max, j_max)
        b, c2 = certified_value(lambda i, j: reg_over_hom(hh, koszul_complex([v], m), i, j), i_max, j_max)
        rep.add(label, a.value, b.value, "==", c1 and c2)
    return rep


def complex_regularity(c, i_max, j_max):
    """``(reg G, sup_i (reg H_i(G) - i), certified)``."""
    c = as_complex(c)
    g, c1 = certified_value(lambda i, j: regularity(betti_table(resolve(c, i, j))), i_max, j_max)
    sup, ok = None, c1
    for i in range(c.i_min, c.i_max + 1):
        H = homology_module(c, i, j_max)
        if not H.dims:
            continue
        v, ci = certified_value(lambda a, b: module_regularity(H, a, b), i_max, j_max)
        ok = ok and ci
        val = v.value - i
        sup = val if sup is None else max(sup, val)
    return g.value, sup, ok


def _complex_fixtures(j_max):
    cap = j_max + 2
    S = ring(2, "x", ("x^2",), cap)
    T = ring(2, "x", ("x^3",), cap)
    R = ring(2, "xy", ("x*y",), cap)
    P = ring(2, "xy", (), cap)
    return [
        ("K[x; GF(2)[x]/(x^2)]", koszul_complex([S.generator(0)], S.as_module())),
        ("K[x; GF(2)[x]/(x^3)]", koszul_complex([T.generator(0)], T.as_module())),
        ("K[x,y; GF(2)[x,y]/(xy)]", koszul_complex([R.generator(0), R.generator(1)], R.as_module())),
        ("K[x+y; GF(2)[x,y]/(xy)]", koszul_complex([R.element(R.ring.poly("x+y"))], R.as_module())),
        ("K[x^2; GF(2)[x,y]]", koszul_complex([P.element(P.ring.poly("x^2"))], P.as_module())),
    ]


def suite_complex_reg(caps):
    i_max, j_max = caps
    rep = SuiteReport("complex-reg", caps)
    for label, c in _complex_fixtures(j_max):
        g, sup, ok = complex_regularity(c, i_max, j_max)
        rep.add(label, g, sup, "<=", ok)
    return rep


def ses_fixtures(j_max):
    """``(label, B, generators of A as (degree, vector))`` with ``0 -> A -> B -> B/A -> 0``."""
    cap = j_max + 2
    P = ring(2, "xy", (), cap)
    P3 = ring(3, "xy", (), cap)
    R = ring(2, "xy", ("x*y",), cap)
    T = ring(2, "x", ("x^3",), cap)

    def elems(A, polys, base=None):
        out = []
        for f in polys:
            e = A.element(A.ring.poly(f))
            vec = e.vec if base is None else base.projection[e.degree] @ e.vec
            out.append((e.degree, vec))
        return out

    Bq = quotient(P, ["x^2"])
    return [
        ("GF(2)[x,y] ⊃ (x)", P.as_module(), elems(P, ["x"])),
        ("GF(2)[x,y] ⊃ (x,y)", P.as_module(), elems(P, ["x", "y"])),
        ("GF(2)[x,y] ⊃ (x^2,xy)", P.as_module(), elems(P, ["x^2", "x*y"])),
        ("GF(2)[x,y] ⊃ (x^2,y^3)", P.as_module(), elems(P, ["x^2", "y^3"])),
        ("GF(2)[x,y] ⊃ ((x+y)^2)", P.as_module(), elems(P, ["x^2+y^2"])),
        ("GF(2)[x,y]/(x^2) ⊃ (xy)", Bq, elems(P, ["x*y"], Bq)),
        ("GF(3)[x,y] ⊃ (x^2+y^2,xy)", P3.as_module(), elems(P3, ["x^2+y^2", "x*y"])),
        ("GF(2)[x,y]/(xy) ⊃ (x)", R.as_module(), elems(R, ["x"])),
        ("GF(2)[x,y]/(xy) ⊃ (x+y)", R.as_module(), elems(R, ["x+y"])),
        ("GF(2)[x,y]/(xy) ⊃ (x,y)", R.as_module(), elems(R, ["x", "y"])),
        ("GF(2)[x,y]/(xy) ⊃ (x^2)", R.as_module(), elems(R, ["x^2"])),
        ("GF(2)[x]/(x^3) ⊃ (x^2)", T.as_module(), elems(T, ["x^2"])),
    ]


def suite_ses(caps):
    i_max, j_max = caps
    rep = SuiteReport("ses", caps)
    for label, B, gens in ses_fixtures(j_max):
        sub = image_module(B, gens, cap=j_max + 1)
        quo = quotient_module(B, gens, cap=j_max + 1)
        vals, ok = [], True
        for m in (sub, B, quo):
            v, c = certified_value(lambda a, b, m=m: module_regularity(m, a, b), i_max, j_max)
            vals.append(v.value)
            ok = ok and c
        a, b, c = vals
        rep.add(f"{label}: reg B", b, max(a, c), "<=", ok)
        rep.add(f"{label}: reg A", a, max(b, c + 1), "<=", ok)
        rep.add(f"{label}: reg C", c, max(b, a - 1), "<=", ok)
    return rep


def _frobenius_of_order(A, q):
    phi = frobenius_hom(A)
    while phi.order < q:
        phi = compose(frobenius_hom(A), phi)
    return phi


def _piece_bound(A, q, i_max, j_max):
    """``(max_i reg V_i(q, R), certified)``, cached on the algebra table."""
    key = ("piece-bound", q, i_max, j_max)
    if key not in A._cache:
        phi = _frobenius_of_order(A, q)
        ok, r = True, None
        for i in range(q):
            V = pushforward(phi, A.as_module(), pieces=[i]).module
            v, c = certified_value(lambda a, b: module_regularity(V, a, b), i_max, j_max)
            ok = ok and c
            r = v.value if r is None else max(r, v.value)
        A._cache[key] = (r, ok)
    return A._cache[key]


def veronese_bound(A, m, q, i_max, j_max):
    """``(reg M^{(q)}, ceil(reg M / q) + r, certified)`` with ``r = max_i reg V_i(q, R)``."""
    phi = _frobenius_of_order(A, q)
    r, ok = _piece_bound(A, q, i_max, j_max)
    reg_m, c1 = certified_value(lambda a, b: module_regularity(m, a, b), i_max, j_max)
    mq = pushforward(phi, m, pieces=[0]).module
    reg_mq, c2 = certified_value(lambda a, b: module_regularity(mq, a, b), i_max, j_max)
    bound = math.ceil(reg_m.value / q) + r
    return reg_mq.value, bound, ok and c1 and c2


def suite_veronese_ineq(caps):
    i_max, j_max = caps
    rep = SuiteReport("veronese-ineq", caps)
    cap = 2 * j_max + 2
    R = ring(2, "xy", ("x*y",), cap)
    Pth = ring(2, "xyz", ("x*y", "y*z"), cap)
    fixtures = [
        ("GF(2)[x,y]/(xy), M=R", R, "R"),
        ("GF(2)[x,y]/(xy), M=k", R, "k"),
        ("GF(2)[x,y]/(xy), M=R/(x)", R, "x"),
        ("GF(2)[x,y]/(xy), M=R/(x^2+y^2)", R, "x^2+y^2"),
        ("GF(2)[x,y]/(xy), M=R/(x^3)", R, "x^3"),
        ("GF(2)[x,y,z]/(xy,yz), M=R", Pth, "R"),
        ("GF(2)[x,y,z]/(xy,yz), M=R/(y)", Pth, "y"),
    ]
    for label, A, kind in fixtures:
        lhs, rhs, ok = veronese_bound(A, fixture_module(A, kind), 2, i_max, j_max)
        rep.add(label, lhs, rhs, "<=", ok)
    return rep


def cover_regularity(p, names, relations, i_max=8, j_max=12):
    """``reg R`` for ``R = Q / I`` computed over the polynomial cover ``Q``."""
    Q = ring(p, names, (), j_max + 2)
    m = quotient(Q, list(relations))
    return module_regularity(m, i_max, j_max)


def suite_veronese_koszul(caps):
    rep = SuiteReport("veronese-koszul", caps)
    reg_r = cover_regularity(2, "xyz", ("x^3",))
    rep.add("reg GF(2)[x,y,z]/(x^3)", reg_r.value, Fraction(2), "==", reg_r.termination_certified)
    q = 2
    rep.add("threshold (reg R + 1)/2", Fraction(reg_r.value + 1, 2), Fraction(q), "<=", reg_r.termination_certified)
    R = ring(2, "xyz", ("x^3",), 20)
    V = veronese_algebra(R, q)
    verdict = is_koszul(V, 6, 10)
    rep.add("R^(2) Koszul up to (6,10)", verdict.label, "KoszulUpToWindow", "==", True)
    return rep


def suite_lind(caps):
    i_max, j_max = caps
    rep = SuiteReport("lind", caps)
    R = ring(2, "xy", ("x*y",), j_max + 2)
    k = lind(resolve(residue_field(R), i_max, j_max))
    rep.add("lind k over GF(2)[x,y]/(xy)", k.value, 0, "==", True)
    base = lind(resolve(R.as_module(), i_max, j_max))
    mod = lind(resolve(quotient(R, ["x^2+y^2"]), i_max, j_max))
    rep.add("lind R/((x+y)^2) = lind R + 1", mod.value, base.value + 1, "==", True)
    return rep


def suite_tower(caps):
    i_max, j_max = caps
    rep = SuiteReport("tower", caps)
    R = ring(2, "xy", ("x*y",), 14)
    psi = frobenius_hom(R)
    m = quotient(R, ["x+y"])
    tower = composition_tower(psi, m, steps=3, i_max=3, j_max=12)
    step = tower.levels[0].verdict.value
    for prev, cur in zip(tower.levels, tower.levels[1:]):
        rep.add(f"level {cur.index} nonzero", 0, sum(cur.homology.values()), "<", True)
        rep.add(f"level {cur.index} bound", cur.verdict.value, prev.verdict.value + step, "<=", True)
    return rep


def suite_koszul_main(caps):
    i_max, j_max = caps
    rep = SuiteReport("koszul-main", caps)
    cap = 2 * j_max + 2
    T = ring(2, "x", ("x^3",), cap)
    R = ring(2, "xy", ("x*y",), cap)
    for label, A, grow in (("GF(2)[x]/(x^3)", T, True), ("GF(2)[x,y]/(xy)", R, False)):
        phi = frobenius_hom(A)
        for i in range(phi.order):
            V = pushforward(phi, A.as_module(), pieces=[i]).module
            small = module_regularity(V, i_max - 2, j_max - 2).value
            big = module_regularity(V, i_max, j_max).value
            if grow:
                rep.add(f"{label}: reg V_{i} grows", small, big, "<", True)
            else:
                rep.add(f"{label}: reg V_{i} stable at 0", big, Fraction(0), "==", small == big)
    return rep


def suite_order_composition(caps):
    rep = SuiteReport("order-composition", caps)
    cap = 12
    S = ring(2, "xy", (), cap)
    R = ring(2, "xy", ("x*y",), cap)
    h = hom(ring(2, "x", (), cap), S, ["x^2"])
    fS, fR = frobenius_hom(S), frobenius_hom(R)
    cases = [
        ("frob∘frob on GF(2)[x,y]/(xy)", compose(fR, fR), fR.order * fR.order),
        ("frob∘h", compose(fS, h), fS.order * h.order),
        ("frob^3 on GF(2)[x,y]", power(fS, 3), fS.order ** 3),
    ]
    for label, c, expect in cases:
        rep.add(label, check_order(c), expect, "==", True)
    return rep


SUITES = {
    "sandwich": suite_sandwich,
    "artinian": suite_artinian,
    "padding": suite_padding,
    "factorization": suite_factorization,
    "polyext": suite_polyext,
    "regrading": suite_regrading,
    "koszul-invariance": suite_koszul_invariance,
    "complex-reg": suite_complex_reg,
    "ses": suite_ses,
    "veronese-ineq": suite_veronese_ineq,
    "veronese-koszul": suite_veronese_koszul,
    "lind": suite_lind,
    "tower": suite_tower,
    "koszul-main": suite_koszul_main,
    "order-composition": suite_order_composition,
}


def verify_suite(name, caps=DEFAULT_CAPS):
    """Run one named suite (or ``"all"``, returning a list of reports)."""
    caps = tuple(caps)
    if name == "all":
        return [fn(caps) for fn in SUITES.values()]
    fn = SUITES.get(name)
    if fn is None:
        raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}, all")
    return fn(caps)
