"""Homomorphisms with an order and regularity measured over them.

A homomorphism ``φ: R -> S`` of order ``d`` multiplies degrees by ``d``.  It
becomes homogeneous as ``R^{(1/d)} -> S``; Betti numbers over ``φ`` are the
homology dimensions of ``k ⊗^L_{R^{(1/d)}} K[x; M]`` where ``x`` lifts a basis
of ``S_{dg} / (mS)_{dg}``.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import CharZero, NotArtinian, NotWellDefined, OrderMismatch, WindowExceeded
from .exactlinalg import ExactMatrix, column_span_complement, rank
from .gradedcat import (as_complex, direct_sum, element_action, fractional_veronese,
                        fractional_veronese_algebra, homology, koszul_complex, restrict_scalars,
                        veronese_algebra, veronese_piece)
from .polyring import Element, Polynomial
from .resolve import betti_table, regularity, resolve, tensor_with_resolution


@dataclass
class OrderedHom:
    """``φ: source -> target`` fixed by the images of the source generators."""

    source: object
    target: object
    images: list
    order: int
    name: str = "phi"
    image_polys: list = None

    @property
    def g(self):
        return self.source.g

    @property
    def h(self):
        return self.target.g

    @property
    def dg(self):
        return self.order * self.source.g

    @property
    def c(self):
        return self.dg // self.target.g

    def induced(self):
        """``φ̃: R^{(1/d)} -> S`` as (algebra, images)."""
        return fractional_veronese_algebra(self.source, self.order), list(self.images)

    def hat(self):
        """``φ̂: R -> S^{(d)}``, homogeneous of order 1."""
        if self.order == 1:
            return self
        V = veronese_algebra(self.target, self.order)
        return OrderedHom(self.source, V, [V.from_base(x) for x in self.images], 1, name=f"hat({self.name})")

    def regrade(self, t):
        """``φ^{(1/t)}: R^{(1/t)} -> S^{(1/t)}``."""
        R2 = fractional_veronese_algebra(self.source, t)
        S2 = fractional_veronese_algebra(self.target, t)
        return OrderedHom(R2, S2, [Element(x.degree * t, x.vec) for x in self.images], self.order,
                          name=f"{self.name}^(1/{t})")

    def apply(self, x):
        """``φ(x)`` for a source element (needs a polynomial presentation of the source)."""
        poly = self.source.to_polynomial(x)
        return evaluate(poly, self.images, self.target, x.degree * self.order)


def _power_product(target, images, exps, degree_each):
    out = target.one()
    for a, e in enumerate(exps):
        for _ in range(e):
            out = target.multiply(images[a], out)
    return out


def evaluate(poly, images, target, degree):
    """``poly(images)`` as an element of ``target`` of the given degree."""
    F = target.field
    acc = ExactMatrix.zeros(F, target.dim(degree), 1)
    for m, c in poly.terms.items():
        term = _power_product(target, images, m, None)
        if term.degree != degree:
            raise OrderMismatch(f"term degree {term.degree} differs from {degree}")
        acc = acc + term.vec.scale(c)
    return Element(degree, acc)


def hom_from_polynomials(source, target, polys, name="phi"):
    """Build and validate a homomorphism from image polynomials in the target ring."""
    if source.field != target.field:
        raise ValueError("source and target must share a field")
    if len(polys) != source.ngens:
        raise ValueError(f"need {source.ngens} images, got {len(polys)}")
    degs = set()
    for p in polys:
        if not p.is_zero():
            if not p.is_homogeneous():
                raise OrderMismatch(f"image {p.format(target.ring.names)} is not homogeneous")
            degs.add(p.degree() * target.ring.degree)
    ratios = {Fraction(dg, source.g) for dg in degs}
    if len(ratios) > 1 or any(r.denominator != 1 or r < 1 for r in ratios):
        raise OrderMismatch(f"image degrees {sorted(degs)} do not scale generator degree {source.g} uniformly")
    d = int(next(iter(ratios))) if ratios else 1
    dg = d * source.g
    if dg % target.g:
        raise OrderMismatch(f"d*g = {dg} is not a multiple of the target generation degree {target.g}")
    images = [target.element(p, dg) for p in polys]
    h = OrderedHom(source, target, images, d, name=name, image_polys=list(polys))
    check_order(h)
    return h


def check_order(h):
    """Verify uniform degree scaling and that source relations map to zero; return the order."""
    dg = h.order * h.source.g
    for x in h.images:
        if x.degree != dg:
            raise OrderMismatch(f"image of degree {x.degree}, expected {dg}")
    R = h.source
    if R.ring is not None:
        for f in R.ring.ideal:
            deg = f.degree() * R.ring.degree * h.order
            if deg > h.target.cap:
                raise WindowExceeded(f"checking relation needs target degree {deg} > cap {h.target.cap}")
            val = evaluate(f, h.images, h.target, deg)
            if not val.is_zero():
                raise NotWellDefined(f"relation {f.format(R.ring.names)} does not map to zero")
    return h.order


def identity_hom(A):
    return OrderedHom(A, A, [A.generator(a) for a in range(A.ngens)], 1, name="id")


def frobenius_hom(A, e=1):
    """``x_i -> x_i^q`` with ``q = p^e``."""
    p = A.field.characteristic
    if p == 0:
        raise CharZero("Frobenius needs positive characteristic")
    q = p ** e
    if A.ring is None:
        raise ValueError("Frobenius needs a polynomial presentation")
    n = A.ring.nvars
    polys = [Polynomial.monomial(A.field, tuple(q if k == i else 0 for k in range(n))) for i in range(n)]
    return hom_from_polynomials(A, A, polys, name=f"frob^{e}" if e > 1 else "frob")


def compose(outer, inner):
    """``outer ∘ inner``."""
    if inner.target is not outer.source:
        raise ValueError("homomorphisms are not composable")
    images = [outer.apply(x) for x in inner.images]
    return OrderedHom(inner.source, outer.target, images, inner.order * outer.order,
                      name=f"{outer.name}∘{inner.name}")


def power(h, n):
    out = h
    for _ in range(n - 1):
        out = compose(h, out)
    return out


# ---------------------------------------------------------------------------
# Koszul sequences and Betti numbers over a homomorphism


@dataclass
class KoszulSequence:
    elements: list
    minimal: bool
    kappa: int
    indices: list = dc_field(default_factory=list)


def ms_span(h, j):
    """Columns spanning ``(mS)_j``."""
    S = h.target
    smod = S.as_module()
    cols = [element_action(smod, x, j - h.dg) for x in h.images] if j >= h.dg else []
    return ExactMatrix.hstack(S.field, cols, S.dim(j))


def koszul_sequence(h):
    """Standard basis elements of ``S_{dg}`` completing ``(mS)_{dg}`` to all of ``S_{dg}``."""
    S = h.target
    dg = h.dg
    if dg > S.cap:
        raise WindowExceeded(f"target cap {S.cap} below {dg}")
    span = ms_span(h, dg)
    eye = ExactMatrix.identity(S.field, S.dim(dg))
    keep = column_span_complement(span, eye)
    elems = [Element(dg, eye.columns([k])) for k in keep]
    return KoszulSequence(elems, True, len(elems), keep)


def quotient_dims(h, upto=None):
    """``dim (S / mS)_j`` for ``0 <= j <= upto``."""
    S = h.target
    upto = S.cap if upto is None else upto
    out = []
    for j in range(upto + 1):
        n = S.dim(j)
        out.append(n - (rank(ms_span(h, j)) if n and j >= h.dg else 0))
    return out


def is_artinian(h):
    dims = quotient_dims(h)
    return any(d == 0 for d in dims[1:])


def restricted(h, m):
    """``m`` (over the target) as a module or complex over ``R^{(1/d)}``."""
    Rd, images = h.induced()
    return restrict_scalars(m, Rd, images)


def betti_over_hom(h, m, i_max, j_max, sequence=None):
    """``β^φ_{i,j}(M) = dim H_i(k ⊗^L_{R^{(1/d)}} K[x; M])_j``."""
    seq = koszul_sequence(h).elements if sequence is None else list(sequence)
    K = koszul_complex(seq, as_complex(m)) if seq else as_complex(m)
    res = resolve(restricted(h, K), i_max, j_max)
    b = betti_table(res)
    b.gd = h.dg
    return b


def reg_over_hom(h, m, i_max, j_max, sequence=None):
    """``reg_φ M = sup (j - i·dg) / dg`` over the nonzero ``β^φ_{i,j}``."""
    return regularity(betti_over_hom(h, m, i_max, j_max, sequence), h.dg)


def artinian_shortcut(h, m, i_max, j_max):
    """For ``S / mS`` of finite length: regularity of ``M`` over ``R^{(1/d)}`` directly."""
    if not is_artinian(h):
        raise NotArtinian("S/mS does not vanish in any degree inside the target window")
    res = resolve(restricted(h, as_complex(m)), i_max, j_max)
    b = betti_table(res)
    b.gd = h.dg
    return regularity(b, h.dg)


def veronese_pushforward(h, m):
    """``^φM = ⊕_i V_i(d, M)`` as a module over ``S^{(d)}`` (for use with ``φ̂``)."""
    V = veronese_algebra(h.target, h.order)
    return direct_sum([veronese_piece(m, h.order, i, V) for i in range(h.order)], name=f"^{h.name}{m.name or 'M'}")


def reg_hat(h, m, i_max, j_max):
    """``reg_{φ̂}(^φM)`` with the Veronese grading."""
    return reg_over_hom(h.hat(), veronese_pushforward(h, m), i_max, j_max)


def hat_cap(h, j_max):
    """The Veronese-grading degree cap matching ``j_max`` on the fractional side."""
    return (j_max - (h.order - 1)) // h.order


# ---------------------------------------------------------------------------
# composition tower


@dataclass
class TowerLevel:
    index: int
    complex: object
    hom: OrderedHom
    verdict: object
    homology: dict


@dataclass
class CompositionTower:
    base: object
    psi: OrderedHom
    levels: list


def composition_tower(psi, m, steps=3, i_max=3, j_max=12):
    """``M^1 = M`` and ``M^{l+1} = (M^l)^{(1/d)} ⊗^L_{R^{(1/d)}} M``, with ``reg_{ψ^l} M^l`` per level."""
    if psi.source is not psi.target:
        raise ValueError("tower needs an endomorphism")
    d = psi.order
    Rd, images = psi.induced()
    # truncation depth per level: each resolution of a complex consumes two indices
    trunc = {steps: i_max + 2}
    for l in range(steps - 1, 0, -1):
        trunc[l] = max(i_max + 2, trunc[l + 1] + 2)
    levels = []
    cur = as_complex(m)
    hom = psi
    for l in range(1, steps + 1):
        if l > 1:
            src = fractional_veronese(cur, d, Rd)
            res = resolve(src, trunc[l] - (0 if l == 2 else 1), j_max)
            cur = tensor_with_resolution(res, m, images=images, i_top=trunc[l])
            hom = compose(psi, hom)
        hdims = {}
        top = cur.i_max - 1 if cur.truncated else cur.i_max
        for i in range(cur.i_min, top + 1):
            for j in range(0, j_max + 1):
                dd, _ = homology(cur, i, j)
                if dd:
                    hdims[(i, j)] = dd
        verdict = reg_over_hom(hom, cur, i_max, j_max)
        levels.append(TowerLevel(l, cur, hom, verdict, hdims))
    return CompositionTower(m, psi, levels)
