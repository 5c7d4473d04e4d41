"""Graded free resolutions computed degree by degree, and what is read off them.

The engine resolves a bounded-below complex ``C`` by killing cycles in the
mapping cone of ``f: F -> C``.  Steps run over homological index ``i`` in
increasing order and, inside an index, over internal degree ``j`` in
increasing order.  For a module this is the usual minimal resolution.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import NotStandardGraded, UnsoundWindow, WindowExceeded
from .exactlinalg import ExactMatrix, column_span_complement, kernel_basis, rank
from .gradedcat import (INF, ComplexTable, FreeHom, FreeModule, as_complex, element_action,
                        homology, residue_field, word_action)
from .polyring import Element


# ---------------------------------------------------------------------------
# resolutions


class ResolutionWindow:
    """A (semi-)free resolution ``F -> C`` truncated at ``(i_max, j_max)``.

    ``dF[i]`` holds the differential ``F_i -> F_{i-1}`` and ``aug[i]`` the
    comparison map ``F_i -> C_i``, both as maps out of free modules.
    """

    def __init__(self, source, i_max, j_max):
        self.source = source
        self.algebra = source.algebra
        self.i_max = i_max
        self.j_max = j_max
        self.dF = {}
        self.aug = {}
        self.F = {}
        self.built_to = None
        self.is_module = len(source.modules) == 1 and 0 in source.modules and not source.truncated

    @property
    def i_min(self):
        return self.source.i_min

    def generator_degrees(self, i):
        return self.F[i].degrees if i in self.F else []

    def reduced_differential(self, i, j):
        """``k ⊗ d_i`` in degree ``j``: degree-``j`` generators of ``F_i`` to those of ``F_{i-1}``."""
        F = self.algebra.field
        cols = self.generator_degrees(i).count(j)
        rows = self.generator_degrees(i - 1).count(j)
        if i not in self.dF or rows == 0 or cols == 0:
            return ExactMatrix.zeros(F, rows, cols)
        for e, V in self.dF[i].groups:
            if e == j:
                return V.rows(range(V.nrows - rows, V.nrows))
        return ExactMatrix.zeros(F, rows, cols)

    def differential(self, i, j):
        if i not in self.dF:
            return ExactMatrix.zeros(self.algebra.field, self._fdim(i - 1, j), self._fdim(i, j))
        return self.dF[i].matrix(j)

    def _fdim(self, i, j):
        return self.F[i].dim(j) if i in self.F else 0

    def as_complex(self):
        """The free complex ``F`` as a ComplexTable (truncated at ``i_max``)."""
        mods = {i: self.F[i] for i in range(self.i_min, self.built_to + 1)}
        return ComplexTable(self.algebra, mods, lambda i, j: self.dF[i].matrix(j), truncated=True,
                            name="F")


def _check_caps(c, j_max):
    if c.cap < j_max:
        raise WindowExceeded(f"input known only through degree {c.cap}, j_max is {j_max}")
    lows = [m.j_min for m in c.modules.values()]
    lo = min(lows) if lows else 0
    A = c.algebra
    if A.cap < INF and A.cap < j_max - lo:
        raise WindowExceeded(f"algebra cap {A.cap} is below the needed degree {j_max - lo}")


def resolve(x, i_max, j_max):
    """Resolution of a module or complex through homological index ``i_max`` and degree ``j_max``.

    For a module the result is minimal.  For a complex it is semi-free and
    one extra index is built so that ``H(k ⊗ F)`` is exact through ``i_max``.
    """
    c = as_complex(x)
    _check_caps(c, j_max)
    A = c.algebra
    Fld = A.field
    res = ResolutionWindow(c, i_max, j_max)
    top = i_max if res.is_module else i_max + 1
    if c.truncated and top + 1 > c.i_max:
        raise UnsoundWindow(f"complex truncated at {c.i_max}; cannot resolve through index {top}")
    support = c.support()
    lo = min(support) if support else 0
    zero_free = FreeModule(A, [])
    for i in range(c.i_min, top + 1):
        prev = res.F.get(i - 1, zero_free)
        prev2 = res.F.get(i - 2, zero_free)
        Ci, Cprev = c.module(i), c.module(i - 1)
        dF = FreeHom(prev)
        aug = FreeHom(Ci)
        res.dF[i], res.aug[i] = dF, aug
        dprev = res.dF.get(i - 1)
        aprev = res.aug.get(i - 1)
        for j in range(lo, j_max + 1):
            f1, c1 = prev.dim(j), Ci.dim(j)
            if f1 + c1 == 0:
                continue
            f0, c0 = prev2.dim(j), Cprev.dim(j)
            # cone differential Cone_i -> Cone_{i-1}
            top_row = ExactMatrix.hstack(Fld, [-(dprev.matrix(j)) if dprev is not None and f0 and f1 else
                                               ExactMatrix.zeros(Fld, f0, f1), ExactMatrix.zeros(Fld, f0, c1)], f0)
            bot_row = ExactMatrix.hstack(Fld, [aprev.matrix(j) if aprev is not None and c0 and f1 else
                                               ExactMatrix.zeros(Fld, c0, f1), c.diff(i, j)], c0)
            D = ExactMatrix.vstack(Fld, [top_row, bot_row], f1 + c1)
            Z = kernel_basis(D) if D.nrows else ExactMatrix.identity(Fld, f1 + c1)
            if Z.ncols == 0:
                continue
            bnd = []
            if dF.groups:
                bnd.append(ExactMatrix.vstack(Fld, [-(dF.matrix(j)), aug.matrix(j)], dF.matrix(j).ncols))
            nxt = c.diff(i + 1, j) if c1 else None
            if nxt is not None and nxt.ncols:
                bnd.append(ExactMatrix.vstack(Fld, [ExactMatrix.zeros(Fld, f1, nxt.ncols), nxt], nxt.ncols))
            B = ExactMatrix.hstack(Fld, bnd, f1 + c1)
            keep = column_span_complement(B, Z)
            if not keep:
                continue
            z = Z.columns(keep)
            dF.add(j, -(z.rows(range(f1))))
            aug.add(j, z.rows(range(f1, f1 + c1)))
        res.F[i] = FreeModule(A, dF.degrees)
        res.built_to = i
    return res


minimal_free_resolution = resolve


# ---------------------------------------------------------------------------
# Betti tables and regularity


@dataclass
class BettiTable:
    i_max: int
    j_max: int
    entries: dict = dc_field(default_factory=dict)
    certified: bool = False
    gd: int = 1

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def top_degrees(self):
        """``t_i``: the largest ``j`` with ``β_{i,j} != 0`` (only indices with entries)."""
        out = {}
        for (i, j), v in self.entries.items():
            if v:
                out[i] = max(out.get(i, j), j)
        return out

    def total(self, i):
        return sum(v for (a, _), v in self.entries.items() if a == i)

    def nonzero(self):
        return {k: v for k, v in sorted(self.entries.items()) if v}

    def restrict(self, i_max, j_max):
        return BettiTable(min(i_max, self.i_max), min(j_max, self.j_max),
                          {(i, j): v for (i, j), v in self.entries.items() if i <= i_max and j <= j_max and v})

    def poincare(self):
        """Coefficients of the truncated series ``Σ β_{i,j} t^i y^j`` keyed by ``(i, j)``."""
        return dict(self.nonzero())

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.nonzero() == other.nonzero()


def betti_table(res):
    """``β_{i,j} = dim H_i(k ⊗ F)_j`` read off a resolution window."""
    out = {}
    for i in range(res.i_min, res.i_max + 1):
        for j in sorted(set(res.generator_degrees(i))):
            if j > res.j_max:
                continue
            n = res.generator_degrees(i).count(j)
            if not res.is_module:
                n -= rank(res.reduced_differential(i, j)) + rank(res.reduced_differential(i + 1, j))
            if n:
                out[(i, j)] = n
    return BettiTable(res.i_max, res.j_max, out, certified=termination_certified(res))


def termination_certified(res):
    """Whether the window provably contains the whole Betti table.

    Requires an index ``i`` past the input complex with ``F_i`` empty in the
    window, plus either a polynomial algebra or ``t_{i-1}`` plus the largest
    relation degree fitting inside ``j_max``.
    """
    A = res.algebra
    c = res.source
    if c.truncated:
        return False
    for i in range(max(res.i_min, c.i_max + 1), res.i_max + 1):
        if res.generator_degrees(i):
            continue
        if A.polynomial:
            return True
        prev = res.generator_degrees(i - 1)
        t_prev = max(prev) if prev else None
        if A.relation_degree is None:
            return False
        if t_prev is None or t_prev + A.relation_degree <= res.j_max:
            return True
        return False
    return False


@dataclass
class RegularityVerdict:
    value: object  # Fraction, or None for minus infinity
    boundary_i: bool = False
    boundary_j: bool = False
    termination_certified: bool = False
    witness: tuple = None

    @property
    def boundary_attained(self):
        return self.boundary_i or self.boundary_j

    @property
    def is_minus_infinity(self):
        return self.value is None

    def render(self):
        return render_rational(self.value)


def render_rational(v):
    if v is None:
        return "-inf"
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def regularity(b, gd=None):
    """``max (j - i*gd) / gd`` over the nonzero entries, with boundary flags."""
    gd = b.gd if gd is None else gd
    nz = b.nonzero()
    if not nz:
        return RegularityVerdict(None, termination_certified=b.certified)
    vals = {k: Fraction(k[1] - k[0] * gd, gd) for k in nz}
    best = max(vals.values())
    arg = sorted(k for k, v in vals.items() if v == best)
    return RegularityVerdict(best, boundary_i=any(i >= b.i_max for i, _ in arg),
                             boundary_j=any(j >= b.j_max for _, j in arg),
                             termination_certified=b.certified, witness=arg[0])


def module_regularity(m, i_max, j_max):
    res = resolve(m, i_max, j_max)
    b = betti_table(res)
    b.gd = m.algebra.g
    return regularity(b)


# ---------------------------------------------------------------------------
# derived tensor products


def _coefficients(res, i):
    """For each generator ``k`` of ``F_i``: ``[(k', Element)]`` with ``d e_k = Σ α e_{k'}``."""
    A = res.algebra
    out = []
    if i not in res.dF:
        return out
    src_degs = res.generator_degrees(i)
    tgt_degs = res.generator_degrees(i - 1)
    col = 0
    for e, V in res.dF[i].groups:
        offs = res.F[i - 1].offsets(e) if i - 1 in res.F else []
        for c in range(V.ncols):
            v = V.columns([c])
            terms = []
            for kp, dk in enumerate(tgt_degs):
                if dk > e:
                    break
                n = A.dim(e - dk)
                if n == 0:
                    continue
                seg = v.rows(range(offs[kp], offs[kp] + n))
                if not seg.is_zero():
                    terms.append((kp, Element(e - dk, seg)))
            out.append(terms)
            col += 1
    assert col == len(src_degs)
    return out


def tensor_with_resolution(res, n, images=None, i_top=None):
    """``F ⊗_A N`` as a complex over the algebra of ``N``.

    ``images`` (one element of ``N``'s algebra per generator of ``A``) makes
    ``N`` an ``A``-module by restriction; otherwise ``N`` must be over ``A``.
    """
    from .gradedcat import direct_sum, restrict_scalars, twist, zero_module
    ncx = as_complex(n)
    S = ncx.algebra
    A = res.algebra
    if images is None and S is not A:
        raise ValueError("N must be over the resolved algebra unless images are given")
    nA = restrict_scalars(ncx, A, images) if images is not None else ncx
    top = res.built_to if i_top is None else i_top
    F = S.field
    coeffs = {p: _coefficients(res, p) for p in range(res.i_min, top + 1)}
    degs = {p: res.generator_degrees(p) for p in range(res.i_min, top + 1)}
    layout = {}
    for p in range(res.i_min, top + 1):
        for q in ncx.modules:
            i = p + q
            if i > top + ncx.i_min:
                continue
            layout.setdefault(i, []).append((p, q))
    mods = {}
    for i, pq in layout.items():
        parts = []
        for p, q in pq:
            for d in degs[p]:
                parts.append(twist(ncx.module(q), d))
        mods[i] = direct_sum(parts, name=f"T_{i}") if parts else zero_module(S)
    i_hi = top + ncx.i_min

    def block_offsets(i, j):
        offs, pos = {}, 0
        for p, q in layout.get(i, []):
            for k, d in enumerate(degs[p]):
                offs[(p, q, k)] = pos
                pos += ncx.dim(q, j - d)
        return offs, pos

    def diff(i, j):
        src_off, ns = block_offsets(i, j)
        dst_off, nt = block_offsets(i - 1, j)
        entries = ExactMatrix.zeros(F, nt, ns)
        blocks = []
        for p, q in layout.get(i, []):
            for k, d in enumerate(degs[p]):
                width = ncx.dim(q, j - d)
                if width == 0:
                    continue
                c0 = src_off[(p, q, k)]
                # d_F ⊗ 1
                if (p - 1, q) in [(a, b) for a, b in layout.get(i - 1, [])]:
                    for kp, alpha in coeffs[p][k]:
                        r0 = dst_off[(p - 1, q, kp)]
                        mat = element_action(nA.module(q), alpha, j - d)
                        blocks.append((r0, c0, mat))
                # (-1)^p 1 ⊗ d_N
                if (p, q - 1) in layout.get(i - 1, []):
                    r0 = dst_off[(p, q - 1, k)]
                    mat = ncx.diff(q, j - d)
                    blocks.append((r0, c0, mat if p % 2 == 0 else -mat))
        if not blocks:
            return entries
        ent = {}
        for r0, c0, mat in blocks:
            for (r, cc), v in _nonzeros(mat):
                key = (r0 + r, c0 + cc)
                ent[key] = F.add(ent.get(key, F.zero), v)
        return ExactMatrix.from_entries(F, (nt, ns), {k: v for k, v in ent.items() if v != 0})

    out = ComplexTable(S, {i: mods[i] for i in sorted(mods) if i <= i_hi}, diff, truncated=True,
                       name="F⊗N")
    return out


def _nonzeros(mat):
    if mat.field.sparse:
        coo = mat.data.tocoo()
        return [((int(r), int(c)), int(v)) for r, c, v in zip(coo.row, coo.col, coo.data)]
    out = []
    for r in range(mat.nrows):
        for c in range(mat.ncols):
            v = mat.data[r, c]
            if v != 0:
                out.append(((r, c), v))
    return out


def derived_tensor(m, n, i_max, j_max, images=None):
    """``M ⊗^L N``: resolve ``M``, tensor with ``N``.  Homology is exact for indices below ``i_max``."""
    res = resolve(m, i_max, j_max)
    return tensor_with_resolution(res, n, images=images, i_top=min(res.built_to, i_max))


def tor_dims(m, n, i_max, j_max, images=None):
    """``{(i, j): dim Tor_i(M, N)_j}`` for ``i < i_max`` and ``j <= j_max``."""
    t = derived_tensor(m, n, i_max, j_max, images=images)
    out = {}
    for i in range(t.i_min, i_max):
        for j in range(0, j_max + 1):
            if j > t.cap:
                break
            d, _ = homology(t, i, j)
            if d:
                out[(i, j)] = d
    return out


# ---------------------------------------------------------------------------
# bar complex oracle


def bar_tor_oracle(m, i_max, j_max):
    """``dim Tor_{i,j}(k, M)`` from the normalized bar complex ``Ā^{⊗i} ⊗ M``."""
    A = m.algebra
    F = A.field
    if A.cap < j_max:
        raise WindowExceeded(f"algebra cap {A.cap} below {j_max}")
    if m.cap < j_max:
        raise WindowExceeded(f"module cap {m.cap} below {j_max}")
    amod = A.as_module()
    pos = [e for e in range(1, j_max + 1) if A.dims[e]]
    mdeg = [u for u in sorted(m.dims) if u <= j_max]
    mu_cache, act_cache = {}, {}

    def mu(e, f):
        if (e, f) not in mu_cache:
            mu_cache[(e, f)] = ExactMatrix.hstack(F, [word_action(amod, e, b, f) for b in range(A.dims[e])],
                                                  A.dims[e + f])
        return mu_cache[(e, f)]

    def act(e, u):
        if (e, u) not in act_cache:
            act_cache[(e, u)] = ExactMatrix.hstack(F, [word_action(m, e, b, u) for b in range(A.dims[e])],
                                                   m.dim(u + e))
        return act_cache[(e, u)]

    def tuples(i, j):
        out = []
        for u in mdeg:
            rest = j - u
            for combo in _compositions(rest, i, pos):
                out.append((combo, u))
        return out

    def size(t):
        combo, u = t
        n = m.dim(u)
        for e in combo:
            n *= A.dims[e]
        return n

    def diff(i, j):
        src = tuples(i, j)
        dst = tuples(i - 1, j)
        doff, pos_ = {}, 0
        for t in dst:
            doff[t] = pos_
            pos_ += size(t)
        nt = pos_
        cols = []
        for t in src:
            combo, u = t
            n = size(t)
            pieces = {}
            for l in range(i):
                sign = -1 if (l + 1) % 2 else 1
                if l < i - 1:
                    e, f = combo[l], combo[l + 1]
                    if e + f > A.cap or A.dims[e + f] == 0:
                        continue
                    new = combo[:l] + (e + f,) + combo[l + 2:]
                    before = 1
                    for x in combo[:l]:
                        before *= A.dims[x]
                    after = m.dim(u)
                    for x in combo[l + 2:]:
                        after *= A.dims[x]
                    mat = ExactMatrix.identity(F, before).kron(mu(e, f)).kron(ExactMatrix.identity(F, after))
                    key = (new, u)
                else:
                    e = combo[-1]
                    if m.dim(u + e) == 0:
                        continue
                    before = 1
                    for x in combo[:-1]:
                        before *= A.dims[x]
                    mat = ExactMatrix.identity(F, before).kron(act(e, u))
                    key = (combo[:-1], u + e)
                mat = mat if sign == 1 else -mat
                pieces[key] = pieces[key] + mat if key in pieces else mat
            col = []
            for key, mat in pieces.items():
                col.append((doff[key], mat))
            cols.append((n, col))
        ns = sum(n for n, _ in cols)
        ent = {}
        c0 = 0
        for n, col in cols:
            for r0, mat in col:
                for (r, c), v in _nonzeros(mat):
                    k = (r0 + r, c0 + c)
                    ent[k] = F.add(ent.get(k, F.zero), v)
            c0 += n
        return ExactMatrix.from_entries(F, (nt, ns), {k: v for k, v in ent.items() if v != 0}), ns

    out = {}
    for j in range(0, j_max + 1):
        ranks = {}
        dims = {}
        for i in range(0, i_max + 2):
            if i == 0:
                dims[0] = m.dim(j)
                ranks[0] = 0
                continue
            d, ns = diff(i, j)
            dims[i] = ns
            ranks[i] = rank(d) if d.nrows and d.ncols else 0
        for i in range(0, i_max + 1):
            t = dims[i] - ranks[i] - ranks[i + 1]
            if t:
                out[(i, j)] = t
    return BettiTable(i_max, j_max, out)


def _compositions(total, parts, allowed):
    """Ordered tuples of ``parts`` entries from ``allowed`` summing to ``total``."""
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    for e in allowed:
        if e > total:
            break
        for rest in _compositions(total - e, parts - 1, allowed):
            out.append((e,) + rest)
    return out


# ---------------------------------------------------------------------------
# linear part, linearity defect, Koszulness


def linear_part(res):
    """The complex ``linp F``: differentials keep only components of degree ``g``."""
    A = res.algebra
    g = A.g
    hom = {}
    for i in range(res.i_min + 1, res.built_to + 1):
        h = FreeHom(res.F[i - 1])
        tgt = res.generator_degrees(i - 1)
        for e, V in res.dF[i].groups:
            offs = res.F[i - 1].offsets(e)
            keep_rows = []
            for kp, dk in enumerate(tgt):
                if dk == e - g:
                    keep_rows.extend(range(offs[kp], offs[kp] + A.dim(g)))
            mask = ExactMatrix.unit_columns(A.field, V.nrows, keep_rows)
            h.add(e, mask @ (mask.T @ V))
        hom[i] = h
    mods = {i: res.F[i] for i in range(res.i_min, res.built_to + 1)}
    return ComplexTable(A, mods, lambda i, j: hom[i].matrix(j), truncated=True, name="linp F")


@dataclass
class LinearityDefectVerdict:
    value: object  # int, or None when linp F is exact in the window
    witness: tuple = None
    boundary: bool = False


def lind(res):
    """Largest ``i < i_max`` with ``H_i(linp F)`` nonzero in degrees ``<= j_max``."""
    lp = linear_part(res)
    best, wit = None, None
    for i in range(res.i_min, res.built_to):
        for j in range(0, res.j_max + 1):
            d, _ = homology(lp, i, j)
            if d:
                best, wit = i, (i, j)
                break
    return LinearityDefectVerdict(best, wit, boundary=best is not None and best >= res.built_to - 1)


@dataclass
class KoszulVerdict:
    koszul: bool
    witness: tuple = None
    i_max: int = 0
    j_max: int = 0

    @property
    def label(self):
        return "KoszulUpToWindow" if self.koszul else "NotKoszul"


def is_koszul(A, i_max, j_max=None):
    """``KoszulUpToWindow`` when ``β_{i,j}(k) = 0`` off the diagonal for ``i <= i_max``."""
    if A.g != 1:
        raise NotStandardGraded(f"algebra generated in degree {A.g}, not 1")
    j_max = A.cap if j_max is None else j_max
    b = betti_table(resolve(residue_field(A), i_max, j_max))
    off = sorted(k for k in b.nonzero() if k[0] != k[1])
    if off:
        return KoszulVerdict(False, off[0], i_max, j_max)
    return KoszulVerdict(True, None, i_max, j_max)
