"""Graded modules and bounded-below complexes over an :class:`AlgebraTable`.

Everything is stored degree by degree.  A module knows its graded pieces for
``j <= cap`` and is zero below ``j_min``; ``INF`` marks a module known in
every degree (for example a module of finite length).
"""

from dataclasses import dataclass, field as dc_field
from math import gcd

from .errors import BadPieceIndex, MixedDegrees, UnsoundWindow, WindowExceeded
from .exactlinalg import ExactMatrix, column_span_complement, image_basis, kernel_basis, pivot_columns, solve
from .polyring import AlgebraTable, Element

INF = 10 ** 9


def _cdiv(a, b):
    return -((-a) // b)


# ---------------------------------------------------------------------------
# modules


class ModuleTable:
    """A graded module presented by piece dimensions and generator actions.

    ``action(a, j)`` is the matrix of algebra generator ``a`` from ``M_j`` to
    ``M_{j+g}``.  Actions are either given up front (``act[a][j]``) or produced
    on demand by ``action_fn`` and cached.
    """

    def __init__(self, algebra, j_min, cap, dims, act=None, action_fn=None, name=None, labels=None):
        self.algebra = algebra
        self.field = algebra.field
        self.j_min = j_min
        self.cap = cap
        self.dims = {j: d for j, d in dims.items() if d and j >= j_min and j <= cap}
        self._act = [dict(m) for m in act] if act is not None else [dict() for _ in range(algebra.ngens)]
        self._action_fn = action_fn
        self.name = name
        self.labels = labels
        self._cache = {}

    @property
    def g(self):
        return self.algebra.g

    def dim(self, j):
        if j > self.cap:
            raise WindowExceeded(f"module degree {j} beyond cap {self.cap}")
        return self.dims.get(j, 0)

    def support(self):
        return sorted(self.dims)

    def top(self):
        """Largest nonzero degree, or ``None`` for the zero module."""
        return max(self.dims) if self.dims else None

    def bottom(self):
        return min(self.dims) if self.dims else None

    def is_zero(self):
        return not self.dims and self.cap >= INF

    def action(self, a, j):
        g = self.g
        if j + g > self.cap:
            raise WindowExceeded(f"module degree {j + g} beyond cap {self.cap}")
        src, dst = self.dims.get(j, 0), self.dims.get(j + g, 0)
        if src == 0 or dst == 0:
            return ExactMatrix.zeros(self.field, dst, src)
        m = self._act[a].get(j)
        if m is None:
            m = self._action_fn(a, j)
            self._act[a][j] = m
        return m

    def dims_list(self, lo, hi):
        return [self.dim(j) for j in range(lo, hi + 1)]

    def __repr__(self):
        cap = "inf" if self.cap >= INF else self.cap
        return f"ModuleTable({self.name or '?'}, dims={dict(sorted(self.dims.items()))}, cap={cap})"


def word_action(m, e, b, j):
    """Action of basis element ``b`` of ``A_e`` on ``M_j`` (a matrix ``M_j -> M_{j+e}``)."""
    key = ("word", e, b, j)
    hit = m._cache.get(key)
    if hit is not None:
        return hit
    if e == 0:
        out = ExactMatrix.identity(m.field, m.dim(j))
    else:
        a, bp = m.algebra.parents[e][b]
        out = m.action(a, j + e - m.g) @ word_action(m, e - m.g, bp, j)
    m._cache[key] = out
    return out


def element_action(m, x, j):
    """Matrix of multiplication by the algebra element ``x`` from ``M_j`` to ``M_{j+deg x}``."""
    e = x.degree
    out = ExactMatrix.zeros(m.field, m.dim(j + e), m.dim(j))
    if out.nrows == 0 or out.ncols == 0:
        return out
    for b, row in enumerate(x.vec.tolist()):
        c = row[0]
        if c != 0:
            w = word_action(m, e, b, j)
            out = out + (w if c == 1 else w.scale(c))
    return out


def zero_module(algebra):
    return ModuleTable(algebra, 0, INF, {}, name="0")


def residue_field(algebra):
    """``k = A / m`` concentrated in degree 0."""
    return ModuleTable(algebra, 0, INF, {0: 1}, name="k")


def algebra_module(algebra):
    return algebra.as_module()


def twist(m, t):
    """``M(-t)``, with ``M(-t)_j = M_{j-t}``."""
    if t == 0:
        return m
    cap = m.cap if m.cap >= INF else m.cap + t
    return ModuleTable(m.algebra, m.j_min + t, cap, {j + t: d for j, d in m.dims.items()},
                       action_fn=lambda a, j: m.action(a, j - t), name=f"{m.name or 'M'}({-t})")


def direct_sum(mods, name=None):
    """Basis of ``M_j`` ordered by (summand, inner index)."""
    mods = list(mods)
    if not mods:
        raise ValueError("direct sum of no modules")
    A = mods[0].algebra
    cap = min(m.cap for m in mods)
    j_min = min(m.j_min for m in mods)
    degs = set()
    for m in mods:
        degs.update(j for j in m.dims if j <= cap)
    dims = {j: sum(m.dims.get(j, 0) for m in mods) for j in degs}

    def fn(a, j):
        return ExactMatrix.block_diag(A.field, [m.action(a, j) for m in mods])

    return ModuleTable(A, j_min, cap, dims, action_fn=fn, name=name or " + ".join(m.name or "M" for m in mods))


# ---------------------------------------------------------------------------
# free modules and maps out of them


class FreeModule(ModuleTable):
    """``⊕_k A(-a_k)`` with generator degrees ``a_k`` in non-decreasing order."""

    def __init__(self, algebra, degrees, name=None):
        degrees = list(degrees)
        if any(x > y for x, y in zip(degrees, degrees[1:])):
            raise ValueError("free module generator degrees must be non-decreasing")
        self.degrees = degrees
        self.groups = []
        for d in degrees:
            if self.groups and self.groups[-1][0] == d:
                self.groups[-1][1] += 1
            else:
                self.groups.append([d, 1])
        lo = degrees[0] if degrees else 0
        cap = algebra.cap + lo if degrees else INF
        dims = {}
        for e, K in self.groups:
            for t in range(0, cap - e + 1):
                dt = algebra.dims[t] if t <= algebra.cap else 0
                if dt:
                    dims[e + t] = dims.get(e + t, 0) + K * dt
        super().__init__(algebra, lo, cap, dims, action_fn=self._free_action, name=name or "F")

    @property
    def rank(self):
        return len(self.degrees)

    def _free_action(self, a, j):
        A = self.algebra
        blocks = []
        for e, K in self.groups:
            if j - e < 0:
                blocks.append(ExactMatrix.zeros(A.field, A.dim(j - e + A.g), 0))
                continue
            m = A.act(a, j - e)
            blocks.append(m if K == 1 else ExactMatrix.identity(A.field, K).kron(m))
        return ExactMatrix.block_diag(A.field, blocks)

    def offsets(self, j):
        """Start index of each generator's block inside ``F_j``."""
        A = self.algebra
        out, pos = [], 0
        for d in self.degrees:
            out.append(pos)
            pos += A.dim(j - d) if j >= d else 0
        return out

    def generator_vector(self, k):
        """The ``k``-th generator as a column in ``F_{a_k}``."""
        d = self.degrees[k]
        return ExactMatrix.unit_columns(self.field, self.dim(d), [self.offsets(d)[k]])


class FreeHom:
    """A degree-0 map from ``⊕_k A(-a_k)`` to a module, fixed by the generator images.

    Generators are appended in non-decreasing degree; the matrix in degree
    ``j`` lists source columns in order (generator, algebra basis index).
    """

    def __init__(self, target):
        self.target = target
        self.algebra = target.algebra
        self.groups = []  # [degree, image matrix target_e x K]
        self._cache = {}

    @property
    def degrees(self):
        return [e for e, v in self.groups for _ in range(v.ncols)]

    def count(self):
        return sum(v.ncols for _, v in self.groups)

    def add(self, degree, images):
        """Append generators of ``degree`` with images the columns of ``images``."""
        if images.ncols == 0:
            return
        if self.groups and degree < self.groups[-1][0]:
            raise ValueError("generators must be added in non-decreasing degree")
        if images.nrows != self.target.dim(degree):
            raise ValueError("image vectors have the wrong length")
        if self.groups and self.groups[-1][0] == degree:
            e, v = self.groups[-1]
            self.groups[-1] = [e, ExactMatrix.hstack(v.field, [v, images], v.nrows)]
            self._cache = {k: val for k, val in self._cache.items() if k[0] != len(self.groups) - 1}
        else:
            self.groups.append([degree, images])

    def _expand(self, gi, t):
        key = (gi, t)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        A = self.algebra
        M = self.target
        e, V = self.groups[gi]
        K = V.ncols
        g = A.g
        dt = A.dim(t) if t >= 0 else 0
        if t == 0:
            out = V
        elif dt == 0:
            out = ExactMatrix.zeros(A.field, M.dim(e + t), 0)
        else:
            prev = self._expand(gi, t - g)
            dprev = A.dim(t - g)
            by_gen = {}
            for b, (a, bp) in enumerate(A.parents[t]):
                by_gen.setdefault(a, []).append((b, bp))
            pieces, positions = [], []
            for a in sorted(by_gen):
                pairs = by_gen[a]
                cols = [k * dprev + bp for k in range(K) for _, bp in pairs]
                pieces.append(M.action(a, e + t - g) @ prev.columns(cols))
                positions.extend(k * dt + b for k in range(K) for b, _ in pairs)
            stacked = ExactMatrix.hstack(A.field, pieces, M.dim(e + t))
            order = sorted(range(len(positions)), key=positions.__getitem__)
            out = stacked.columns(order)
        self._cache[key] = out
        return out

    def matrix(self, j):
        """Matrix from ``F_j`` to ``target_j``."""
        blocks = [self._expand(gi, j - e) for gi, (e, _) in enumerate(self.groups) if e <= j]
        return ExactMatrix.hstack(self.algebra.field, blocks, self.target.dim(j))

    def source(self):
        return FreeModule(self.algebra, self.degrees)


def free_module(algebra, degrees):
    return FreeModule(algebra, sorted(degrees))


def _hom_from_vectors(target, gens):
    """FreeHom whose generators map to ``gens``: a list of (degree, column) pairs."""
    h = FreeHom(target)
    for d, v in sorted(gens, key=lambda t: t[0]):
        h.add(d, v)
    return h


def image_module(m, gens, cap=None, name=None):
    """The submodule of ``m`` generated by ``gens`` (pairs ``(degree, column vector)``)."""
    h = _hom_from_vectors(m, gens)
    cap = m.cap if cap is None else min(cap, m.cap)
    if cap >= INF:
        raise WindowExceeded("a finite cap is needed to present a submodule")
    A = m.algebra
    bases, dims = {}, {}
    lo = min((d for d, _ in gens), default=0)
    for j in range(lo, cap + 1):
        mat = h.matrix(j)
        piv = pivot_columns(mat) if mat.ncols else []
        bases[j] = mat.columns(piv)
        if piv:
            dims[j] = len(piv)

    def fn(a, j):
        return solve(bases[j + A.g], m.action(a, j) @ bases[j])

    sub = ModuleTable(A, lo, cap, dims, action_fn=fn, name=name or "image")
    sub.inclusion = bases
    return sub


def quotient_module(m, gens, cap=None, name=None):
    """``m / <gens>``; basis of each piece is a set of standard basis vectors of ``m``."""
    h = _hom_from_vectors(m, gens)
    cap = m.cap if cap is None else min(cap, m.cap)
    if cap >= INF:
        raise WindowExceeded("a finite cap is needed to present a quotient")
    A = m.algebra
    F = A.field
    lifts, projs, dims = {}, {}, {}
    for j in range(m.j_min, cap + 1):
        n = m.dim(j)
        if n == 0:
            continue
        rel = h.matrix(j) if h.groups and j >= h.groups[0][0] else ExactMatrix.zeros(F, n, 0)
        span = rel.columns(pivot_columns(rel)) if rel.ncols else rel
        eye = ExactMatrix.identity(F, n)
        keep = column_span_complement(span, eye)
        if not keep:
            continue
        lift = eye.columns(keep)
        full = ExactMatrix.hstack(F, [span, lift], n)
        coords = solve(full, eye)
        projs[j] = coords.rows(range(span.ncols, n))
        lifts[j] = lift
        dims[j] = len(keep)

    def fn(a, j):
        return projs[j + A.g] @ (m.action(a, j) @ lifts[j])

    q = ModuleTable(A, m.j_min, cap, dims, action_fn=fn, name=name or "quotient")
    q.projection = projs
    q.lift = lifts
    return q


def cyclic_quotient(algebra, elements, name=None):
    """``A / (elements)`` for homogeneous algebra elements."""
    if algebra.cap >= INF:
        raise WindowExceeded("algebra must have a finite cap")
    return quotient_module(algebra.as_module(), [(x.degree, x.vec) for x in elements], name=name)


# ---------------------------------------------------------------------------
# complexes


class ComplexTable:
    """A bounded-below complex ``C_{i_min} <- ... <- C_{i_max}``.

    ``diff(i, j)`` is ``d_i`` in degree ``j`` (from ``C_i`` to ``C_{i-1}``).
    When ``truncated`` is set the terms above ``i_max`` are unknown rather
    than zero.
    """

    def __init__(self, algebra, modules, diff_fn, truncated=False, name=None):
        self.algebra = algebra
        self.field = algebra.field
        self.modules = dict(modules)
        if not self.modules:
            self.modules = {0: zero_module(algebra)}
        self.i_min = min(self.modules)
        self.i_max = max(self.modules)
        self._diff_fn = diff_fn
        self._diffs = {}
        self.truncated = truncated
        self.name = name

    @classmethod
    def from_module(cls, m):
        return cls(m.algebra, {0: m}, lambda i, j: None, name=m.name)

    @property
    def cap(self):
        return min(m.cap for m in self.modules.values())

    def module(self, i):
        if i in self.modules:
            return self.modules[i]
        if i > self.i_max and self.truncated:
            raise UnsoundWindow(f"homological index {i} beyond truncation {self.i_max}")
        return zero_module(self.algebra)

    def dim(self, i, j):
        return self.module(i).dim(j)

    def diff(self, i, j):
        key = (i, j)
        hit = self._diffs.get(key)
        if hit is not None:
            return hit
        src, dst = self.dim(i, j), self.dim(i - 1, j)
        if src == 0 or dst == 0 or i not in self.modules or (i - 1) not in self.modules:
            out = ExactMatrix.zeros(self.field, dst, src)
        else:
            out = self._diff_fn(i, j)
        self._diffs[key] = out
        return out

    def support(self):
        """Sorted degrees where some term is nonzero (within each term's cap)."""
        out = set()
        for m in self.modules.values():
            out.update(m.dims)
        return sorted(out)

    def __repr__(self):
        return f"ComplexTable({self.name or '?'}, [{self.i_min}, {self.i_max}], cap={self.cap})"


def as_complex(x):
    return x if isinstance(x, ComplexTable) else ComplexTable.from_module(x)


def shift(c, n):
    """``C[n]`` with ``(C[n])_i = C_{i+n}``."""
    c = as_complex(c)
    if n == 0:
        return c
    return ComplexTable(c.algebra, {i - n: m for i, m in c.modules.items()},
                        lambda i, j: c.diff(i + n, j), truncated=c.truncated, name=f"{c.name or 'C'}[{n}]")


def twist_complex(c, t):
    c = as_complex(c)
    if t == 0:
        return c
    return ComplexTable(c.algebra, {i: twist(m, t) for i, m in c.modules.items()},
                        lambda i, j: c.diff(i, j - t), truncated=c.truncated, name=f"{c.name or 'C'}({-t})")


def homology(c, i, j):
    """``(dim H_i(C)_j, representatives)``; raises UnsoundWindow outside the trustworthy window."""
    c = as_complex(c)
    if j > c.cap:
        raise UnsoundWindow(f"degree {j} beyond cap {c.cap}")
    if c.truncated and i + 1 > c.i_max:
        raise UnsoundWindow(f"H_{i} needs C_{i + 1}, which is truncated")
    n = c.dim(i, j)
    if n == 0:
        return 0, ExactMatrix.zeros(c.field, 0, 0)
    z = kernel_basis(c.diff(i, j))
    b = c.diff(i + 1, j)
    keep = column_span_complement(b, z)
    return len(keep), z.columns(keep)


def homology_module(c, i, cap=None):
    """``H_i(C)`` as a module, presented on homology representatives in degrees ``<= cap``."""
    c = as_complex(c)
    cap = c.cap if cap is None else min(cap, c.cap)
    if cap >= INF:
        cap = max(c.support(), default=0)
    A = c.algebra
    F = c.field
    full, dims = {}, {}
    for j in range(c.module(i).j_min, cap + 1):
        d, reps = homology(c, i, j)
        if d == 0:
            continue
        b = image_basis(c.diff(i + 1, j))
        full[j] = (b.ncols, ExactMatrix.hstack(F, [b, reps], c.dim(i, j)))
        dims[j] = d

    def fn(a, j):
        k, basis = full[j + A.g]
        ks, src = full[j]
        moved = c.module(i).action(a, j) @ src.columns(range(ks, src.ncols))
        return solve(basis, moved).rows(range(k, basis.ncols))

    return ModuleTable(A, c.module(i).j_min, cap, dims, action_fn=fn, name=f"H_{i}({c.name or 'C'})")


def homology_dims(c, i_range, j_range):
    """``{(i, j): dim H_i(C)_j}`` for the nonzero entries in the given ranges."""
    out = {}
    for i in i_range:
        for j in j_range:
            d, _ = homology(c, i, j)
            if d:
                out[(i, j)] = d
    return out


@dataclass
class ChainMap:
    """Degree-0 maps ``source_i -> target_i``; ``shift`` records that the source is ``X(-shift)``."""

    source: ComplexTable
    target: ComplexTable
    map_fn: object
    shift: int = 0
    _cache: dict = dc_field(default_factory=dict)

    def matrix(self, i, j):
        key = (i, j)
        if key not in self._cache:
            s, t = self.source.dim(i, j), self.target.dim(i, j)
            if s == 0 or t == 0:
                self._cache[key] = ExactMatrix.zeros(self.source.field, t, s)
            else:
                self._cache[key] = self.map_fn(i, j)
        return self._cache[key]


def identity_map(c):
    c = as_complex(c)
    return ChainMap(c, c, lambda i, j: ExactMatrix.identity(c.field, c.dim(i, j)))


def zero_map(src, dst):
    src, dst = as_complex(src), as_complex(dst)
    return ChainMap(src, dst, lambda i, j: ExactMatrix.zeros(src.field, dst.dim(i, j), src.dim(i, j)))


def multiplication_map(c, x):
    """``x * -``: ``C(-w) -> C`` for an algebra element ``x`` of degree ``w``."""
    c = as_complex(c)
    w = x.degree
    src = twist_complex(c, w)
    return ChainMap(src, c, lambda i, j: element_action(c.module(i), x, j - w), shift=w)


def mapping_cone(f):
    """``Cone_i = Y_{i-1} ⊕ Z_i`` with ``d(y, z) = (-d y, f(y) + d z)``."""
    Y, Z = f.source, f.target
    F = Y.field
    idx = set(i + 1 for i in Y.modules) | set(Z.modules)
    mods = {i: direct_sum([Y.module(i - 1), Z.module(i)], name=f"cone_{i}") for i in sorted(idx)}

    def diff(i, j):
        y1, z1 = Y.dim(i - 1, j), Z.dim(i, j)
        y0, z0 = Y.dim(i - 2, j), Z.dim(i - 1, j)
        top = ExactMatrix.hstack(F, [-Y.diff(i - 1, j), ExactMatrix.zeros(F, y0, z1)], y0)
        bot = ExactMatrix.hstack(F, [f.matrix(i - 1, j), Z.diff(i, j)], z0)
        return ExactMatrix.vstack(F, [top, bot], y1 + z1)

    return ComplexTable(Y.algebra, mods, diff, truncated=Y.truncated or Z.truncated,
                        name=f"cone({Y.name or 'Y'} -> {Z.name or 'Z'})")


def koszul_complex(elements, base):
    """``K[x; base]`` built as iterated mapping cones of multiplication maps, in input order."""
    c = as_complex(base)
    elements = list(elements)
    if len({x.degree for x in elements}) > 1:
        raise MixedDegrees(f"Koszul elements have degrees {sorted({x.degree for x in elements})}")
    for x in elements:
        c = mapping_cone(multiplication_map(c, x))
    c.name = f"K[{len(elements)}; {base.name or 'M'}]"
    return c


# ---------------------------------------------------------------------------
# changes of grading and of rings


def fractional_veronese_algebra(A, s):
    """``A^{(1/s)}``: the same algebra with ``A^{(1/s)}_{sj} = A_j``.  Cached, so identical inputs share a table."""
    if s == 1:
        return A
    if A.regraded_from is not None:
        base, s0 = A.regraded_from
        return fractional_veronese_algebra(base, s0 * s)
    key = ("frac", s)
    if key in A._cache:
        return A._cache[key]
    g = A.g * s
    cap = A.cap * s + s - 1 if A.cap < INF else INF
    dims = [0] * (cap + 1)
    for j, d in enumerate(A.dims):
        dims[s * j] = d
    mult = []
    for a in range(A.ngens):
        per = {}
        for j in range(0, cap - g + 1):
            if j % s == 0:
                per[j] = A.mult[a][j // s]
            else:
                per[j] = ExactMatrix.zeros(A.field, 0, 0)
        mult.append(per)
    parents = {s * j: p for j, p in A.parents.items()}
    labels = {s * j: l for j, l in A.labels.items()}
    out = AlgebraTable(A.field, g, cap, dims, mult, parents, labels, name=f"({A.name})^(1/{s})",
                       relation_degree=None if A.relation_degree is None else A.relation_degree * s,
                       polynomial=A.polynomial, regraded_from=(A, s))
    A._cache[key] = out
    return out


def regrade_element(x, s):
    """The element ``x`` viewed in ``A^{(1/s)}``."""
    return Element(x.degree * s, x.vec)


def fractional_veronese(m, s, algebra=None):
    """``M^{(1/s)}`` for a module or complex; degrees are multiplied by ``s``."""
    if isinstance(m, ComplexTable):
        A2 = fractional_veronese_algebra(m.algebra, s) if algebra is None else algebra
        mods = {i: fractional_veronese(x, s, A2) for i, x in m.modules.items()}
        return ComplexTable(A2, mods, lambda i, j: m.diff(i, j // s) if j % s == 0 else
                            ExactMatrix.zeros(m.field, 0, 0), truncated=m.truncated,
                            name=f"{m.name or 'C'}^(1/{s})")
    A2 = fractional_veronese_algebra(m.algebra, s) if algebra is None else algebra
    if s == 1 and A2 is m.algebra:
        return m
    cap = m.cap * s + s - 1 if m.cap < INF else INF

    def fn(a, j):
        return m.action(a, j // s)

    return ModuleTable(A2, m.j_min * s, cap, {s * j: d for j, d in m.dims.items()}, action_fn=fn,
                       name=f"{m.name or 'M'}^(1/{s})")


def phi_functor(n, d=None, pieces=None):
    """``Φ(N)`` for ``N`` over ``A^{(1/d)}``: ``Φ(N)_j = ⊕_{i<d} N_{dj+i}`` as a module over ``A``.

    ``pieces`` restricts the sum to the given residues ``i``.
    """
    B = n.algebra
    if B.regraded_from is None:
        if d not in (None, 1):
            raise ValueError("module is not over a fractional Veronese algebra")
        return n
    A, s = B.regraded_from
    if d is not None and d != s:
        A = fractional_veronese_algebra(A, s // d) if s % d == 0 else None
        if A is None:
            raise ValueError(f"cannot apply Φ with d={d} to an algebra regraded by {s}")
        s = d
    res = list(range(s)) if pieces is None else sorted(pieces)
    if any(not 0 <= i < s for i in res):
        raise BadPieceIndex(f"piece indices {res} not in [0, {s - 1}]")
    cap = (n.cap - max(res)) // s if n.cap < INF else INF
    lo = n.j_min // s
    dims = {}
    for j in range(lo, (max(n.dims) // s if n.dims else lo) + 1):
        if j > cap:
            break
        tot = sum(n.dims.get(s * j + i, 0) for i in res)
        if tot:
            dims[j] = tot

    def fn(a, j):
        return ExactMatrix.block_diag(n.field, [n.action(a, s * j + i) for i in res])

    out = ModuleTable(A, lo, cap, dims, action_fn=fn, name=f"Phi({n.name or 'N'})")
    top = cap if cap < INF else max(n.dims, default=0) // s
    out.pieces = {(j, i): s * j + i for j in range(lo, top + 1) for i in res}
    return out


def phi_complex(c, d=None):
    c = as_complex(c)
    mods = {i: phi_functor(m, d) for i, m in c.modules.items()}
    A = next(iter(mods.values())).algebra
    s = c.algebra.g // A.g

    def diff(i, j):
        return ExactMatrix.block_diag(c.field, [c.diff(i, s * j + r) for r in range(s)])

    return ComplexTable(A, mods, diff, truncated=c.truncated, name=f"Phi({c.name or 'C'})")


def restrict_scalars(m, algebra, images):
    """``m`` viewed over ``algebra`` whose generator ``a`` acts as the element ``images[a]``."""
    if isinstance(m, ComplexTable):
        mods = {i: restrict_scalars(x, algebra, images) for i, x in m.modules.items()}
        return ComplexTable(algebra, mods, m.diff, truncated=m.truncated, name=m.name)
    for x in images:
        if x.degree != algebra.g:
            raise ValueError(f"image of degree {x.degree} cannot realise a generator of degree {algebra.g}")

    def fn(a, j):
        return element_action(m, images[a], j)

    return ModuleTable(algebra, m.j_min, m.cap, m.dims, action_fn=fn, name=m.name)


class VeroneseAlgebra(AlgebraTable):
    """``A^{(d)}`` with a word basis; ``change[j]`` expresses the basis of ``A^{(d)}_j`` in ``A_{dj}``."""

    def to_base(self, x):
        return Element(x.degree * self.d, self.change[x.degree] @ x.vec)

    def from_base(self, y):
        if y.degree % self.d:
            raise ValueError("element degree not divisible by d")
        j = y.degree // self.d
        return Element(j, solve(self.change[j], y.vec))


def veronese_algebra(A, d):
    """``A^{(d)}`` regenerated by the basis of ``A_{lcm(g, d)}`` and rebased to a word basis."""
    if d < 1:
        raise ValueError("d must be positive")
    if d == 1:
        return A
    key = ("veronese", d)
    if key in A._cache:
        return A._cache[key]
    F = A.field
    g2 = A.g // gcd(A.g, d)
    lcm = d * g2
    cap = A.cap // d if A.cap < INF else INF
    if cap < g2:
        raise WindowExceeded(f"need A up to degree {lcm}, cap is {A.cap}")
    amod = A.as_module()
    ngens = A.dim(lcm)
    gens = [Element(lcm, ExactMatrix.unit_columns(F, ngens, [a])) for a in range(ngens)]
    dims = [0] * (cap + 1)
    change = {0: ExactMatrix.identity(F, 1)}
    parents = {}
    dims[0] = 1
    for j in range(g2, cap + 1, g2):
        prev = change[j - g2]
        cands, owners = [], []
        for a, x in enumerate(gens):
            cands.append(element_action(amod, x, d * (j - g2)) @ prev)
            owners.extend((a, b) for b in range(prev.ncols))
        joined = ExactMatrix.hstack(F, cands, A.dim(d * j))
        piv = pivot_columns(joined)
        if len(piv) != A.dim(d * j):
            raise ValueError("Veronese piece is not generated in the lowest degree")
        change[j] = joined.columns(piv)
        parents[j] = [owners[c] for c in piv]
        dims[j] = len(piv)
    mult = []
    for a, x in enumerate(gens):
        per = {}
        for j in range(0, cap - g2 + 1):
            if j % g2 or dims[j] == 0:
                per[j] = ExactMatrix.zeros(F, dims[j + g2], dims[j])
                continue
            per[j] = solve(change[j + g2], element_action(amod, x, d * j) @ change[j])
        mult.append(per)
    out = VeroneseAlgebra(F, g2, cap, dims, mult, parents, {}, name=f"({A.name})^({d})",
                          polynomial=False)
    out.base, out.d, out.change = A, d, change
    A._cache[key] = out
    return out


def veronese_piece(m, d, i, algebra=None):
    """``V_i(d, M)`` over ``A^{(d)}``, with ``(V_i)_u = M_{du+i}``."""
    if not (0 <= i < d):
        raise BadPieceIndex(f"piece index {i} not in [0, {d - 1}]")
    if d == 1:
        return m
    V = veronese_algebra(m.algebra, d) if algebra is None else algebra
    cap = (m.cap - i) // d if m.cap < INF else INF
    dims = {}
    for j, n in m.dims.items():
        if (j - i) % d == 0 and j <= m.cap:
            u = (j - i) // d
            if u <= cap:
                dims[u] = n
    gens = [V.to_base(Element(V.g, ExactMatrix.unit_columns(V.field, V.dims[V.g], [a]))) for a in range(V.ngens)]

    def fn(a, u):
        return element_action(m, gens[a], d * u + i)

    return ModuleTable(V, _cdiv(m.j_min - i, d), cap, dims, action_fn=fn, name=f"V_{i}({d},{m.name or 'M'})")


@dataclass
class PushforwardModule:
    """``^h M`` with the Veronese grading, as a module over the source algebra.

    ``pieces[(j, i)]`` is the original degree ``dj + i`` of the block ``i`` in degree ``j``.
    """

    module: ModuleTable
    d: int
    pieces: dict
    original: ModuleTable = None

    def piece_dims(self, j):
        return [self.original.dim(self.d * j + i) for i in range(self.d)]


def pushforward(h, m, pieces=None):
    """``^h M = ⊕_i V_i(d, M)`` over the source of ``h``; ``(^hM)_j = ⊕_{i<d} M_{dj+i}``.

    With ``pieces`` only the listed ``V_i`` are kept.
    """
    R = h.source
    d = h.order
    Rd = fractional_veronese_algebra(R, d)
    images = [Element(Rd.g, x.vec) for x in h.images]
    n = restrict_scalars(m, Rd, images)
    out = phi_functor(n, d, pieces)
    out.name = f"^{{{h.name}}}{m.name or 'M'}" if pieces is None else f"V_{pieces}({d},{m.name or 'M'})"
    return PushforwardModule(out, d, out.pieces, m)
