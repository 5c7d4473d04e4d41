"""Homogeneous polynomials, truncated Gröbner bases and degreewise algebra tables.

Monomials are exponent tuples.  The monomial order is graded reverse
lexicographic with ``x_1 > x_2 > ...`` in declaration order.  Every variable
of a ring has the same degree ``g``; internal degrees are ``g`` times the
total exponent.
"""

import heapq
import itertools
import re
from dataclasses import dataclass
from functools import cached_property

from .errors import DegreeCapExceeded, InvalidGraph, NonHomogeneousInput, ParseError, WindowExceeded
from .exactlinalg import ExactMatrix, FieldSpec


# ---------------------------------------------------------------------------
# monomials


def mdeg(m):
    return sum(m)


def order_key(m):
    """Sort key realising degrevlex: larger key means larger monomial."""
    return (sum(m), tuple(-e for e in reversed(m)))


def mdivides(a, b):
    return all(x <= y for x, y in zip(a, b))


def mmul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mdiv(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mlcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def monomials_of_degree(nvars, d):
    """All exponent vectors of total degree ``d``, sorted descending in degrevlex."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    out.sort(key=order_key, reverse=True)
    return out


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """A polynomial as an immutable ``{exponents: coefficient}`` map without zero terms."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars, terms=None):
        self.field = field
        self.nvars = nvars
        clean = {}
        for m, c in (terms or {}).items():
            c = field.coerce(c)
            if c != 0:
                clean[tuple(m)] = c
        self.terms = clean

    @classmethod
    def monomial(cls, field, exps, coeff=1):
        return cls(field, len(exps), {tuple(exps): coeff})

    @classmethod
    def variable(cls, field, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, {tuple(e): 1})

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Total exponent degree; ``None`` for the zero polynomial."""
        if not self.terms:
            return None
        return max(mdeg(m) for m in self.terms)

    def is_homogeneous(self):
        return len({mdeg(m) for m in self.terms}) <= 1

    def leading(self):
        m = max(self.terms, key=order_key)
        return m, self.terms[m]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: order_key(t[0]), reverse=True)

    def __add__(self, other):
        out = dict(self.terms)
        f = self.field
        for m, c in other.terms.items():
            out[m] = f.add(out.get(m, f.zero), c)
        return Polynomial(f, self.nvars, out)

    def __neg__(self):
        return Polynomial(self.field, self.nvars, {m: self.field.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        f = self.field
        if not isinstance(other, Polynomial):
            return self.scale(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mmul(m1, m2)
                out[m] = f.add(out.get(m, f.zero), f.mul(c1, c2))
        return Polynomial(f, self.nvars, out)

    def scale(self, c):
        f = self.field
        return Polynomial(f, self.nvars, {m: f.mul(v, c) for m, v in self.terms.items()})

    def shift(self, mono, coeff):
        """``coeff * x^mono * self``."""
        f = self.field
        return Polynomial(f, self.nvars, {mmul(m, mono): f.mul(v, coeff) for m, v in self.terms.items()})

    def __pow__(self, n):
        out = Polynomial.monomial(self.field, (0,) * self.nvars)
        for _ in range(n):
            out = out * self
        return out

    def substitute(self, images, one):
        """Evaluate at ``images`` (a sequence of objects supporting + and *); ``one`` is the unit."""
        total = None
        for m, c in self.sorted_terms():
            term = one.scale(c)
            for i, e in enumerate(m):
                for _ in range(e):
                    term = term * images[i]
            total = term if total is None else total + term
        return total

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def format(self, names):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                (names[i] if e == 1 else f"{names[i]}^{e}") for i, e in enumerate(m) if e
            )
            neg = self.field.characteristic == 0 and c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append(("-", body) if neg else ("+", body))
        text = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Polynomial({self.format([f'x{i + 1}' for i in range(self.nvars)])})"


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|([+-]))")


def parse_polynomial(text, names, field):
    """Parse ``text`` in the grammar ``term ('+' term)*`` over the given variables.

    A term is ``[coeff '*'] mono`` or ``coeff``; ``mono`` is ``var['^'exp]``
    joined by ``*``.  A leading or separating ``-`` is accepted as well.
    """
    names = list(names)
    index = {n: i for i, n in enumerate(names)}
    tokens = []
    pos = 0
    text = text.strip()
    if not text:
        raise ParseError("empty polynomial")
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        kind = m.lastindex
        tokens.append((kind, m.group(kind)))
        pos = m.end()
    n = len(names)
    result = Polynomial(field, n)
    i = 0
    sign = 1
    expect_term = True
    while i < len(tokens):
        kind, val = tokens[i]
        if kind == 5:
            if not expect_term and val in "+-":
                sign = 1 if val == "+" else -1
                expect_term = True
                i += 1
                continue
            if expect_term and val == "-" and i == 0:
                sign = -1
                i += 1
                continue
            raise ParseError(f"misplaced {val!r} in {text!r}")
        if not expect_term:
            raise ParseError(f"missing '+' before {val!r} in {text!r}")
        coeff = field.one
        exps = [0] * n
        seen_factor = False
        while i < len(tokens) and tokens[i][0] != 5:
            kind, val = tokens[i]
            if kind == 1:
                if seen_factor:
                    raise ParseError(f"coefficient {val!r} must lead its term in {text!r}")
                try:
                    coeff = field.mul(coeff, field.parse(val))
                except ZeroDivisionError as exc:
                    raise ParseError(str(exc)) from None
                seen_factor = True
                i += 1
            elif kind == 2:
                if val not in index:
                    raise ParseError(f"unknown variable {val!r} in {text!r}")
                e = 1
                if i + 1 < len(tokens) and tokens[i + 1][0] == 3:
                    if i + 2 >= len(tokens) or tokens[i + 2][0] != 1 or "/" in tokens[i + 2][1]:
                        raise ParseError(f"bad exponent after {val!r} in {text!r}")
                    e = int(tokens[i + 2][1])
                    i += 2
                exps[index[val]] += e
                seen_factor = True
                i += 1
            else:
                raise ParseError(f"unexpected {val!r} in {text!r}")
            if i < len(tokens) and tokens[i][0] == 4:
                i += 1
                if i >= len(tokens) or tokens[i][0] not in (1, 2):
                    raise ParseError(f"dangling '*' in {text!r}")
        if not seen_factor:
            raise ParseError(f"empty term in {text!r}")
        if sign < 0:
            coeff = field.neg(coeff)
        result = result + Polynomial(field, n, {tuple(exps): coeff})
        expect_term = False
        sign = 1
    if expect_term:
        raise ParseError(f"trailing operator in {text!r}")
    return result


# ---------------------------------------------------------------------------
# rings and Gröbner bases


@dataclass(frozen=True)
class RingDesc:
    """``k[x_1..x_n] / I`` with every variable of degree ``degree``."""

    field: FieldSpec
    names: tuple
    ideal: tuple = ()
    degree: int = 1

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "ideal", tuple(f for f in self.ideal if not f.is_zero()))
        if len(set(self.names)) != len(self.names):
            raise ParseError(f"variable names must be distinct: {self.names}")
        if self.degree < 1:
            raise ParseError("variable degree must be positive")
        for f in self.ideal:
            if f.nvars != len(self.names):
                raise ParseError("ideal generator has the wrong number of variables")
            if not f.is_homogeneous():
                raise NonHomogeneousInput(f"generator {f.format(self.names)} is not homogeneous")

    @classmethod
    def parse(cls, field, names, relations=(), degree=1):
        names = tuple(names)
        return cls(field, names, tuple(parse_polynomial(r, names, field) for r in relations), degree)

    @property
    def nvars(self):
        return len(self.names)

    def poly(self, text):
        return parse_polynomial(text, self.names, self.field)

    def var(self, i):
        return Polynomial.variable(self.field, self.nvars, i)

    def is_polynomial_ring(self):
        return not self.ideal

    def relation_degree(self):
        """Largest internal degree of an ideal generator (0 when there are none)."""
        return max((self.degree * f.degree() for f in self.ideal), default=0)

    def extend(self, new_names):
        """The polynomial extension ``R[t_1..t_m]`` with new variables of the same degree."""
        m = len(new_names)
        pad = lambda f: Polynomial(f.field, f.nvars + m, {e + (0,) * m: c for e, c in f.terms.items()})
        return RingDesc(self.field, self.names + tuple(new_names), tuple(pad(f) for f in self.ideal), self.degree)

    def embed(self, f, ring):
        """Re-express ``f`` in ``ring`` whose first variables are this ring's."""
        m = ring.nvars - self.nvars
        return Polynomial(f.field, ring.nvars, {e + (0,) * m: c for e, c in f.terms.items()})

    def describe(self):
        base = f"{self.field}[{','.join(self.names)}]"
        if self.ideal:
            base += "/(" + ", ".join(f.format(self.names) for f in self.ideal) + ")"
        return base


@dataclass(frozen=True)
class GroebnerBasis:
    ring: RingDesc
    basis: tuple
    j_cap: int

    @cached_property
    def leads(self):
        return tuple(f.leading()[0] for f in self.basis)

    def is_standard(self, m):
        return not any(mdivides(l, m) for l in self.leads)


def _monic(f):
    _, c = f.leading()
    return f.scale(f.field.inv(c))


def _reduce(f, basis, leads):
    """Full reduction of ``f`` by ``basis`` (monic, leading monomials ``leads``)."""
    field = f.field
    work = dict(f.terms)
    rem = {}
    while work:
        m = max(work, key=order_key)
        c = work.pop(m)
        for g, l in zip(basis, leads):
            if mdivides(l, m):
                q = mdiv(m, l)
                for gm, gc in g.terms.items():
                    mm = mmul(gm, q)
                    if mm == m:
                        continue
                    v = field.sub(work.get(mm, field.zero), field.mul(c, gc))
                    if v == 0:
                        work.pop(mm, None)
                    else:
                        work[mm] = v
                break
        else:
            rem[m] = c
    return Polynomial(field, f.nvars, rem)


def _spoly(f, g):
    lf, _ = f.leading()
    lg, _ = g.leading()
    l = mlcm(lf, lg)
    one = f.field.one
    return f.shift(mdiv(l, lf), one) - g.shift(mdiv(l, lg), one)


def buchberger(ring, j_cap):
    """Reduced Gröbner basis of the ideal of ``ring``, exact through internal degree ``j_cap``."""
    for f in ring.ideal:
        if not f.is_homogeneous():
            raise NonHomogeneousInput(f"generator {f.format(ring.names)} is not homogeneous")
    cap = j_cap // ring.degree
    basis = []
    for f in sorted(ring.ideal, key=lambda f: (f.degree(), order_key(f.leading()[0]))):
        if f.degree() > cap:
            continue
        r = _reduce(f, basis, [b.leading()[0] for b in basis]) if basis else f
        if not r.is_zero():
            basis.append(_monic(r))
    heap = []

    def push_pairs(j):
        lj = basis[j].leading()[0]
        for i in range(j):
            li = basis[i].leading()[0]
            l = mlcm(li, lj)
            if mdeg(l) > cap:
                continue
            if all(a == 0 or b == 0 for a, b in zip(li, lj)):
                continue
            heapq.heappush(heap, (mdeg(l), i, j))

    for j in range(len(basis)):
        push_pairs(j)
    while heap:
        _, i, j = heapq.heappop(heap)
        s = _spoly(basis[i], basis[j])
        r = _reduce(s, basis, [b.leading()[0] for b in basis])
        if not r.is_zero():
            basis.append(_monic(r))
            push_pairs(len(basis) - 1)
    # minimalise, then inter-reduce
    leads = [b.leading()[0] for b in basis]
    keep = []
    for i, l in enumerate(leads):
        if any(mdivides(leads[k], l) and (leads[k] != l or k < i) for k in range(len(leads)) if k != i):
            continue
        keep.append(basis[i])
    reduced = []
    for i, f in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        lf, cf = f.leading()
        tail = Polynomial(f.field, f.nvars, {m: c for m, c in f.terms.items() if m != lf})
        tail = _reduce(tail, others, [o.leading()[0] for o in others]) if others else tail
        reduced.append(Polynomial.monomial(f.field, lf) + tail)
    reduced.sort(key=lambda f: order_key(f.leading()[0]))
    return GroebnerBasis(ring, tuple(reduced), j_cap)


def normal_form(f, gb):
    """The unique remainder of ``f`` modulo ``gb``, supported on standard monomials."""
    d = f.degree()
    if d is not None and d * gb.ring.degree > gb.j_cap:
        raise DegreeCapExceeded(f"degree {d * gb.ring.degree} exceeds Gröbner cap {gb.j_cap}")
    if f.is_zero():
        return f
    return _reduce(f, list(gb.basis), list(gb.leads))


# ---------------------------------------------------------------------------
# algebra tables


@dataclass(frozen=True)
class Element:
    """A homogeneous algebra element: internal degree plus a coordinate column."""

    degree: int
    vec: ExactMatrix

    def is_zero(self):
        return self.vec.is_zero()


class AlgebraTable:
    """A graded algebra generated in one degree ``g``, presented degree by degree.

    ``dims[j]`` is ``dim A_j`` for ``0 <= j <= cap``.  ``mult[a][j]`` is the
    matrix of multiplication by generator ``a`` from ``A_j`` to ``A_{j+g}``.
    Bases are *word bases*: ``parents[j][b] = (a, b')`` records that basis
    element ``b`` of ``A_j`` equals generator ``a`` times basis element
    ``b'`` of ``A_{j-g}``.
    """

    def __init__(self, field, g, cap, dims, mult, parents, labels=None, *, ring=None, gb=None,
                 name=None, relation_degree=None, polynomial=False, regraded_from=None):
        self.field = field
        self.g = g
        self.cap = cap
        self.dims = tuple(dims)
        self.mult = tuple(dict(m) for m in mult)
        self.parents = {j: tuple(p) for j, p in parents.items()}
        self.labels = labels or {}
        self.ring = ring
        self.gb = gb
        self.name = name
        self.relation_degree = relation_degree
        self.polynomial = polynomial
        self.regraded_from = regraded_from
        self._cache = {}
        if self.dims[0] != 1:
            raise ValueError("dim A_0 must be 1")

    @property
    def ngens(self):
        return len(self.mult)

    def dim(self, j):
        if j < 0:
            return 0
        if j > self.cap:
            raise WindowExceeded(f"algebra degree {j} beyond cap {self.cap}")
        return self.dims[j]

    def act(self, a, j):
        if j < 0:
            return ExactMatrix.zeros(self.field, self.dim(j + self.g), 0)
        if j + self.g > self.cap:
            raise WindowExceeded(f"algebra degree {j + self.g} beyond cap {self.cap}")
        return self.mult[a][j]

    def word(self, j, b):
        """Generators whose product (left to right) is basis element ``b`` of ``A_j``."""
        w = []
        while j > 0:
            a, b = self.parents[j][b]
            w.append(a)
            j -= self.g
        return w

    def generator(self, a):
        return Element(self.g, ExactMatrix.unit_columns(self.field, self.dims[self.g], [self._gen_index(a)]))

    def _gen_index(self, a):
        for b, (aa, _) in enumerate(self.parents[self.g]):
            if aa == a:
                return b
        raise ValueError(f"generator {a} is not a basis element")

    def one(self):
        return Element(0, ExactMatrix.unit_columns(self.field, 1, [0]))

    def multiply(self, x, y):
        """Product of two elements."""
        from .gradedcat import element_action  # local import: gradedcat builds on this module
        d = x.degree + y.degree
        if d > self.cap:
            raise WindowExceeded(f"product degree {d} beyond cap {self.cap}")
        mat = element_action(self.as_module(), x, y.degree)
        return Element(d, mat @ y.vec)

    def as_module(self):
        if "module" not in self._cache:
            from .gradedcat import ModuleTable
            self._cache["module"] = ModuleTable(self, 0, self.cap, {j: self.dims[j] for j in range(self.cap + 1)},
                                                [dict(m) for m in self.mult])
        return self._cache["module"]

    # polynomial-backed helpers -------------------------------------------

    def element(self, poly, degree=None):
        """Coordinates of a polynomial (reduced modulo the ideal) in this table's basis."""
        if self.ring is None:
            raise ValueError("algebra has no polynomial presentation")
        if poly.is_zero():
            if degree is None:
                raise ValueError("degree of the zero polynomial must be given")
            return Element(degree, ExactMatrix.zeros(self.field, self.dim(degree), 1))
        if not poly.is_homogeneous():
            raise NonHomogeneousInput(f"{poly.format(self.ring.names)} is not homogeneous")
        j = poly.degree() * self.ring.degree
        if degree is not None and degree != j:
            raise ValueError(f"expected degree {degree}, got {j}")
        nf = normal_form(poly, self.gb)
        index = self._index(j)
        entries = {(index[m], 0): c for m, c in nf.terms.items()}
        return Element(j, ExactMatrix.from_entries(self.field, (self.dim(j), 1), entries))

    def _index(self, j):
        key = ("index", j)
        if key not in self._cache:
            self._cache[key] = {m: i for i, m in enumerate(self.labels.get(j, ()))}
        return self._cache[key]

    def to_polynomial(self, elem):
        if self.ring is None:
            raise ValueError("algebra has no polynomial presentation")
        col = elem.vec.tolist()
        labels = self.labels.get(elem.degree, ())
        return Polynomial(self.field, self.ring.nvars, {labels[i]: row[0] for i, row in enumerate(col) if row[0] != 0})

    def hilbert(self):
        return list(self.dims)

    def __repr__(self):
        return f"AlgebraTable({self.name or '?'}, g={self.g}, cap={self.cap}, dims={list(self.dims)})"


def build_algebra_table(ring, j_cap):
    """Standard-monomial bases of ``R_j`` for ``j <= j_cap`` and generator multiplication matrices."""
    gb = buchberger(ring, j_cap)
    g = ring.degree
    n = ring.nvars
    field = ring.field
    dims = [0] * (j_cap + 1)
    labels = {}
    index = {}
    for j in range(0, j_cap + 1, g):
        mons = [m for m in monomials_of_degree(n, j // g) if gb.is_standard(m)]
        labels[j] = tuple(mons)
        index[j] = {m: i for i, m in enumerate(mons)}
        dims[j] = len(mons)
    parents = {}
    for j in range(g, j_cap + 1, g):
        par = []
        for m in labels[j]:
            a = next(i for i, e in enumerate(m) if e)
            par.append((a, index[j - g][mdiv(m, _unit(n, a))]))
        parents[j] = par
    mult = []
    for a in range(n):
        ua = _unit(n, a)
        per = {}
        for j in range(0, j_cap - g + 1):
            if j % g:
                per[j] = ExactMatrix.zeros(field, dims[j + g], dims[j])
                continue
            entries = {}
            for col, m in enumerate(labels[j]):
                prod = mmul(m, ua)
                if gb.is_standard(prod):
                    entries[(index[j + g][prod], col)] = field.one
                else:
                    nf = normal_form(Polynomial.monomial(field, prod), gb)
                    for mm, c in nf.terms.items():
                        entries[(index[j + g][mm], col)] = c
            per[j] = ExactMatrix.from_entries(field, (dims[j + g], dims[j]), entries)
        mult.append(per)
    return AlgebraTable(field, g, j_cap, dims, mult, parents, labels, ring=ring, gb=gb, name=ring.describe(),
                        relation_degree=ring.relation_degree(), polynomial=ring.is_polynomial_ring())


def _unit(n, a):
    e = [0] * n
    e[a] = 1
    return tuple(e)


def stanley_reisner_ring(field, n, edges, names=None):
    """``k[x_1..x_n] / (x_i x_j : {i, j} an edge)`` for a simple graph on vertices ``1..n``."""
    seen = set()
    for e in edges:
        i, j = e
        if i == j:
            raise InvalidGraph(f"loop at vertex {i}")
        if not (1 <= i <= n and 1 <= j <= n):
            raise InvalidGraph(f"edge {e} has a vertex outside 1..{n}")
        key = frozenset((i, j))
        if key in seen:
            raise InvalidGraph(f"duplicate edge {e}")
        seen.add(key)
    if names is None:
        names = ("x", "y", "z", "w")[:n] if n <= 4 else tuple(f"x{i}" for i in range(1, n + 1))
    gens = []
    for e in edges:
        exps = [0] * n
        for v in e:
            exps[v - 1] = 1
        gens.append(Polynomial(field, n, {tuple(exps): 1}))
    return RingDesc(field, tuple(names), tuple(gens))
