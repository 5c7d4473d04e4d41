"""Exact scalars and matrices over GF(p) and Q.

Matrices over small primes are stored as ``scipy.sparse`` CSR arrays of
``int64`` residues; rationals (and very large primes) use dense ``object``
arrays of Python numbers.  Row reduction splits a sparse matrix into the
connected components of its row/column incidence graph and reduces each
block densely.  Because the reduced row echelon form is unique, the split
never changes a result.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from . import _kernels

SPARSE_PRIME_LIMIT = 1 << 24
# below this many entries a matrix is reduced as one dense block
_SPLIT_THRESHOLD = 1 << 14


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime field GF(p) (``characteristic = p``) or Q (``characteristic = 0``)."""

    characteristic: int

    def __post_init__(self):
        c = self.characteristic
        if not isinstance(c, int) or c < 0 or (c != 0 and not is_prime(c)):
            raise ValueError(f"characteristic must be 0 or a prime, got {c!r}")

    @property
    def sparse(self):
        return 0 < self.characteristic < SPARSE_PRIME_LIMIT

    @property
    def zero(self):
        return 0 if self.characteristic else Fraction(0)

    @property
    def one(self):
        return 1 if self.characteristic else Fraction(1)

    def coerce(self, x):
        p = self.characteristic
        if p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"denominator {x.denominator} vanishes mod {p}")
            return x.numerator * pow(x.denominator, p - 2, p) % p
        return int(x) % p

    def parse(self, text):
        text = text.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return self.coerce(Fraction(int(num), int(den)))
        return self.coerce(int(text))

    def add(self, a, b):
        return self.coerce(a + b) if self.characteristic else a + b

    def sub(self, a, b):
        return self.coerce(a - b) if self.characteristic else a - b

    def mul(self, a, b):
        return self.coerce(a * b) if self.characteristic else a * b

    def neg(self, a):
        return self.coerce(-a) if self.characteristic else -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        return pow(int(a), p - 2, p) if p else 1 / Fraction(a)

    def render(self, a):
        return str(a)

    def __str__(self):
        return f"GF({self.characteristic})" if self.characteristic else "QQ"


class ExactMatrix:
    """An immutable matrix with entries in a :class:`FieldSpec`."""

    __slots__ = ("field", "data")

    def __init__(self, field, data):
        self.field = field
        if field.sparse:
            data = sp.csr_array(data, dtype=np.int64)
            if data.nnz:
                data.sum_duplicates()
                data.data %= field.characteristic
                data.eliminate_zeros()
        else:
            data = np.asarray(data, dtype=object)
            if data.ndim != 2:
                raise ValueError("matrix data must be two-dimensional")
            if data.size:
                data = np.vectorize(field.coerce, otypes=[object])(data)
        self.data = data

    # construction ---------------------------------------------------------

    @classmethod
    def zeros(cls, field, nrows, ncols):
        if field.sparse:
            return cls(field, sp.csr_array((nrows, ncols), dtype=np.int64))
        arr = np.empty((nrows, ncols), dtype=object)
        arr.fill(field.zero)
        return cls(field, arr)

    @classmethod
    def identity(cls, field, n):
        if field.sparse:
            return cls(field, sp.identity(n, dtype=np.int64, format="csr"))
        m = cls.zeros(field, n, n).data
        for i in range(n):
            m[i, i] = field.one
        return cls(field, m)

    @classmethod
    def from_rows(cls, field, rows, ncols=None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if field.sparse:
            dense = np.array([[field.coerce(x) for x in r] for r in rows], dtype=np.int64)
            return cls(field, dense.reshape(len(rows), ncols))
        arr = np.empty((len(rows), ncols), dtype=object)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                arr[i, j] = x
        return cls(field, arr)

    @classmethod
    def from_entries(cls, field, shape, entries):
        """Build from ``{(row, col): value}``; repeated keys are not allowed."""
        if field.sparse:
            if not entries:
                return cls.zeros(field, *shape)
            r, c = zip(*entries.keys())
            vals = [field.coerce(x) for x in entries.values()]
            return cls(field, sp.coo_array((vals, (r, c)), shape=shape).tocsr())
        m = cls.zeros(field, *shape).data
        for (i, j), v in entries.items():
            m[i, j] = v
        return cls(field, m)

    @classmethod
    def unit_columns(cls, field, n, indices):
        """Columns ``e_i`` of the n x n identity for i in ``indices``."""
        indices = list(indices)
        if field.sparse:
            k = len(indices)
            coo = sp.coo_array((np.ones(k, dtype=np.int64), (np.asarray(indices, dtype=np.int64), np.arange(k))),
                               shape=(n, k))
            return cls(field, coo.tocsr())
        m = cls.zeros(field, n, len(indices)).data
        for j, i in enumerate(indices):
            m[i, j] = field.one
        return cls(field, m)

    @classmethod
    def hstack(cls, field, mats, nrows):
        mats = [m for m in mats if m.ncols]
        if not mats:
            return cls.zeros(field, nrows, 0)
        for m in mats:
            if m.nrows != nrows:
                raise ValueError(f"hstack row mismatch: {m.nrows} != {nrows}")
        if len(mats) == 1:
            return mats[0]
        if field.sparse:
            return cls(field, sp.hstack([m.data for m in mats], format="csr"))
        return cls(field, np.hstack([m.data for m in mats]))

    @classmethod
    def vstack(cls, field, mats, ncols):
        mats = [m for m in mats if m.nrows]
        if not mats:
            return cls.zeros(field, 0, ncols)
        for m in mats:
            if m.ncols != ncols:
                raise ValueError(f"vstack column mismatch: {m.ncols} != {ncols}")
        if len(mats) == 1:
            return mats[0]
        if field.sparse:
            return cls(field, sp.vstack([m.data for m in mats], format="csr"))
        return cls(field, np.vstack([m.data for m in mats]))

    @classmethod
    def block_diag(cls, field, mats):
        nrows = sum(m.nrows for m in mats)
        ncols = sum(m.ncols for m in mats)
        if field.sparse:
            rs, cs, vs = [], [], []
            r0 = c0 = 0
            for m in mats:
                coo = m.data.tocoo()
                rs.append(coo.row + r0)
                cs.append(coo.col + c0)
                vs.append(coo.data)
                r0 += m.nrows
                c0 += m.ncols
            if not rs:
                return cls.zeros(field, nrows, ncols)
            data = sp.coo_array((np.concatenate(vs), (np.concatenate(rs), np.concatenate(cs))),
                                shape=(nrows, ncols))
            return cls(field, data.tocsr())
        out = cls.zeros(field, nrows, ncols).data
        r0 = c0 = 0
        for m in mats:
            out[r0:r0 + m.nrows, c0:c0 + m.ncols] = m.data
            r0 += m.nrows
            c0 += m.ncols
        return cls(field, out)

    # shape and access -----------------------------------------------------

    @property
    def shape(self):
        return self.data.shape

    @property
    def nrows(self):
        return self.data.shape[0]

    @property
    def ncols(self):
        return self.data.shape[1]

    @property
    def nnz(self):
        if self.field.sparse:
            return self.data.nnz
        return int(sum(1 for x in self.data.flat if x != 0))

    def is_zero(self):
        return self.nnz == 0

    def entry(self, i, j):
        if self.field.sparse:
            return int(self.data[i, j])
        return self.data[i, j]

    def to_dense(self):
        if self.field.sparse:
            return self.data.toarray()
        return self.data.copy()

    def tolist(self):
        if self.field.sparse:
            return [[int(x) for x in row] for row in self.data.toarray()]
        return [list(row) for row in self.data]

    def columns(self, idx):
        idx = np.asarray(list(idx), dtype=np.int64)
        if self.field.sparse:
            return ExactMatrix(self.field, self.data.tocsc()[:, idx])
        return ExactMatrix(self.field, self.data[:, idx])

    def rows(self, idx):
        idx = np.asarray(list(idx), dtype=np.int64)
        return ExactMatrix(self.field, self.data[idx, :])

    def transpose(self):
        if self.field.sparse:
            return ExactMatrix(self.field, self.data.T)
        return ExactMatrix(self.field, self.data.T.copy())

    T = property(transpose)

    # arithmetic -----------------------------------------------------------

    def _check(self, other):
        if self.field != other.field:
            raise ValueError("matrices over different fields")

    def __matmul__(self, other):
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.field.sparse:
            return ExactMatrix(self.field, self.data @ other.data)
        if self.ncols == 0:
            return ExactMatrix.zeros(self.field, self.nrows, other.ncols)
        return ExactMatrix(self.field, np.matmul(self.data, other.data))

    def __add__(self, other):
        self._check(other)
        return ExactMatrix(self.field, self.data + other.data)

    def __sub__(self, other):
        self._check(other)
        return ExactMatrix(self.field, self.data - other.data)

    def __neg__(self):
        return ExactMatrix(self.field, -self.data)

    def scale(self, c):
        c = self.field.coerce(c)
        return ExactMatrix(self.field, self.data * c)

    def kron(self, other):
        self._check(other)
        if self.field.sparse:
            return ExactMatrix(self.field, sp.kron(self.data, other.data, format="csr"))
        a, b = self.data, other.data
        out = np.empty((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]), dtype=object)
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                out[i * b.shape[0]:(i + 1) * b.shape[0], j * b.shape[1]:(j + 1) * b.shape[1]] = a[i, j] * b
        return ExactMatrix(self.field, out)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        return f"ExactMatrix({self.field}, {self.tolist()})"


# ---------------------------------------------------------------------------
# elimination


def _rref_object(field, rows, ncols):
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        k = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(x, inv) for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return pivots


def _component_blocks(data):
    """Split a sparse matrix along the connected components of its row/column incidence graph.

    Returns ``(rows, cols, dense_block)`` triples covering every nonzero;
    rows and columns are sorted global indices.
    """
    coo = data.tocoo()
    nr, nc = data.shape
    if coo.nnz == 0:
        return []
    n = nr + nc
    graph = sp.coo_array((np.ones(coo.nnz, dtype=np.int8), (coo.row, coo.col + nr)), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    used = np.zeros(n, dtype=bool)
    used[coo.row] = True
    used[coo.col + nr] = True
    # position of every used vertex inside its component, rows and columns separately
    local = np.zeros(n, dtype=np.int64)
    order = np.argsort(labels, kind="stable")
    order = order[used[order]]
    lab = labels[order]
    cuts = np.flatnonzero(np.diff(lab)) + 1
    groups = np.split(order, cuts)
    comp_rows, comp_cols = {}, {}
    for group in groups:
        rows = group[group < nr]
        cols = group[group >= nr] - nr
        local[rows] = np.arange(rows.size)
        local[cols + nr] = np.arange(cols.size)
        comp_rows[labels[group[0]]] = rows
        comp_cols[labels[group[0]]] = cols
    nz_lab = labels[coo.row]
    nz_order = np.argsort(nz_lab, kind="stable")
    nz_cuts = np.flatnonzero(np.diff(nz_lab[nz_order])) + 1
    out = []
    for idx in np.split(nz_order, nz_cuts):
        c = nz_lab[idx[0]]
        rows, cols = comp_rows[c], comp_cols[c]
        block = np.zeros((rows.size, cols.size), dtype=np.int64)
        block[local[coo.row[idx]], local[coo.col[idx] + nr]] = coo.data[idx]
        out.append((rows, cols, block))
    return out


def _reduced_blocks(m):
    """Reduce ``m`` blockwise.

    Yields ``(cols, pivots, red)`` where ``cols`` are the global columns of
    the block, ``pivots`` local pivot positions and ``red`` the nonzero rows
    of the block's RREF (dense; int64 or object).
    """
    field = m.field
    if not field.sparse:
        rows = [list(r) for r in m.data]
        pivots = _rref_object(field, rows, m.ncols)
        red = np.empty((len(pivots), m.ncols), dtype=object)
        for i in range(len(pivots)):
            red[i, :] = rows[i]
        return [(np.arange(m.ncols), pivots, red)]
    p = field.characteristic
    data = m.data
    if data.nnz == 0:
        return []
    if m.nrows * m.ncols <= _SPLIT_THRESHOLD:
        blocks = [(None, np.arange(m.ncols), np.ascontiguousarray(data.toarray(), dtype=np.int64))]
    else:
        blocks = _component_blocks(data)
    out = []
    for _, cols, block in blocks:
        piv = _kernels.rref_modp(block, p)
        out.append((cols, piv.astype(np.int64), block[: len(piv)]))
    return out


def rref(m):
    """Reduced row echelon form and pivot columns of ``m``.

    Pivots are the leftmost nonzero entries with rows taken top-down, so the
    output is the unique RREF and is identical on every run.
    """
    field = m.field
    pieces = []
    for cols, piv, red in _reduced_blocks(m):
        for r, c in enumerate(piv):
            pieces.append((int(cols[c]), cols, red[r]))
    pieces.sort(key=lambda t: t[0])
    pivots = [t[0] for t in pieces]
    if field.sparse:
        rs, cs, vs = [], [], []
        for i, (_, cols, row) in enumerate(pieces):
            nz = np.flatnonzero(row)
            rs.append(np.full(nz.size, i))
            cs.append(cols[nz])
            vs.append(row[nz])
        if rs:
            data = sp.coo_array((np.concatenate(vs), (np.concatenate(rs), np.concatenate(cs))), shape=m.shape)
            return ExactMatrix(field, data.tocsr()), pivots
        return ExactMatrix.zeros(field, *m.shape), pivots
    out = ExactMatrix.zeros(field, *m.shape).data
    for i, (_, cols, row) in enumerate(pieces):
        out[i, cols] = row
    return ExactMatrix(field, out), pivots


def pivot_columns(m):
    parts = [np.asarray(cols)[np.asarray(p, dtype=np.int64)] for cols, p, _ in _reduced_blocks(m)]
    if not parts:
        return []
    return sorted(int(c) for c in np.concatenate(parts))


def rank(m):
    return sum(len(p) for _, p, _ in _reduced_blocks(m))


def kernel_basis(m):
    """Basis of the right null space, one column per free column (ascending)."""
    field = m.field
    n = m.ncols
    blocks = _reduced_blocks(m)
    free_all = np.ones(n, dtype=bool)
    for cols, piv, _ in blocks:
        free_all[cols[np.asarray(piv, dtype=np.int64)]] = False
    free = np.flatnonzero(free_all)
    if not field.sparse:
        coo = {}
        for j, c in enumerate(free):
            coo[(int(c), j)] = field.one
        where = {int(c): j for j, c in enumerate(free)}
        for cols, piv, red in blocks:
            piv = list(piv)
            for f in range(len(cols)):
                if f in piv:
                    continue
                j = where[int(cols[f])]
                for r, pc in enumerate(piv):
                    v = red[r, f]
                    if v != 0:
                        coo[(int(cols[pc]), j)] = field.neg(v)
        return ExactMatrix.from_entries(field, (n, free.size), coo)
    p = field.characteristic
    rs, cs, vs = [free], [np.arange(free.size)], [np.ones(free.size, dtype=np.int64)]
    for cols, piv, red in blocks:
        piv = np.asarray(piv, dtype=np.int64)
        if piv.size == 0:
            continue
        mask = np.ones(len(cols), dtype=bool)
        mask[piv] = False
        local_free = np.flatnonzero(mask)
        if local_free.size == 0:
            continue
        sub = red[:, local_free]
        r, f = np.nonzero(sub)
        rs.append(cols[piv[r]])
        cs.append(np.searchsorted(free, cols[local_free[f]]))
        vs.append((p - sub[r, f]) % p)
    data = sp.coo_array((np.concatenate(vs), (np.concatenate(rs), np.concatenate(cs))), shape=(n, free.size))
    return ExactMatrix(field, data.tocsr())


def column_span_complement(span, ambient):
    """Indices of ``ambient`` columns forming a basis of (span + ambient) / span.

    Columns are tested greedily left to right: a column is kept when it is not
    in the span of ``span`` and the ambient columns already kept.
    """
    if span.nrows != ambient.nrows:
        raise ValueError("span and ambient must have the same number of rows")
    k = span.ncols
    joined = ExactMatrix.hstack(span.field, [span, ambient], span.nrows)
    return [c - k for c in pivot_columns(joined) if c >= k]


def solve(basis, vectors):
    """Coordinates ``X`` with ``basis @ X == vectors``; ``basis`` must have independent columns."""
    field = basis.field
    k = basis.ncols
    joined = ExactMatrix.hstack(field, [basis, vectors], basis.nrows)
    red, piv = rref(joined)
    if piv[:k] != list(range(k)):
        raise ValueError("basis columns are not independent")
    if len(piv) > k:
        raise ValueError("vectors are not in the column span of the basis")
    rows = red.rows(range(k))
    return rows.columns(range(k, k + vectors.ncols))


def image_basis(m):
    """Columns of ``m`` at its pivot positions: a basis of the column space."""
    return m.columns(pivot_columns(m))
