"""Dense row reduction over GF(p).

Two interchangeable backends compute the same reduced row echelon form:
a numba-compiled loop nest (default) and a vectorised numpy path.  Setting
``GRADEDREG_NO_NUMBA=1`` in the environment selects the numpy path; it is
also used automatically when numba cannot be imported.
"""

import os

import numpy as np

NUMBA_DISABLED = os.environ.get("GRADEDREG_NO_NUMBA", "").strip() not in ("", "0")

try:
    if NUMBA_DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False


def rref_modp_numpy(a, p):
    """Reduce ``a`` (int64, entries in [0, p)) in place; return pivot columns."""
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r, c:] = (a[r, c:] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit, c:] = (a[hit, c:] - np.outer(col[hit], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return np.asarray(pivots, dtype=np.int64)


if HAVE_NUMBA:

    @njit(cache=True)
    def _inv_modp(x, p):
        result = 1
        base = x % p
        e = p - 2
        while e > 0:
            if e & 1:
                result = (result * base) % p
            base = (base * base) % p
            e >>= 1
        return result

    @njit(cache=True)
    def rref_modp_numba(a, p):
        rows, cols = a.shape
        piv = np.empty(min(rows, cols), np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            k = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for t in range(c, cols):
                    tmp = a[r, t]
                    a[r, t] = a[k, t]
                    a[k, t] = tmp
            inv = _inv_modp(a[r, c], p)
            if inv != 1:
                for t in range(c, cols):
                    a[r, t] = (a[r, t] * inv) % p
            for i in range(rows):
                if i != r:
                    f = a[i, c]
                    if f != 0:
                        for t in range(c, cols):
                            a[i, t] = (a[i, t] - f * a[r, t]) % p
            piv[r] = c
            r += 1
        return piv[:r]

else:  # pragma: no cover
    rref_modp_numba = None


def rref_modp(a, p):
    """In-place RREF of a dense int64 array over GF(p); returns the pivot columns."""
    if HAVE_NUMBA:
        return rref_modp_numba(a, p)
    return rref_modp_numpy(a, p)


def backend_name():
    return "numba" if HAVE_NUMBA else "numpy"
