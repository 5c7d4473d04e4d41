"""Small independent reference computations used by the tests."""

from fractions import Fraction
from itertools import product


def rank_mod(rows, p):
    """Rank of an integer matrix over GF(p) (p > 0) or Q (p = 0) by plain elimination."""
    m = [[Fraction(x) if p == 0 else x % p for x in r] for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][c] if p == 0 else pow(m[rank][c], p - 2, p)
        m[rank] = [x * inv if p == 0 else x * inv % p for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c]
                m[r] = [a - f * b if p == 0 else (a - f * b) % p for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def kernel_by_enumeration(rows, p, ncols):
    """Every vector of GF(p)^ncols killed by the matrix (tiny sizes only)."""
    out = []
    for v in product(range(p), repeat=ncols):
        if all(sum(a * b for a, b in zip(r, v)) % p == 0 for r in rows):
            out.append(v)
    return out


def standard_monomial_count(nvars, degree, leads):
    """Number of degree-``degree`` monomials divisible by no lead monomial."""
    def compositions(n, k):
        if k == 1:
            yield (n,)
            return
        for a in range(n + 1):
            for rest in compositions(n - a, k - 1):
                yield (a,) + rest

    return sum(1 for m in compositions(degree, nvars)
               if not any(all(x >= y for x, y in zip(m, l)) for l in leads))
