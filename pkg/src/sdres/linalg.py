"""Exact linear algebra helpers: rational rank, nullspace of sparse exact
linear systems (multi-prime modular solve with rational reconstruction,
verified exactly, with a pure-rational fallback), and integer linear-system
solving via the Smith normal form.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import sympy


# ----------------------------------------------------------------------
# Exact rank over the rationals (small dense matrices)
# ----------------------------------------------------------------------


def rank_exact(rows) -> int:
    """Rank of a dense matrix of Fractions/ints by Gaussian elimination."""
    mat = [[Fraction(x) for x in row] for row in rows]
    if not mat:
        return 0
    m, n = len(mat), len(mat[0])
    rank = 0
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(m):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        rank += 1
        r += 1
        if r == m:
            break
    return rank


# ----------------------------------------------------------------------
# Nullspace of a sparse homogeneous system
# ----------------------------------------------------------------------

_PRIME_SEED = (1 << 25) - 1


def _primes(count: int):
    out = []
    p = _PRIME_SEED
    while len(out) < count:
        p = int(sympy.prevprime(p))
        out.append(p)
    return out


def _integer_rows(rows):
    """Scale each sparse row (dict col -> Fraction) to coprime integers."""
    out = []
    seen = set()
    for row in rows:
        items = [(c, Fraction(v)) for c, v in row.items() if v != 0]
        if not items:
            continue
        den = 1
        for _, v in items:
            den = den * v.denominator // math.gcd(den, v.denominator)
        ints = [(c, int(v * den)) for c, v in items]
        g = 0
        for _, v in ints:
            g = math.gcd(g, v)
        ints = tuple(sorted((c, v // g) for c, v in ints))
        if ints not in seen:
            seen.add(ints)
            out.append(dict(ints))
    return out


def _rref_mod(rows, ncols: int, p: int):
    """Reduced row echelon form mod p.  Returns (pivot column tuple, basis
    vectors of the nullspace as int lists mod p)."""
    m = len(rows)
    a = np.zeros((m, ncols), dtype=np.int64)
    for i, row in enumerate(rows):
        for c, v in row.items():
            a[i, c] = v % p
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = np.nonzero(col)[0]
        if mask.size:
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-int(a[i, f])) % p
        basis.append(v)
    return tuple(pivots), basis


def _crt_pair(a1, m1, a2, m2):
    # assumes gcd(m1, m2) = 1
    inv = pow(m1 % m2, -1, m2)
    t = ((a2 - a1) * inv) % m2
    return a1 + m1 * t, m1 * m2


def rational_reconstruct(a: int, m: int):
    """Find p/q = a (mod m) with |p|, q <= sqrt(m/2), or None."""
    bound = math.isqrt(m // 2)
    r0, r1 = m, a % m
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if abs(t1) > bound or t1 == 0:
        return None
    if math.gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)


def _verify_kernel(rows, vec) -> bool:
    for row in rows:
        acc = Fraction(0)
        for c, v in row.items():
            x = vec[c]
            if x:
                acc += v * x
        if acc != 0:
            return False
    return True


def _nullspace_exact(rows, ncols: int):
    """Pure-Fraction Gauss-Jordan nullspace (fallback path)."""
    work = [dict(r) for r in rows]
    pivots = {}  # col -> reduced row (dict)
    for row in work:
        for c in sorted(pivots):
            v = row.get(c)
            if v:
                prow = pivots[c]
                for cc, pv in prow.items():
                    nv = row.get(cc, Fraction(0)) - v * pv
                    if nv:
                        row[cc] = nv
                    else:
                        row.pop(cc, None)
        live = {c: v for c, v in row.items() if v != 0}
        if not live:
            continue
        c0 = min(live)
        inv = 1 / live[c0]
        prow = {c: v * inv for c, v in live.items()}
        for c, existing in pivots.items():
            v = existing.get(c0)
            if v:
                for cc, pv in prow.items():
                    nv = existing.get(cc, Fraction(0)) - v * pv
                    if nv:
                        existing[cc] = nv
                    else:
                        existing.pop(cc, None)
        pivots[c0] = prow
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for c, prow in pivots.items():
            v = prow.get(f)
            if v:
                vec[c] = -v
        basis.append(vec)
    return basis


def nullspace(rows, ncols: int, max_primes: int = 12):
    """Exact rational nullspace basis of a sparse homogeneous system.

    `rows` is an iterable of dicts {column index: coefficient}.  The solve
    runs modulo several word-size primes with CRT and rational
    reconstruction; every reconstructed vector is verified exactly against
    the original rows.  On any failure the pure-rational elimination is
    used instead.
    """
    rows = _integer_rows(rows)
    if not rows:
        return [
            [Fraction(1) if c == f else Fraction(0) for c in range(ncols)]
            for f in range(ncols)
        ]

    primes = _primes(max_primes)
    used = []
    residues = None  # list over basis vectors of (list of ints, modulus)
    pivots_ref = None
    for p in primes:
        piv, basis = _rref_mod(rows, ncols, p)
        if pivots_ref is None or len(piv) > len(pivots_ref):
            pivots_ref = piv
            used = [(p, basis)]
        elif piv == pivots_ref:
            used.append((p, basis))
        # primes with smaller rank (or mismatched pivots) are unlucky; skip
        if len(used) >= 2 or (len(used) == 1 and len(piv) == 0):
            candidate = _combine_and_verify(rows, ncols, used)
            if candidate is not None:
                return candidate
    return _nullspace_exact(rows, ncols)


def _combine_and_verify(rows, ncols, used):
    nbasis = len(used[0][1])
    for _, b in used:
        if len(b) != nbasis:
            return None
    out = []
    for k in range(nbasis):
        vec_mod = list(used[0][1][k])
        mod = used[0][0]
        for p, b in used[1:]:
            for i in range(ncols):
                vec_mod[i], _ = _crt_pair(vec_mod[i], mod, b[k][i], p)
            mod *= p
        vec = []
        for a in vec_mod:
            f = rational_reconstruct(a, mod)
            if f is None:
                return None
            vec.append(f)
        if not _verify_kernel(rows, vec):
            return None
        out.append(vec)
    return out


# ----------------------------------------------------------------------
# Integer linear algebra: Smith normal form and Z-linear solving
# ----------------------------------------------------------------------


def smith_normal_form(a):
    """Return (d, u, v) with u*a*v = d diagonal, u and v unimodular."""
    a = [list(map(int, row)) for row in a]
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def rswap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def cswap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def radd(dst, src, q):
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def cadd(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        # find a nonzero pivot
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (piv is None or abs(a[i][j]) < abs(piv[2])):
                    piv = (i, j, a[i][j])
        if piv is None:
            break
        rswap(t, piv[0])
        cswap(t, piv[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t] % a[t][t] != 0:
                    radd(i, t, -(a[i][t] // a[t][t]))
                    rswap(t, i)
                    dirty = True
                elif a[i][t] != 0:
                    radd(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, n):
                if a[t][j] % a[t][t] != 0:
                    cadd(j, t, -(a[t][j] // a[t][t]))
                    cswap(t, j)
                    dirty = True
                elif a[t][j] != 0:
                    cadd(j, t, -(a[t][j] // a[t][t]))
            if not dirty:
                break
        # enforce the divisibility chain: if some remaining entry is not a
        # multiple of the pivot, pull its row up and redo this step
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % a[t][t] != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            radd(t, bad, 1)
            continue
        t += 1
    # normalize signs
    for i in range(min(m, n)):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            u[i] = [-x for x in u[i]]
    return a, u, v


def solve_integer(a, b):
    """An integer solution x of a*x = b, or None if none exists."""
    m = len(a)
    n = len(a[0]) if m else 0
    d, u, v = smith_normal_form(a)
    ub = [sum(u[i][k] * b[k] for k in range(m)) for i in range(m)]
    y = [0] * n
    for i in range(min(m, n)):
        dii = d[i][i]
        if dii == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % dii != 0:
                return None
            y[i] = ub[i] // dii
    for i in range(min(m, n), m):
        if ub[i] != 0:
            return None
    return [sum(v[i][k] * y[k] for k in range(n)) for i in range(n)]
