"""Order matrices, Jacobi numbers via maximum-weight assignment, order
bounds for the resultant search, and degree / cofactor-degree bounds.

For a system P_0..P_n with norm forms P_i^N, the order matrix is the
(n+1) x n grid e_ij = ord(P_i^N, y_j) over Z union {-inf}.  J_i is the
Jacobi number (maximal diagonal sum) of the matrix with row i deleted and
bounds ord(SR, u_i); the modified number subtracts gamma = sum_j o_j where
o_j is the least derivative order of y_j occurring anywhere in the system.
When the rank-essential subset T is proper, the sharper bounds come from
the order matrix restricted to rows T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

from .diffpoly import NEG_INF, DiffSystem, Poly, norm_form
from .essential import generic_rank, rank_essential_subset

_ENTRY_LIMIT = 1 << 40


@dataclass(frozen=True)
class BoundReport:
    order_matrix: tuple      # (n+1) x n entries, int or -inf
    jacobi: tuple            # J_i
    gamma: int
    modified: tuple          # J_i - gamma where finite
    alt_L: tuple             # L_i
    alt_E: tuple             # e - e_i
    subset: tuple            # rank-essential subset T
    effective: tuple         # per-i order bound actually used by the search


def jacobi_number(a):
    """Maximal diagonal (partial-permutation) sum of a matrix over
    Z union {-inf}; -inf entries may not be selected.  Returns -inf when
    no admissible size-min(m,n) selection exists."""
    m = len(a)
    n = len(a[0]) if m else 0
    k = min(m, n)
    if k == 0:
        return 0
    finite = [abs(int(x)) for row in a for x in row if x != NEG_INF]
    maxabs = max(finite, default=0)
    if maxabs >= _ENTRY_LIMIT:
        raise OverflowError("order-matrix entries out of supported range")
    big = (maxabs + 1) * (k + 1)
    cost = np.full((m, n), float(-big))
    for i in range(m):
        for j in range(n):
            if a[i][j] != NEG_INF:
                cost[i, j] = float(int(a[i][j]))
    rows, cols = linear_sum_assignment(cost, maximize=True)
    total = 0
    for i, j in zip(rows, cols):
        if a[i][j] == NEG_INF:
            return NEG_INF
        total += int(a[i][j])
    return total


def jacobi_number_bruteforce(a):
    """Permutation-enumeration oracle (small matrices only)."""
    import itertools

    m = len(a)
    n = len(a[0]) if m else 0
    k = min(m, n)
    if k == 0:
        return 0
    best = NEG_INF
    rowsets = itertools.combinations(range(m), k) if m > n else [tuple(range(m))]
    for rows in rowsets:
        for cols in itertools.permutations(range(n), k):
            s = 0
            ok = True
            for i, j in zip(rows, cols):
                if a[i][j] == NEG_INF:
                    ok = False
                    break
                s += a[i][j]
            if ok and s > best:
                best = s
    return best


def norm_forms(sys: DiffSystem):
    """Norm forms of all P_i together with their monomial shifts."""
    out = []
    for i in range(sys.size):
        out.append(norm_form(sys.poly(i)))
    return out


def order_matrix(sys: DiffSystem):
    """(n+1) x n matrix of ord(P_i^N, y_j)."""
    rows = []
    for nf, _ in norm_forms(sys):
        rows.append(tuple(nf.order_in(("y", j)) for j in range(1, sys.n + 1)))
    return tuple(rows)


def _deleted(a, i):
    return [list(row) for k, row in enumerate(a) if k != i]


def order_bounds(sys: DiffSystem, budget: int = 10_000) -> BoundReport:
    """Per-block order bounds for the sparse differential resultant."""
    if generic_rank(sys) != sys.n:
        raise ValueError("order bounds are defined for essential systems only")
    subset = rank_essential_subset(sys, budget=budget).subset

    nfs = norm_forms(sys)
    a = order_matrix(sys)
    n = sys.n
    jac = tuple(jacobi_number(_deleted(a, i)) for i in range(sys.size))

    # least derivative order of y_j occurring anywhere in the norm forms
    o_low = []
    for j in range(1, n + 1):
        lows = []
        for nf, _ in nfs:
            for m in nf.terms:
                for v, _e in m:
                    if v[0] == "y" and v[1] == j:
                        lows.append(v[-1])
        o_low.append(min(lows) if lows else 0)
    gamma = sum(o_low)
    modified = tuple(x - gamma if x != NEG_INF else NEG_INF for x in jac)

    e_i = [nf.y_order() for nf, _ in nfs]
    e_i = [x if x != NEG_INF else 0 for x in e_i]
    e = sum(e_i)
    e_bar = []
    for j in range(n):
        vals = [e_i[i] - a[i][j] for i in range(sys.size) if a[i][j] != NEG_INF]
        e_bar.append(min(vals) if vals else 0)
    gamma_p = sum(ol + eb for ol, eb in zip(o_low, e_bar))
    alt_l = tuple(e - x - gamma_p for x in e_i)
    alt_e = tuple(e - x for x in e_i)

    if len(subset) == sys.size:
        effective = tuple(
            modified[i] if jac[i] != NEG_INF else NEG_INF for i in range(sys.size)
        )
    else:
        a_t = [list(a[i]) for i in subset]
        effective = []
        for i in range(sys.size):
            if i in subset:
                pos = subset.index(i)
                effective.append(jacobi_number(_deleted(a_t, pos)))
            else:
                effective.append(NEG_INF)
        effective = tuple(effective)

    return BoundReport(
        order_matrix=a,
        jacobi=jac,
        gamma=gamma,
        modified=modified,
        alt_L=alt_l,
        alt_E=alt_e,
        subset=subset,
        effective=effective,
    )


def _y_degree(monomial) -> int:
    return sum(e for v, e in monomial if v[0] == "y")


def system_degrees(sys: DiffSystem):
    """(m_i, deg(N_i0)) per polynomial: total y-degree of the norm form and
    of its first support monomial after the norm shift."""
    out = []
    for i, (nf, shift) in enumerate(norm_forms(sys)):
        m_i = nf.degree_y()
        from .diffpoly import mono_mul

        n_i0 = _y_degree(mono_mul(shift, sys.supports[i][0]))
        out.append((int(m_i), int(n_i0)))
    return out


def degree_bound(sys: DiffSystem, h) -> int:
    """prod_i (m_i + 1)^(h_i + 1); entries of h set to None are skipped
    (blocks absent from the resultant)."""
    degs = system_degrees(sys)
    out = 1
    for i, hi in enumerate(h):
        if hi is None:
            continue
        if hi < 0:
            raise ValueError("h entries must be nonnegative")
        out *= (degs[i][0] + 1) ** (hi + 1)
    return out


def cofactor_degree_bound(sys: DiffSystem, h, d: int):
    """Upper bound on deg(H_ij (P_i^N)^(j)) divided out per cofactor:
    [m + 1 + sum_i (h_i+1) deg(N_i0)] * d - m_i - 1, per block i."""
    degs = system_degrees(sys)
    active = [i for i, hi in enumerate(h) if hi is not None]
    m = max(degs[i][0] for i in active)
    head = m + 1 + sum((h[i] + 1) * degs[i][1] for i in active)
    return {i: head * d - degs[i][0] - 1 for i in active}


def bezout_block_bound(sys: DiffSystem, i: int) -> Fraction:
    """Per-block degree bound for the dense differential resultant:
    (s - s_i + 1)/m_i * prod_j m_j^(s - s_j + 1)."""
    s_orders = [sys.s_order(k) for k in range(sys.size)]
    s = sum(s_orders)
    degs = [max(_y_degree(m) for m in sys.supports[k]) for k in range(sys.size)]
    if degs[i] == 0:
        raise ValueError("block degree bound needs deg(P_i, Y) >= 1")
    prod = 1
    for j in range(sys.size):
        prod *= degs[j] ** (s - s_orders[j] + 1)
    return Fraction(s - s_orders[i] + 1, degs[i]) * prod
