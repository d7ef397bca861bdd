"""Search for the sparse differential resultant by exact linear algebra.

The resultant SR of an essential system is found by looping over
candidate per-block order vectors h (total order ascending), then total
degree d ascending, then per-block degree compositions of d, and solving a
homogeneous linear system for the coefficients of a degree-d ansatz SR_0
together with cofactors H_ij realizing the representation identity

    prod_i N_i0^((h_i+1)d) * SR_0 = sum_ij H_ij (P_i^N)^(j).

Two sound pruning layers keep the search exact but fast:

* an order-vector test — the coordinates zeta_i^(l) (l <= h_i) admit an
  algebraic relation only if their Jacobian with respect to the derivative
  variables of Y is rank-deficient; full rank at a random point proves no
  relation exists at h for any degree, so the whole h-branch is skipped;
* a degree-cell filter — a nonzero SR_0 with block degrees (d_i) exists
  only if the evaluations of the ansatz monomials at random truncated
  series on the generic-zero locus (mod a word-size prime) are linearly
  dependent; full column rank proves the cell empty.

Both tests can only skip cells that provably contain no solution; false
alarms merely cost an exact solve that comes back empty.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

from . import linalg
from .bounds import (
    cofactor_degree_bound,
    degree_bound,
    norm_forms,
    order_bounds,
    system_degrees,
)
from .diffpoly import (
    NEG_INF,
    ONE,
    DiffSystem,
    Monomial,
    Poly,
    differentiate,
    mono,
    mono_key,
    mono_mul,
    mono_pow,
    uvar,
)
from .essential import is_essential, rank_essential_subset


class ResourceError(RuntimeError):
    """The monomial basis of a linear system exceeds the configured budget."""


@dataclass(frozen=True)
class SearchOptions:
    max_order: Optional[int] = None
    max_degree: Optional[int] = None
    cofactor_start: Optional[int] = None
    budget: int = 10_000          # selection budget for essentiality
    seed: int = 0
    truncation: int = 10          # valid series coefficients in the filter
    threads: int = 1
    certify: bool = True
    max_unknowns: int = 20_000


@dataclass(frozen=True)
class Prolongation:
    polys: tuple   # ((i, j, (P_i^N)^(j)), ...)
    yvars: tuple
    uvars: tuple


@dataclass(frozen=True)
class LinearSystem:
    rows: tuple              # dicts {column index: Fraction}
    ncols: int
    c0_monomials: tuple      # ansatz monomials, columns 0..len-1
    cofactor_columns: tuple  # (i, j, u_monomial, y_monomial) per column
    lhs_monomial: Monomial


@dataclass(frozen=True)
class ResultantCertificate:
    sr: Poly
    h: tuple                 # per input polynomial; None when absent
    d: int
    block_degrees: tuple     # per input polynomial; None when absent
    cofactors: Mapping       # (i, j) -> Poly
    lhs_monomial: Monomial
    warnings: tuple = ()

    def check_identity(self, sys: DiffSystem) -> bool:
        """Recheck the representation identity by full expansion."""
        lhs = Poly.monomial(self.lhs_monomial) * self.sr
        rhs = Poly()
        nfs = norm_forms(sys)
        for (i, j), hij in self.cofactors.items():
            rhs = rhs + hij * differentiate(nfs[i][0], j)
        return lhs == rhs


# ----------------------------------------------------------------------
# Monomial enumeration
# ----------------------------------------------------------------------


def _block_vars(sys: DiffSystem, i: int, h_i: int):
    return [
        uvar(i, k, l)
        for k in range(len(sys.supports[i]))
        for l in range(h_i + 1)
    ]


def _degree_monomials(variables, d: int):
    """All monomials of total degree exactly d over the given variables."""
    if d == 0:
        return [ONE]
    out = []
    for combo in itertools.combinations_with_replacement(variables, d):
        exps = {}
        for v in combo:
            exps[v] = exps.get(v, 0) + 1
        out.append(mono(exps))
    return out


def _count_degree_monomials(nvars: int, d: int) -> int:
    from math import comb

    return comb(nvars + d - 1, d) if nvars else (1 if d == 0 else 0)


def _block_degree_monomials(sys, h_map, deg_map):
    """Monomials with prescribed total degree per u-block."""
    per_block = []
    for i in sorted(h_map):
        per_block.append(
            _degree_monomials(_block_vars(sys, i, h_map[i]), deg_map[i])
        )
    out = []
    for parts in itertools.product(*per_block):
        m = ONE
        for p in parts:
            m = mono_mul(m, p)
        out.append(m)
    out.sort(key=mono_key)
    return out


def _compositions(total: int, parts: int):
    """All positive integer compositions of ``total`` into ``parts`` parts,
    in ascending lexicographic order."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _order_vectors(caps, total):
    """All vectors 0 <= h_i <= caps[i] with sum = total, lexicographic."""
    if len(caps) == 1:
        if 0 <= total <= caps[0]:
            yield (total,)
        return
    for first in range(0, min(caps[0], total) + 1):
        for rest in _order_vectors(caps[1:], total - first):
            yield (first,) + rest


# ----------------------------------------------------------------------
# Order-vector pruning: Jacobian rank of the generic-zero coordinates
# ----------------------------------------------------------------------


def _zeta_poly(sys: DiffSystem, i: int) -> Poly:
    """zeta_i = -sum_k u_ik M_ik / M_i0 as a Laurent polynomial."""
    inv0 = mono_pow(sys.supports[i][0], -1)
    out = Poly()
    for k in range(1, len(sys.supports[i])):
        m = mono_mul(mono({uvar(i, k): 1}), mono_mul(sys.supports[i][k], inv0))
        out = out - Poly.monomial(m)
    return out


def _eval_full(p: Poly, vals) -> Fraction:
    total = Fraction(0)
    for m, c in p.terms.items():
        v = Fraction(c)
        for var, e in m:
            v *= vals[var] ** e
        total += v
    return total


def order_vector_admits_relation(sys: DiffSystem, h_map, seeds=(101, 202)) -> bool:
    """True unless the coordinates zeta_i^(l) (i active, l <= h_i) are
    provably algebraically independent over the free coefficients, in which
    case no polynomial relation exists at this order vector for any degree."""
    coords = []
    for i in sorted(h_map):
        z = _zeta_poly(sys, i)
        for _ in range(h_map[i] + 1):
            coords.append(z)
            z = z.diff()
    # partial derivatives with respect to every y-derivative variable
    yvars = sorted({v for p in coords for v in p.variables() if v[0] == "y"})
    partials = [[p.partial(v) for v in yvars] for p in coords]
    m = len(coords)
    for seed in seeds:
        rng = random.Random(f"order:{seed}")
        allvars = {
            v for row in partials for p in row for v in p.variables()
        } | set(yvars)
        vals = {}
        for v in sorted(allvars):
            x = 0
            while x == 0:
                x = rng.randint(-(1 << 12), 1 << 12)
            vals[v] = Fraction(x)
        mat = [[_eval_full(p, vals) for p in row] for row in partials]
        if linalg.rank_exact(mat) == m:
            return False
    return True


# ----------------------------------------------------------------------
# Degree-cell filter: modular series evaluation on the generic zero
# ----------------------------------------------------------------------


def _ser_mul(a, b, p):
    n = min(len(a), len(b))
    return np.convolve(a[:n], b[:n])[:n] % p


def _ser_diff(a, p):
    n = len(a)
    if n < 2:
        raise ValueError("series precision exhausted")
    return (a[1:] * np.arange(1, n, dtype=np.int64)) % p


def _ser_recip(a, p):
    n = len(a)
    out = np.zeros(n, dtype=np.int64)
    inv0 = pow(int(a[0]), p - 2, p)
    out[0] = inv0
    for k in range(1, n):
        acc = int(np.dot(a[1 : k + 1], out[k - 1 :: -1][: k]) % p)
        out[k] = (-inv0 * acc) % p
    return out


def _ser_pow(a, e, p):
    base = a if e >= 0 else _ser_recip(a, p)
    e = abs(e)
    out = np.zeros(len(base), dtype=np.int64)
    out[0] = 1
    while e:
        if e & 1:
            out = _ser_mul(out, base, p)
        e >>= 1
        if e:
            base = _ser_mul(base, base, p)
    return out


class _ModPoint:
    """Random series point on the generic-zero locus modulo p."""

    def __init__(self, sys: DiffSystem, h_map, p: int, rng, length: int):
        self.p = p
        self.base = {}
        self.cache = {}

        def rand_series(unit):
            arr = np.array(
                [rng.randint(-9, 9) for _ in range(length)], dtype=np.int64
            )
            while unit and arr[0] % p == 0:
                arr[0] = rng.randint(1, 9)
            return arr % p

        eta = {}
        for j in range(1, sys.n + 1):
            eta[j] = rand_series(unit=True)

        def eval_mono_y(monomial):
            out = np.zeros(length, dtype=np.int64)
            out[0] = 1
            cur_len = length
            pieces = []
            for v, e in monomial:
                base = eta[v[1]]
                for _ in range(v[-1]):
                    base = _ser_diff(base, p)
                pieces.append((base, e))
                cur_len = min(cur_len, len(base))
            out = out[:cur_len]
            for base, e in pieces:
                out = _ser_mul(out, _ser_pow(base[:cur_len], e, p), p)
            return out

        for i in sorted(h_map):
            for k in range(1, len(sys.supports[i])):
                self.base[("u", i, k)] = rand_series(unit=False)
        for i in sorted(h_map):
            inv0 = _ser_recip(eval_mono_y(sys.supports[i][0]), p)
            zeta = np.zeros(length, dtype=np.int64)
            for k in range(1, len(sys.supports[i])):
                mk = eval_mono_y(sys.supports[i][k])
                term = _ser_mul(_ser_mul(self.base[("u", i, k)], mk, p), inv0, p)
                zeta = (zeta[: len(term)] + term[: len(zeta)]) % p
            self.base[("u", i, 0)] = (-zeta) % p

    def value(self, v):
        got = self.cache.get(v)
        if got is not None:
            return got
        arr = self.base[v[:-1]]
        for _ in range(v[-1]):
            arr = _ser_diff(arr, self.p)
        self.cache[v] = arr
        return arr

    def eval_monomial(self, monomial, valid: int):
        out = np.zeros(valid, dtype=np.int64)
        out[0] = 1
        for v, e in monomial:
            base = self.value(v)
            out = _ser_mul(out, _ser_pow(base[:valid], e, self.p), self.p)
        return out[:valid]


def _rank_mod(mat: np.ndarray, p: int) -> int:
    a = mat % p
    m, n = a.shape
    r = 0
    for c in range(n):
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
        r += 1
    return r


_FILTER_PRIMES = (33554393, 33554383)  # primes just below 2^25


def degree_cell_may_have_kernel(sys, h_map, monomials, seed, valid) -> bool:
    """False only when the ansatz monomials are provably linearly independent
    as functions on the generic-zero locus (no solution in this cell)."""
    ncols = len(monomials)
    max_h = max(h_map.values())
    max_s = max(sys.s_order(i) for i in h_map)
    length = valid + max_h + max_s + 2
    for p in _FILTER_PRIMES:
        blocks = []
        point_idx = 0
        while point_idx * valid < ncols + 3:
            rng = random.Random(f"filter:{seed}:{p}:{point_idx}")
            pt = _ModPoint(sys, h_map, p, rng, length)
            cols = [pt.eval_monomial(m, valid) for m in monomials]
            blocks.append(np.stack(cols, axis=1))  # valid x ncols
            point_idx += 1
        mat = np.concatenate(blocks, axis=0)
        if _rank_mod(mat, p) == ncols:
            return False
    return True


# ----------------------------------------------------------------------
# Linear-system construction
# ----------------------------------------------------------------------


def prolongation(sys: DiffSystem, h_map) -> Prolongation:
    nfs = norm_forms(sys)
    polys = []
    for i in sorted(h_map):
        p = nfs[i][0]
        for j in range(h_map[i] + 1):
            polys.append((i, j, p))
            p = p.diff()
    yvars = sorted(
        {v for _, _, p in polys for v in p.variables() if v[0] == "y"}
    )
    uvars = sorted(
        {v for i in h_map for v in _block_vars(sys, i, h_map[i])}
    )
    return Prolongation(tuple(polys), tuple(yvars), tuple(uvars))


def _y_homogeneous_degree(p: Poly):
    degs = {sum(e for v, e in m if v[0] == "y") for m in p.terms}
    return degs.pop() if len(degs) == 1 else None


def _build(sys, h_map, d, comp_map, a_map, ycap_map, max_unknowns) -> LinearSystem:
    """Assemble the homogeneous linear system for

        prod_i N_i0^(a_i) * SR_0 - sum_ij H_ij (P_i^N)^(j) = 0

    with SR_0 of block degrees comp_map (or total degree d when comp_map is
    None) and H_ij of block degrees comp - e_i in U and y-degree bounded by
    ycap_map[i] (or fixed exactly when the system is y-homogeneous)."""
    active = sorted(h_map)
    nfs = norm_forms(sys)
    pro = prolongation(sys, h_map)

    lhs_mono = ONE
    for i in active:
        _, shift = nfs[i]
        n0 = mono_mul(shift, sys.supports[i][0])
        lhs_mono = mono_mul(lhs_mono, mono_pow(n0, a_map[i]))
    lhs_ydeg = sum(e for _, e in lhs_mono)

    # refuse oversized systems before enumerating anything
    if comp_map is None:
        est = _count_degree_monomials(len(pro.uvars), d)
    else:
        est = 1
        for i in active:
            est *= _count_degree_monomials(
                len(_block_vars(sys, i, h_map[i])), comp_map[i]
            )
    if est > max_unknowns:
        raise ResourceError(
            f"linear system too large: {est} ansatz unknowns exceed the "
            f"budget of {max_unknowns}"
        )

    # ansatz monomials
    if comp_map is None:
        c0 = sorted(_degree_monomials(list(pro.uvars), d), key=mono_key)
    else:
        c0 = _block_degree_monomials(sys, h_map, comp_map)

    # y-homogeneous systems pin the exact cofactor y-degree slice
    w = {i: _y_homogeneous_degree(nfs[i][0]) for i in active}
    homogeneous = all(wi is not None for wi in w.values())

    yslices = {}
    for i in active:
        if homogeneous:
            exact = lhs_ydeg - w[i]
            yslices[i] = [exact] if exact >= 0 else []
        else:
            yslices[i] = list(range(0, ycap_map[i] + 1))

    total = est
    for i in active:
        if comp_map is None:
            ucnt = _count_degree_monomials(len(pro.uvars), d - 1)
        else:
            ucnt = 1
            for t in active:
                ucnt *= _count_degree_monomials(
                    len(_block_vars(sys, t, h_map[t])),
                    comp_map[t] - (1 if t == i else 0),
                )
        ycnt = sum(
            _count_degree_monomials(len(pro.yvars), s) for s in yslices[i]
        )
        total += (h_map[i] + 1) * ucnt * ycnt
    if total > max_unknowns:
        raise ResourceError(
            f"linear system too large: {total} unknowns exceed the budget "
            f"of {max_unknowns}"
        )

    cof_cols = []
    for i in active:
        if comp_map is None:
            u_monos = sorted(
                _degree_monomials(list(pro.uvars), d - 1), key=mono_key
            )
        else:
            deg_map = dict(comp_map)
            deg_map[i] = deg_map[i] - 1
            u_monos = _block_degree_monomials(sys, h_map, deg_map)
        y_monos = []
        for slice_deg in yslices[i]:
            y_monos.extend(_degree_monomials(list(pro.yvars), slice_deg))
        y_monos.sort(key=mono_key)
        for j in range(h_map[i] + 1):
            for um in u_monos:
                for ym in y_monos:
                    cof_cols.append((i, j, um, ym))

    ncols = len(c0) + len(cof_cols)
    if ncols > max_unknowns:
        raise ResourceError(
            f"linear system too large: {len(c0)} ansatz + {len(cof_cols)} "
            f"cofactor unknowns exceed the budget of {max_unknowns}"
        )

    der = {}
    for i, j, p in pro.polys:
        der[(i, j)] = p

    rows = {}

    def add(monomial, col, coeff):
        row = rows.get(monomial)
        if row is None:
            row = {}
            rows[monomial] = row
        row[col] = row.get(col, Fraction(0)) + coeff

    for idx, m in enumerate(c0):
        add(mono_mul(lhs_mono, m), idx, Fraction(1))
    base = len(c0)
    for off, (i, j, um, ym) in enumerate(cof_cols):
        head = mono_mul(um, ym)
        for pm, pc in der[(i, j)].terms.items():
            add(mono_mul(head, pm), base + off, -pc)

    row_list = tuple(rows[m] for m in sorted(rows, key=mono_key))
    return LinearSystem(
        rows=row_list,
        ncols=ncols,
        c0_monomials=tuple(c0),
        cofactor_columns=tuple(cof_cols),
        lhs_monomial=lhs_mono,
    )


def build_linear_system(sys: DiffSystem, h, d: int, cofdeg: int,
                        max_unknowns: int = 200_000) -> LinearSystem:
    """Homogeneous linear system for the representation identity at order
    vector ``h`` (per active block, None for absent blocks), ansatz degree
    ``d`` and cofactor total degree ``cofdeg``."""
    h_map = {i: hi for i, hi in enumerate(h) if hi is not None}
    if d < 1:
        raise ValueError("ansatz degree must be >= 1")
    a_map = {i: (h_map[i] + 1) * d for i in h_map}
    ycap = {i: max(0, cofdeg - (d - 1)) for i in h_map}
    return _build(sys, h_map, d, None, a_map, ycap, max_unknowns)


def nullspace(system: LinearSystem):
    """Exact rational nullspace basis of an assembled linear system."""
    return linalg.nullspace(system.rows, system.ncols)


# ----------------------------------------------------------------------
# The search
# ----------------------------------------------------------------------


def _c0_projection(system: LinearSystem, basis):
    nc0 = len(system.c0_monomials)
    proj = [vec[:nc0] for vec in basis]
    proj = [v for v in proj if any(x != 0 for x in v)]
    if not proj:
        return 0, None
    dim = linalg.rank_exact(proj)
    return dim, proj[0]


def _extract(system: LinearSystem, basis, sys, h_map, d, comp_map):
    dim, _ = _c0_projection(system, basis)
    if dim == 0:
        return None
    nc0 = len(system.c0_monomials)
    vec = next(v for v in basis if any(x != 0 for x in v[:nc0]))
    sr = Poly(
        {m: vec[idx] for idx, m in enumerate(system.c0_monomials) if vec[idx]}
    )
    sr_norm = sr.normalized()
    lead = sr.leading()[0]
    scale = sr_norm.terms[lead] / sr.terms[lead]
    cof = {}
    for off, (i, j, um, ym) in enumerate(system.cofactor_columns):
        c = vec[nc0 + off]
        if c:
            key = (i, j)
            cof.setdefault(key, Poly())
            cof[key] = cof[key] + Poly.monomial(mono_mul(um, ym), c * scale)
    warnings = ()
    if dim > 1:
        warnings = (
            f"nullspace projection onto the ansatz coefficients has "
            f"dimension {dim}; minimality is not certified",
        )
    size = sys.size
    h_full = tuple(h_map.get(i) for i in range(size))
    comp_full = tuple(
        (comp_map or {}).get(i) if i in h_map else None for i in range(size)
    )
    return ResultantCertificate(
        sr=sr_norm,
        h=h_full,
        d=d,
        block_degrees=comp_full,
        cofactors=cof,
        lhs_monomial=system.lhs_monomial,
        warnings=warnings,
    )


def _rescale_to_canonical_exponent(cert: ResultantCertificate, sys, h_map, d):
    """Rescale a certificate found at a smaller clearing exponent to the
    canonical lhs monomial prod N_i0^((h_i+1)d)."""
    nfs = norm_forms(sys)
    target = ONE
    for i in sorted(h_map):
        n0 = mono_mul(nfs[i][1], sys.supports[i][0])
        target = mono_mul(target, mono_pow(n0, (h_map[i] + 1) * d))
    if target == cert.lhs_monomial:
        return cert
    extra = mono_mul(target, mono_pow(cert.lhs_monomial, -1))
    cof = {
        key: Poly.monomial(extra) * p for key, p in cert.cofactors.items()
    }
    return replace(cert, lhs_monomial=target, cofactors=cof)


def _try_cell(sys, h_map, d, comp_map, opts) -> Optional[ResultantCertificate]:
    """Exact stage at one (h, d, block-degree) cell.

    A solution found at a smaller clearing exponent a_i <= (h_i+1)d or a
    smaller cofactor y-degree cap rescales to the canonical identity, so
    every affordable (exponent, cap) combination is tried in ascending
    order of linear-system size.  The cell is reported empty only when the
    fully-bounded combination itself was affordable and failed; otherwise
    the search refuses honestly instead of guessing."""
    active = sorted(h_map)
    nfs = norm_forms(sys)
    h_list = [h_map.get(i) for i in range(sys.size)]
    cof_bound = cofactor_degree_bound(sys, h_list, d)
    full_a = {i: (h_map[i] + 1) * d for i in active}
    n0 = {i: mono_mul(nfs[i][1], sys.supports[i][0]) for i in active}
    n0deg = {i: sum(e for _, e in n0[i]) for i in active}
    nontrivial_lhs = any(n0[i] != ONE for i in active)
    w = {i: _y_homogeneous_degree(nfs[i][0]) for i in active}
    homogeneous = all(wi is not None for wi in w.values())
    pro = prolongation(sys, h_map)
    nyv = len(pro.yvars)

    # exact column counts without building anything
    nc0 = 1
    for i in active:
        nc0 *= _count_degree_monomials(
            len(_block_vars(sys, i, h_map[i])), comp_map[i]
        )
    ucount = {}
    for i in active:
        cnt = h_map[i] + 1
        for t in active:
            dt = comp_map[t] - (1 if t == i else 0)
            cnt *= _count_degree_monomials(
                len(_block_vars(sys, t, h_map[t])), dt
            )
        ucount[i] = cnt

    if nontrivial_lhs:
        a_scalars = range(0, max(full_a.values()) + 1)
    else:
        a_scalars = (max(full_a.values()),)
    ycap_bound = {i: max(0, cof_bound[i] - (d - 1)) for i in active}
    cap_max = max(ycap_bound.values())
    start_cap = 0 if opts.cofactor_start is None else max(
        0, opts.cofactor_start - (d - 1)
    )

    grid = []
    seen = set()
    truncated = False
    if homogeneous:
        # the cofactor y-degree slice is pinned by the clearing exponent
        for a_s in a_scalars:
            a_map = {i: min(a_s, full_a[i]) for i in active}
            key = tuple(sorted(a_map.items()))
            if key in seen:
                continue
            seen.add(key)
            lhs_ydeg = sum(a_map[i] * n0deg[i] for i in active)
            cost = nc0
            for i in active:
                s = lhs_ydeg - w[i]
                cost += ucount[i] * (
                    _count_degree_monomials(nyv, s) if s >= 0 else 0
                )
            final = a_map == full_a
            if cost > opts.max_unknowns:
                truncated = True
                continue
            grid.append((cost, a_s, a_map, {i: 0 for i in active}, final))
    else:
        # cumulative y-monomial counts for caps 0..cap_max, stopping once
        # even the cheapest use exceeds the budget
        ycum = []
        running = 0
        for c in range(cap_max + 1):
            running += _count_degree_monomials(nyv, c)
            ycum.append(running)
            if nc0 + min(ucount.values()) * running > opts.max_unknowns:
                break
        for a_s in a_scalars:
            a_map = {i: min(a_s, full_a[i]) for i in active}
            for c in range(start_cap, cap_max + 1):
                ycap_map = {i: min(c, ycap_bound[i]) for i in active}
                key = (
                    tuple(sorted(a_map.items())),
                    tuple(sorted(ycap_map.items())),
                )
                if key in seen:
                    continue
                seen.add(key)
                if c >= len(ycum):
                    truncated = True
                    break
                cost = nc0 + sum(
                    ucount[i] * ycum[ycap_map[i]] for i in active
                )
                final = a_map == full_a and all(
                    ycap_map[i] == ycap_bound[i] for i in active
                )
                if cost > opts.max_unknowns:
                    truncated = True
                    break
                grid.append((cost, a_s, a_map, ycap_map, final))

    covered = False
    for cost, _, a_map, ycap_map, final in sorted(
        grid, key=lambda g: (g[0], g[1])
    ):
        system = _build(
            sys, h_map, d, comp_map, a_map, ycap_map, opts.max_unknowns
        )
        basis = nullspace(system)
        cert = _extract(system, basis, sys, h_map, d, comp_map)
        if cert is not None:
            return _rescale_to_canonical_exponent(cert, sys, h_map, d)
        if final:
            covered = True
    if covered:
        return None
    assert truncated
    raise ResourceError(
        f"cell at orders {tuple(h_map.values())}, degrees "
        f"{tuple(comp_map.values())} cannot be exhausted within the "
        f"budget of {opts.max_unknowns} unknowns"
    )


def _finish(cert: ResultantCertificate, sys: DiffSystem) -> ResultantCertificate:
    if not cert.check_identity(sys):
        raise AssertionError("certificate identity recheck failed")
    if cert.sr.content() != 1 or cert.sr.leading()[1] < 0:
        raise AssertionError("certificate normalization violated")
    if any(v[0] == "y" for v in cert.sr.variables()):
        raise AssertionError("resultant contains Y-family variables")
    return cert


def _search(sys, active, bounds, opts, d_start=1, d_outer=False):
    """Shared search loop.  ``d_outer`` selects the dense-mode driving
    order (degree outside, order inside)."""
    caps = [bounds[i] for i in active]
    total_cap = sum(caps)
    admits = {}

    def order_ok(h):
        got = admits.get(h)
        if got is None:
            got = order_vector_admits_relation(
                sys, dict(zip(active, h))
            )
            admits[h] = got
        return got

    def cells_for(h_map, d):
        for comp in _compositions(d, len(active)):
            comp_map = dict(zip(active, comp))
            monomials = _block_degree_monomials(sys, h_map, comp_map)
            if len(monomials) > opts.max_unknowns:
                raise ResourceError(
                    f"ansatz basis of {len(monomials)} monomials exceeds "
                    f"the budget of {opts.max_unknowns}"
                )
            if not degree_cell_may_have_kernel(
                sys, h_map, monomials, opts.seed, opts.truncation
            ):
                continue
            cert = _try_cell(sys, h_map, d, comp_map, opts)
            if cert is not None:
                return cert
        return None

    if not d_outer:
        for o in range(0, total_cap + 1):
            for h in _order_vectors(caps, o):
                if not order_ok(h):
                    continue
                h_map = dict(zip(active, h))
                h_list = [h_map.get(i) for i in range(sys.size)]
                dmax = degree_bound(sys, h_list)
                if opts.max_degree is not None:
                    dmax = min(dmax, opts.max_degree)
                for d in range(d_start, dmax + 1):
                    cert = cells_for(h_map, d)
                    if cert is not None:
                        return _finish(cert, sys)
    else:
        h_full = [bounds[i] for i in active]
        h_list_full = dict(zip(active, h_full))
        dmax = degree_bound(
            sys, [h_list_full.get(i) for i in range(sys.size)]
        )
        if opts.max_degree is not None:
            dmax = min(dmax, opts.max_degree)
        for d in range(d_start, dmax + 1):
            for o in range(0, sum(h_full) + 1):
                for h in _order_vectors(h_full, o):
                    if not order_ok(h):
                        continue
                    cert = cells_for(dict(zip(active, h)), d)
                    if cert is not None:
                        return _finish(cert, sys)
    if opts.max_order is not None or opts.max_degree is not None:
        raise ResourceError(
            "search exhausted under the user-imposed order/degree caps "
            "without finding the resultant; raise or remove the caps"
        )
    raise RuntimeError(
        "resultant search exhausted all bounds without a solution; "
        "this indicates an implementation bug for an essential system"
    )


def sdresultant(sys: DiffSystem, options: Optional[SearchOptions] = None):
    """Sparse differential resultant of an essential system."""
    opts = options or SearchOptions()
    mode = "certified" if opts.certify else "randomized"
    rep = is_essential(sys, mode=mode, budget=opts.budget)
    if not rep.essential:
        raise ValueError(
            f"system is not differentially essential (rank {rep.rank} < {sys.n})"
        )
    report = order_bounds(sys, budget=opts.budget)
    active = list(report.subset)
    bounds = {}
    for i in active:
        b = report.effective[i]
        if b == NEG_INF:
            raise AssertionError("rank-essential block with no order bound")
        if opts.max_order is not None:
            b = min(b, opts.max_order)
        bounds[i] = int(b)
    return _search(sys, active, bounds, opts)


def dresultant(sys: DiffSystem, options: Optional[SearchOptions] = None):
    """Dense-mode search: order bounds fixed at s - s_i and degree iterated
    from n+1 upward, with an inner order refinement selecting the minimal
    realized orders."""
    opts = options or SearchOptions()
    mode = "certified" if opts.certify else "randomized"
    rep = is_essential(sys, mode=mode, budget=opts.budget)
    if not rep.essential:
        raise ValueError(
            f"system is not differentially essential (rank {rep.rank} < {sys.n})"
        )
    active = list(rank_essential_subset(sys, budget=opts.budget).subset)
    s_orders = [sys.s_order(i) for i in range(sys.size)]
    s = sum(s_orders)
    bounds = {}
    for i in active:
        b = s - s_orders[i]
        if opts.max_order is not None:
            b = min(b, opts.max_order)
        bounds[i] = b
    return _search(sys, active, bounds, opts, d_start=sys.n + 1, d_outer=True)
