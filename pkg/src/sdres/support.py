"""Symbolic support matrices of Laurent differential monomials and their
reduction to T-shape by Q-elementary transformations.

The (i, j) entry of a support matrix is the univariate polynomial
``d_ij = sum_k d_ijk x_j^k`` where ``d_ijk`` is the exponent of ``y_j^(k)``
in the monomial labelling row i.  Q-elementary transformations are: row
swaps, adding a rational multiple of one row to another, and column swaps.
Each is mirrored on the row labels (formal monomials with rational
exponents) and column labels, so the labels regenerate the entries exactly.

The reduction returns a T-shape matrix with index (i, j): all entries
outside the first i rows and columns i..i+j-1 (0-based) are zero, and the
submatrix of the first i+j columns is reduced.  The rank of a T-shape
matrix is i + j, which equals the differential transcendence degree of the
field generated by the row monomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diffpoly import NEG_INF, Monomial, Var

# ----------------------------------------------------------------------
# Entries: univariate polynomials as tuples of Fractions, low -> high,
# trailing zeros trimmed; () is the zero entry (degree -inf).
# ----------------------------------------------------------------------

Entry = tuple


def entry(coeffs) -> Entry:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def entry_degree(e: Entry):
    return len(e) - 1 if e else NEG_INF


def _edeg(e: Entry) -> int:
    """Degree with -1 standing in for -inf (safe: real degrees are >= 0)."""
    return len(e) - 1


def _eadd(a: Entry, b: Entry) -> Entry:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _escale(a: Entry, q: Fraction) -> Entry:
    if q == 0:
        return ()
    return tuple(c * q for c in a)


def entry_eval(e: Entry, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(e):
        acc = acc * x + c
    return acc


# ----------------------------------------------------------------------
# The matrix value
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SupportMatrix:
    """Row labels are formal monomials with rational exponents, stored as
    sorted tuples of (variable, Fraction exponent); column labels are the
    1-based indices of the y-variables in their current order."""

    rows: tuple
    cols: tuple
    entries: tuple

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0]) if self.entries else len(self.cols)

    def deg(self, i: int, j: int):
        return entry_degree(self.entries[i][j])

    def regenerated(self) -> "SupportMatrix":
        """Rebuild all entries from the row/column labels."""
        ents = []
        for label in self.rows:
            exps = dict(label)
            row = []
            for j in self.cols:
                coeffs = {}
                for v, e in exps.items():
                    if v[1] == j:
                        coeffs[v[-1]] = coeffs.get(v[-1], Fraction(0)) + e
                if coeffs:
                    row.append(entry([coeffs.get(k, 0) for k in range(max(coeffs) + 1)]))
                else:
                    row.append(())
            ents.append(tuple(row))
        return SupportMatrix(self.rows, self.cols, tuple(ents))

    def evaluated(self, values) -> list:
        """Substitute values[j] (a Fraction) for the variable x_{cols[j]}
        by column position; returns an exact rational matrix."""
        return [
            [entry_eval(self.entries[i][j], Fraction(values[j])) for j in range(self.n)]
            for i in range(self.m)
        ]


def support_matrix(monomials, n: int) -> SupportMatrix:
    """Build the symbolic support matrix of the given y-monomials."""
    rows = []
    ents = []
    for b in monomials:
        for v, _ in b:
            if v[0] != "y":
                raise ValueError("support matrices are defined for y-monomials only")
            if v[1] > n:
                raise ValueError(f"variable index {v[1]} exceeds n={n}")
        rows.append(tuple((v, Fraction(e)) for v, e in b))
        row = []
        for j in range(1, n + 1):
            coeffs = {}
            for v, e in b:
                if v[1] == j:
                    coeffs[v[-1]] = coeffs.get(v[-1], 0) + e
            row.append(entry([coeffs.get(k, 0) for k in range(max(coeffs) + 1)]) if coeffs else ())
        ents.append(tuple(row))
    return SupportMatrix(tuple(rows), tuple(range(1, n + 1)), tuple(ents))


def is_reduced(mat: SupportMatrix) -> bool:
    """True iff for each i <= min(m,n): d_ii is nonzero and its degree
    strictly exceeds the degree of every entry below it in column i."""
    for i in range(min(mat.m, mat.n)):
        d = _edeg(mat.entries[i][i])
        if d < 0:
            return False
        for k in range(i + 1, mat.m):
            if _edeg(mat.entries[k][i]) >= d:
                return False
    return True


def is_tshape(mat: SupportMatrix, index) -> bool:
    """Check the T-shape predicate for a claimed index (i, j)."""
    ti, tj = index
    if ti < 0 or tj < 0 or ti + tj > min(mat.m, mat.n):
        return False
    # zero outside the first ti rows and columns ti..ti+tj-1
    for r in range(ti, mat.m):
        for c in range(mat.n):
            if ti <= c < ti + tj:
                continue
            if mat.entries[r][c]:
                return False
    # first ti+tj columns reduced
    for c in range(ti + tj):
        d = _edeg(mat.entries[c][c])
        if d < 0:
            return False
        for r in range(c + 1, mat.m):
            if _edeg(mat.entries[r][c]) >= d:
                return False
    return True


@dataclass(frozen=True)
class TShapeResult:
    matrix: SupportMatrix
    index: tuple
    trace: tuple

    @property
    def rank(self) -> int:
        return self.index[0] + self.index[1]


# ----------------------------------------------------------------------
# Mutable working state; all operations are global (whole rows/columns)
# and recorded in the trace.
# ----------------------------------------------------------------------


class _Work:
    def __init__(self, mat: SupportMatrix):
        self.ents = [list(r) for r in mat.entries]
        self.rows = [dict(r) for r in mat.rows]
        self.cols = list(mat.cols)
        self.trace = []

    def rswap(self, a: int, b: int):
        if a == b:
            return
        self.ents[a], self.ents[b] = self.ents[b], self.ents[a]
        self.rows[a], self.rows[b] = self.rows[b], self.rows[a]
        self.trace.append(("rswap", a, b))

    def cswap(self, a: int, b: int):
        if a == b:
            return
        for row in self.ents:
            row[a], row[b] = row[b], row[a]
        self.cols[a], self.cols[b] = self.cols[b], self.cols[a]
        self.trace.append(("cswap", a, b))

    def radd(self, dst: int, src: int, q: Fraction):
        """row[dst] += q * row[src]; mirrored as B_dst *= B_src^q."""
        if q == 0:
            return
        row_s = self.ents[src]
        row_d = self.ents[dst]
        for j in range(len(row_d)):
            row_d[j] = _eadd(row_d[j], _escale(row_s[j], q))
        lbl = self.rows[dst]
        for v, e in self.rows[src].items():
            ne = lbl.get(v, Fraction(0)) + q * e
            if ne == 0:
                lbl.pop(v, None)
            else:
                lbl[v] = ne
        self.trace.append(("radd", dst, src, q))

    def col_permute(self, perm):
        """Rearrange columns so that new position k holds old column perm[k];
        realized (and recorded) as a sequence of column swaps."""
        n = len(self.cols)
        pos = list(range(n))      # old index -> current position
        cur = list(range(n))      # current position -> old index
        for k, target in enumerate(perm):
            p = pos[target]
            if p != k:
                self.cswap(k, p)
                o = cur[k]
                cur[k], cur[p] = target, o
                pos[target], pos[o] = k, p

    def snapshot(self) -> SupportMatrix:
        return SupportMatrix(
            tuple(tuple(sorted(r.items())) for r in self.rows),
            tuple(self.cols),
            tuple(tuple(row) for row in self.ents),
        )


def replay(mat: SupportMatrix, trace) -> SupportMatrix:
    """Re-apply a recorded trace to a matrix (audit helper)."""
    w = _Work(mat)
    for op in trace:
        if op[0] == "rswap":
            w.rswap(op[1], op[2])
        elif op[0] == "cswap":
            w.cswap(op[1], op[2])
        elif op[0] == "radd":
            w.radd(op[1], op[2], op[3])
        else:
            raise ValueError(f"unknown trace op {op[0]!r}")
    return w.snapshot()


# ----------------------------------------------------------------------
# The reduction.  A view is (r0, r1, c0, c1): rows r0..r1-1, cols c0..c1-1
# of the current full matrix.  Sub-reductions act on views but all
# operations touch whole rows and columns.
# ----------------------------------------------------------------------


def _view_zero(w: _Work, r0, r1, c0, c1) -> bool:
    return all(not w.ents[r][c] for r in range(r0, r1) for c in range(c0, c1))


def _step1(w: _Work, r0, r1, c0, c1):
    """Gauss-like reduction on the view.  Returns ('reduced', index) when
    every pivot position was filled, else ('zero', zi, zj) with the
    dimensions of the all-zero lower-right block."""
    vm, vn = r1 - r0, c1 - c0
    for s in range(min(vm, vn)):
        # 1.1: remaining subview all zero -> zero block
        # 1.2: global-max-degree pivot, ties broken by smallest (column, row)
        best = None
        for c in range(c0 + s, c1):
            for r in range(r0 + s, r1):
                d = _edeg(w.ents[r][c])
                if d >= 0 and (best is None or d > best[0]):
                    best = (d, c, r)
        if best is None:
            return ("zero", vm - s, vn - s)
        _, pc, pr = best
        w.rswap(r0 + s, pr)
        w.cswap(c0 + s, pc)
        ps, cs = r0 + s, c0 + s
        pivdeg = _edeg(w.ents[ps][cs])
        for r in range(ps + 1, r1):
            while _edeg(w.ents[r][cs]) == pivdeg:
                q = -w.ents[r][cs][-1] / w.ents[ps][cs][-1]
                w.radd(r, ps, q)
    return ("reduced", (vm, 0) if vm <= vn else (0, vn))


def _view_reduced_cols(w: _Work, r0, r1, c0, c1, upto) -> bool:
    """First `upto` columns of the view satisfy the reduced predicate."""
    for t in range(upto):
        d = _edeg(w.ents[r0 + t][c0 + t])
        if d < 0:
            return False
        for r in range(r0 + t + 1, r1):
            if _edeg(w.ents[r][c0 + t]) >= d:
                return False
    return True


def _rdm(w: _Work, r0, r1, c0, c1):
    """Reduce the view to T-shape; returns its index (i, j)."""
    vm, vn = r1 - r0, c1 - c0
    if vm <= 0 or vn <= 0:
        return (0, 0)
    p = max(vm, vn)

    outcome = _step1(w, r0, r1, c0, c1)
    if outcome[0] == "reduced":
        return outcome[1]
    zi, zj = outcome[1], outcome[2]

    prev_r = -1
    while True:
        r = zi + zj
        if r <= prev_r:
            raise AssertionError("0-rank of the zero block failed to increase")
        prev_r = r

        # 2.1: already T-shape with the current zero block?
        ti = vm - zi
        tj = (vn - zj) - ti
        if tj >= 0 and _view_reduced_cols(w, r0, r1, c0, c1, ti + tj):
            ok = True
            for rr in range(r0 + ti, r1):
                for cc in range(c0, c1):
                    if c0 + ti <= cc < c0 + ti + tj:
                        continue
                    if w.ents[rr][cc]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return (ti, tj)

        # 2.2: zero block spans all columns -> bottom zi rows are zero
        if zj == vn:
            return _rdm(w, r0, r1 - zi, c0, c1)

        # 2.3: zero block too large for step 2 -> step 3
        if r >= p + 1:
            break

        # 2.4: the minimal lower-right submatrix that may have full rank
        #   M_C1 = rows r1-zi..r1-1   x cols c0+p-r..c1-zj-1
        #   M_C2 = rows r0+p-r..r1-zi-1 x cols c1-zj..c1-1
        # 2.5
        i1, j1 = _rdm(w, r1 - zi, r1, c0 + p - r, c1 - zj)
        i2, j2 = _rdm(w, r0 + p - r, r1 - zi, c1 - zj, c1)
        w1 = max(0, (c1 - zj) - (c0 + p - r))
        m2 = max(0, (r1 - zi) - (r0 + p - r))
        n1_full = i1 + j1 == min(zi, w1)
        n2_full = i2 + j2 == min(m2, zj)

        if n1_full and n2_full:
            # 2.6: rotate column blocks [p-r .. vn-zj-1] and [vn-zj .. vn+vm-p-1]
            a, b, c = p - r, vn - zj, vn + vm - p
            perm = (
                list(range(c0, c0 + a))
                + list(range(c0 + b, c0 + c))
                + list(range(c0 + a, c0 + b))
                + list(range(c0 + c, c1))
            )
            full = list(range(c0)) + perm + list(range(c1, len(w.cols)))
            w.col_permute(full)
            return (vm, 0) if vm <= vn else (0, vn)

        # The zero sub-matrix of a T-shape (i, j) view of size a x b is
        # (a-i) x (b-j): its columns flank the pivot band on both sides.
        # Before merging with Z, move the band to the front of the view so
        # the zero columns become one contiguous block adjacent to Z.
        k1, l1 = zi - i1, w1 - j1
        if k1 + l1 >= zi + 1:
            # 2.7: merge N1's zero block with Z from the left
            if i1 > 0 and j1 > 0:
                base = c0 + p - r
                perm = (
                    list(range(base + i1, base + i1 + j1))
                    + list(range(base, base + i1))
                    + list(range(base + i1 + j1, c1 - zj))
                )
                full = list(range(base)) + perm + list(range(c1 - zj, len(w.cols)))
                w.col_permute(full)
            zi, zj = k1, zj + l1
        else:
            # 2.8: merge N2's zero block with Z from above
            k2, l2 = m2 - i2, zj - j2
            if k2 + l2 < zj + 1:
                raise AssertionError("step-2 merge: no zero block large enough")
            if i2 > 0 and j2 > 0:
                base = c1 - zj
                perm = (
                    list(range(base + i2, base + i2 + j2))
                    + list(range(base, base + i2))
                    + list(range(base + i2 + j2, c1))
                )
                full = list(range(base)) + perm + list(range(c1, len(w.cols)))
                w.col_permute(full)
            zi, zj = zi + k2, l2

    # Step 3: the zero block is large; assemble the T-shape directly.
    # M_C3 = lower-left zi x (vn-zj)
    k3, l3 = _rdm(w, r1 - zi, r1, c0, c1 - zj)
    if l3 == 0:
        # bottom zi-k3 rows of the view are zero
        i0, j0 = _rdm(w, r0, r1 - (zi - k3), c0, c1)
        return (i0, j0)
    if k3 + l3 < vn - zj:
        # 3.2: move the l3 live columns of N3 to the front of the view
        perm = (
            list(range(c0 + k3, c0 + k3 + l3))
            + list(range(c0, c0 + k3))
            + list(range(c0 + k3 + l3, c1))
        )
        full = list(range(c0)) + perm + list(range(c1, len(w.cols)))
        w.col_permute(full)
        zi, zj = zi - k3, vn - l3
    # 3.3: N3 (lower-left zi x (vn-zj)) now has full column rank.
    k4, l4 = _rdm(w, r0, r1 - zi, c1 - zj, c1)
    s4 = k4 + l4
    # 3.4: reduce the lower-left (vm-s4) x (vn-zj) block under N4's rank
    i5, j5 = _rdm(w, r0 + s4, r1, c0, c1 - zj)
    if i5 + j5 != vn - zj:
        raise AssertionError("lower-left block unexpectedly lost full column rank")
    q = vn - zj
    perm = (
        list(range(c0 + q, c0 + q + s4))
        + list(range(c0, c0 + q))
        + list(range(c0 + q + s4, c1))
    )
    full = list(range(c0)) + perm + list(range(c1, len(w.cols)))
    w.col_permute(full)
    return (k4, l4 + q)


def rdm(mat: SupportMatrix) -> TShapeResult:
    """Reduce a support matrix to T-shape by Q-elementary transformations."""
    w = _Work(mat)
    index = _rdm(w, 0, mat.m, 0, mat.n)
    out = w.snapshot()
    if not is_tshape(out, index):
        raise AssertionError("reduction produced a non-T-shape matrix")
    return TShapeResult(out, index, tuple(w.trace))


def dtrdeg_monomials(monomials, n: int) -> int:
    """Differential transcendence degree of Q<B_1,...,B_m> over Q."""
    res = rdm(support_matrix(monomials, n))
    return res.rank
