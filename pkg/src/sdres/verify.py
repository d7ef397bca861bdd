"""Independent checks on computed resultants.

* truncated power-series arithmetic over the rationals and evaluation of
  Laurent differential polynomials at series points;
* membership_check — the resultant must vanish when each u_{i0} is replaced
  by zeta_i = -sum_k u_{ik} M_{ik}(eta)/M_{i0}(eta) at random series points;
* homogeneity_check — per-block Euler identities;
* span_check / recover_solution — integer-lattice test on the support
  exponents and the closed-form recovery of the unique solution from
  partial derivatives of the resultant.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .linalg import solve_integer
from .diffpoly import (
    DiffSystem,
    Poly,
    Var,
    format_var,
    mono_pow,
    uvar,
    yvar,
)

_COEFF_RANGE = 9  # random series coefficients are drawn from [-9, 9]


# ----------------------------------------------------------------------
# Truncated power series over Q
# ----------------------------------------------------------------------


class Series:
    """Sum c_k t^k known modulo t^K (K = number of stored coefficients).

    Operations truncate to the precision both operands support; d/dt loses
    one coefficient, so precision is tracked honestly.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("series needs at least one known coefficient")

    @property
    def K(self) -> int:
        return len(self.coeffs)

    @staticmethod
    def const(c, K: int) -> "Series":
        return Series((Fraction(c),) + (Fraction(0),) * (K - 1))

    def __eq__(self, other):
        return isinstance(other, Series) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"Series({list(self.coeffs)})"

    def __add__(self, other) -> "Series":
        k = min(self.K, other.K)
        return Series([self.coeffs[i] + other.coeffs[i] for i in range(k)])

    def __sub__(self, other) -> "Series":
        k = min(self.K, other.K)
        return Series([self.coeffs[i] - other.coeffs[i] for i in range(k)])

    def __neg__(self) -> "Series":
        return Series([-c for c in self.coeffs])

    def scale(self, c) -> "Series":
        c = Fraction(c)
        return Series([c * x for x in self.coeffs])

    def __mul__(self, other) -> "Series":
        k = min(self.K, other.K)
        out = [Fraction(0)] * k
        for i in range(k):
            a = self.coeffs[i]
            if a == 0:
                continue
            for j in range(k - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return Series(out)

    def diff(self) -> "Series":
        if self.K < 2:
            raise ValueError("series precision exhausted by differentiation")
        return Series([(i + 1) * self.coeffs[i + 1] for i in range(self.K - 1)])

    def reciprocal(self) -> "Series":
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("reciprocal of a non-unit series")
        inv0 = 1 / c0
        out = [inv0] + [Fraction(0)] * (self.K - 1)
        for k in range(1, self.K):
            acc = Fraction(0)
            for j in range(1, k + 1):
                acc += self.coeffs[j] * out[k - j]
            out[k] = -inv0 * acc
        return Series(out)

    def __pow__(self, e: int) -> "Series":
        base = self if e >= 0 else self.reciprocal()
        e = abs(e)
        out = Series.const(1, base.K)
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def is_zero_through(self, k: int) -> bool:
        if k > self.K:
            raise ValueError("series not known to the requested precision")
        return all(c == 0 for c in self.coeffs[:k])


@dataclass
class SeriesPoint:
    """Assignment of base indeterminates to series; derivatives come from
    repeated d/dt.  Keys are ('y', j) or ('u', i, k)."""

    assignment: Mapping
    _cache: dict = field(default_factory=dict, repr=False)

    def value(self, v: Var) -> Series:
        got = self._cache.get(v)
        if got is not None:
            return got
        base = v[:-1]
        order = v[-1]
        if base not in self.assignment:
            raise KeyError(f"no series assigned to {format_var(base + (0,))}")
        s = self.assignment[base]
        for _ in range(order):
            s = s.diff()
        self._cache[v] = s
        return s


def series_eval(p: Poly, pt: SeriesPoint) -> Series:
    """Exact evaluation of a Laurent differential polynomial at a series
    point, to the precision the point supports."""
    ks = [s.K for s in pt.assignment.values()]
    if not ks:
        raise ValueError("empty series point")
    out = Series.const(0, min(ks))
    for m, c in p.terms.items():
        term = Series.const(c, out.K)
        for v, e in m:
            base = pt.value(v)
            if e < 0 and base.coeffs[0] == 0:
                raise ZeroDivisionError(
                    f"cannot invert {format_var(v)}: series value is not a unit"
                )
            term = term * base ** e
        out = out + term
    return out


# ----------------------------------------------------------------------
# Membership at the generic zero
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class MembershipReport:
    passed: bool
    trials: int
    K: int
    margin: int
    failed_trials: tuple = ()


def _random_series(rng, K: int, unit: bool) -> Series:
    first = 0
    while unit and first == 0:
        first = rng.randint(-_COEFF_RANGE, _COEFF_RANGE)
    if not unit:
        first = rng.randint(-_COEFF_RANGE, _COEFF_RANGE)
    rest = [rng.randint(-_COEFF_RANGE, _COEFF_RANGE) for _ in range(K - 1)]
    return Series([first] + rest)


def generic_zero_point(sys: DiffSystem, rng, K: int, blocks=None) -> SeriesPoint:
    """Random series point on the graph of the generic zero: unit series for
    each y_j, random series for u_{ik} (k >= 1), and
    u_{i0} = zeta_i = -sum_k u_{ik} M_{ik}(eta)/M_{i0}(eta)."""
    if blocks is None:
        blocks = range(sys.size)
    assignment = {}
    for j in range(1, sys.n + 1):
        assignment[("y", j)] = _random_series(rng, K, unit=True)
    eta = SeriesPoint(dict(assignment))
    for i in blocks:
        for k in range(1, len(sys.supports[i])):
            assignment[("u", i, k)] = _random_series(rng, K, unit=False)
    for i in blocks:
        zeta = Series.const(0, K)
        inv0 = series_eval(Poly.monomial(mono_pow(sys.supports[i][0], -1)), eta)
        for k in range(1, len(sys.supports[i])):
            mk = series_eval(Poly.monomial(sys.supports[i][k]), eta)
            zeta = zeta + assignment[("u", i, k)] * mk * inv0
        assignment[("u", i, 0)] = -zeta
    return SeriesPoint(assignment)


def membership_check(sr: Poly, sys: DiffSystem, K: int = 12, trials: int = 5,
                     seed: int = 0) -> MembershipReport:
    """Check that sr vanishes at random points of the generic zero locus."""
    if not sr:
        raise ValueError("membership check requires a nonzero polynomial")
    blocks = sorted(sr.u_blocks())
    h_max = max((int(sr.order_in(("u", i))) for i in blocks), default=0)
    s_max = max(sys.s_order(i) for i in range(sys.size))
    margin = h_max + s_max + 2
    if K - margin < 1:
        raise ValueError(
            f"truncation K={K} too small: need K >= {margin + 1} "
            f"(margin {margin})"
        )
    failed = []
    for t in range(trials):
        rng = random.Random(f"membership:{seed}:{t}")
        pt = generic_zero_point(sys, rng, K, blocks=blocks)
        val = series_eval(sr, pt)
        need = K - margin
        if val.K < need:
            raise ValueError(
                f"truncation K={K} too small: result precision {val.K} "
                f"below required {need}"
            )
        if not val.is_zero_through(need):
            failed.append(t)
    return MembershipReport(
        passed=not failed, trials=trials, K=K, margin=margin,
        failed_trials=tuple(failed),
    )


# ----------------------------------------------------------------------
# Per-block homogeneity via Euler operators
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class HomogeneityResult:
    block: int
    degree: Optional[int]
    passed: bool


def homogeneity_check(sr: Poly, block: int) -> HomogeneityResult:
    """Verify sr is homogeneous in u-block ``block``: the order-0 Euler
    operator returns an integer multiple m*sr and all higher-order Euler
    operators annihilate sr."""
    from .diffpoly import euler_apply

    if block not in sr.u_blocks():
        raise ValueError(f"block {block} does not occur in the polynomial")
    e0 = euler_apply(sr, block, 0)
    lead_m, lead_c = sr.leading()
    ratio = e0.terms.get(lead_m, Fraction(0)) / lead_c
    if ratio.denominator != 1 or ratio < 0 or e0 != sr * ratio:
        return HomogeneityResult(block, None, False)
    top = int(sr.order_in(("u", block)))
    for r in range(1, top + 1):
        if euler_apply(sr, block, r):
            return HomogeneityResult(block, int(ratio), False)
    return HomogeneityResult(block, int(ratio), True)


# ----------------------------------------------------------------------
# Exponent-span test and solution recovery
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SpanResult:
    j: int
    ok: bool
    # witness: {(i, k): integer t} with
    # sum t * (exponent(M_ik) - exponent(M_i0)) = e_j
    witness: Optional[Mapping] = None


def span_check(sys: DiffSystem) -> tuple:
    """For each j, decide whether the unit exponent vector of y_j lies in
    the integer span of the support-difference vectors alpha_ik - alpha_i0."""
    lattice = sorted(
        {v for s in sys.supports for m in s for v, _ in m}
        | {yvar(j, 0) for j in range(1, sys.n + 1)}
    )
    vpos = {v: r for r, v in enumerate(lattice)}
    cols = []
    labels = []
    for i in range(sys.size):
        base = dict(sys.supports[i][0])
        for k in range(1, len(sys.supports[i])):
            cur = dict(sys.supports[i][k])
            col = [0] * len(lattice)
            for v in set(base) | set(cur):
                col[vpos[v]] = cur.get(v, 0) - base.get(v, 0)
            cols.append(col)
            labels.append((i, k))
    a = [[cols[c][r] for c in range(len(cols))] for r in range(len(lattice))]
    out = []
    for j in range(1, sys.n + 1):
        b = [0] * len(lattice)
        b[vpos[yvar(j, 0)]] = 1
        x = solve_integer(a, b)
        if x is None:
            out.append(SpanResult(j, False))
        else:
            witness = {labels[c]: x[c] for c in range(len(labels)) if x[c]}
            out.append(SpanResult(j, True, witness))
    return tuple(out)


def eval_at_constants(p: Poly, uvals: Mapping, yvals: Mapping = None) -> Fraction:
    """Evaluate with u_{ik} -> uvals[(i,k)], y_j -> yvals[j]; derivatives of
    order >= 1 evaluate to 0 (constant assignments)."""
    yvals = yvals or {}
    total = Fraction(0)
    for m, c in p.terms.items():
        val = Fraction(c)
        for v, e in m:
            if v[-1] != 0:
                val = Fraction(0)
                break
            if v[0] == "u":
                base = Fraction(uvals[(v[1], v[2])])
            else:
                base = Fraction(yvals[v[1]])
            if base == 0 and e < 0:
                raise ZeroDivisionError(f"{format_var(v)} inverted at 0")
            val *= base ** e
        total += val
    return total


@dataclass(frozen=True)
class RecoveryResult:
    ok: bool
    point: Optional[Mapping] = None   # {j: Fraction}
    ratios: Optional[Mapping] = None  # {(i, k): Fraction} support-quotient values
    reason: str = ""


def recover_solution(sr: Poly, sys: DiffSystem, v: Mapping) -> RecoveryResult:
    """Recover the unique constant solution of the specialized system from
    ratios of partial derivatives of sr at the concrete coefficients ``v``
    (a mapping (i, k) -> rational).  Returns a structured refusal when a
    hypothesis fails."""
    spans = span_check(sys)
    bad = [s.j for s in spans if not s.ok]
    if bad:
        return RecoveryResult(
            ok=False,
            reason="exponent span condition fails for "
            + ", ".join(f"y{j}" for j in bad),
        )
    if eval_at_constants(sr, v) != 0:
        return RecoveryResult(ok=False, reason="sr does not vanish at v")

    blocks = sorted(sr.u_blocks())
    h = {i: int(sr.order_in(("u", i))) for i in blocks}
    partials = {}
    for i in range(sys.size):
        if i not in h:
            return RecoveryResult(
                ok=False,
                reason=f"coefficient block u_{i} is absent from the resultant; "
                "the partial-derivative hypothesis fails",
            )
        for k in range(len(sys.supports[i])):
            p = sr.partial(uvar(i, k, h[i]))
            val = eval_at_constants(p, v)
            if val == 0:
                return RecoveryResult(
                    ok=False,
                    reason=f"partial derivative of sr in u{i}_{k}^({h[i]}) "
                    "vanishes at v",
                )
            partials[(i, k)] = val

    ratios = {
        (i, k): partials[(i, k)] / partials[(i, 0)]
        for i in range(sys.size)
        for k in range(1, len(sys.supports[i]))
    }
    point = {}
    for s in spans:
        val = Fraction(1)
        for (i, k), t in s.witness.items():
            val *= ratios[(i, k)] ** t
        point[s.j] = val
    return RecoveryResult(ok=True, point=point, ratios=ratios)
