"""Essentiality of systems of generic Laurent differential polynomials.

A system P_0..P_n (supports A_i, generic coefficients u_ik) is Laurent
differentially essential iff some selection of quotient monomials
M_{0,k_0}/M_{0,0}, ..., M_{n,k_n}/M_{n,0} has differential transcendence
degree n; equivalently the generic support matrix M_P (row i is
w_i = sum_k u_ik * beta_ik with beta_ik the support vector of
M_ik/M_i0) has rank n.  The rank of M_P equals the maximum over
selections of the rank of the selection's support matrix.

The rank-essential subset is the unique T with card(T) - rank(M_{P_T}) = 1
whose proper subsets are all of full rank; it is the set of polynomials
whose coefficients actually appear in the sparse differential resultant.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import linalg
from .diffpoly import DiffSystem, mono_mul, mono_pow
from .support import dtrdeg_monomials

DEFAULT_BUDGET = 10_000
_RAND_RANGE = 1 << 16


@dataclass(frozen=True)
class EssentialReport:
    essential: bool
    rank: int
    mode: str  # "certified" | "randomized"
    witness: Optional[tuple] = None  # selection (k_0..k_n), k_i >= 1
    inconclusive: bool = False
    message: str = ""


@dataclass(frozen=True)
class RankEssentialSet:
    subset: tuple


def _support_vector_eval(monomial, n, xvals):
    """Evaluate the support vector of a y-monomial at x_j = xvals[j-1]."""
    out = [Fraction(0)] * n
    for v, e in monomial:
        out[v[1] - 1] += e * xvals[v[1] - 1] ** v[-1]
    return out


def _random_rank(sys: DiffSystem, indices, seed: int) -> int:
    """Exact rank of M_P rows `indices` after substituting random integers
    for all u_ik and x_j."""
    rng = random.Random(seed)
    xvals = [Fraction(rng.randint(-_RAND_RANGE, _RAND_RANGE)) for _ in range(sys.n)]
    rows = []
    for i in indices:
        acc = [Fraction(0)] * sys.n
        for k in range(1, len(sys.supports[i])):
            u = rng.randint(-_RAND_RANGE, _RAND_RANGE)
            q = _support_vector_eval(sys.quotient_monomial(i, k), sys.n, xvals)
            acc = [a + u * b for a, b in zip(acc, q)]
        rows.append(acc)
    return linalg.rank_exact(rows)


def generic_rank(sys: DiffSystem, indices=None, seeds=(1, 2, 3)) -> int:
    """Randomized rank of the generic support matrix (max over seeds)."""
    if indices is None:
        indices = range(sys.size)
    return max(_random_rank(sys, tuple(indices), s) for s in seeds)


def _selection_scan(sys: DiffSystem, indices, budget: int):
    """Exhaustive scan of monomial selections for rows `indices`.

    Returns (max rank over selections, witness achieving it, exhausted)
    where `exhausted` says whether every selection was examined."""
    indices = tuple(indices)
    best = 0
    witness = None
    count = 0
    ranges = [range(1, len(sys.supports[i])) for i in indices]
    target = min(len(indices), sys.n)
    for sel in itertools.product(*ranges):
        count += 1
        if count > budget:
            return best, witness, False
        monomials = [
            sys.quotient_monomial(i, k) for i, k in zip(indices, sel)
        ]
        r = dtrdeg_monomials(monomials, sys.n)
        if r > best:
            best = r
            witness = sel
            if best == target:
                return best, witness, True
    return best, witness, True


def subset_rank(sys: DiffSystem, indices, budget: int = DEFAULT_BUDGET,
                certify: bool = True) -> int:
    """rank(M_{P_T}) for T = indices: randomized lower bound, confirmed by
    the certified selection scan when it fits in the budget."""
    indices = tuple(indices)
    r_rand = generic_rank(sys, indices)
    if r_rand == min(len(indices), sys.n):
        if not certify:
            return r_rand
    if certify:
        r_cert, _, exhausted = _selection_scan(sys, indices, budget)
        if exhausted:
            if r_cert < r_rand:
                raise AssertionError(
                    "certified selection rank below randomized lower bound"
                )
            return r_cert
        return max(r_rand, r_cert)
    return r_rand


def is_essential(sys: DiffSystem, mode: str = "certified",
                 budget: int = DEFAULT_BUDGET, seeds=(1, 2, 3)) -> EssentialReport:
    """Decide Laurent differential essentiality (rank(M_P) = n)."""
    all_idx = tuple(range(sys.size))
    ranks = [_random_rank(sys, all_idx, s) for s in seeds]
    if len(set(ranks)) != 1 and mode == "randomized":
        mode = "certified"  # disagreement escalates
    r_rand = max(ranks)
    if mode == "randomized":
        return EssentialReport(
            essential=(r_rand == sys.n), rank=r_rand, mode="randomized"
        )
    # certified: find a witness selection of full differential
    # transcendence degree, or exhaust all selections
    r_cert, witness, exhausted = _selection_scan(sys, all_idx, budget)
    if r_cert == sys.n:
        return EssentialReport(
            essential=True, rank=sys.n, mode="certified", witness=witness
        )
    if exhausted:
        return EssentialReport(essential=False, rank=r_cert, mode="certified")
    return EssentialReport(
        essential=(r_rand == sys.n),
        rank=r_rand,
        mode="certified",
        inconclusive=True,
        message="selection budget exceeded; result from randomized rank only"
        " — rerun with a larger budget or use randomized mode",
    )


def rank_essential_subset(sys: DiffSystem, budget: int = DEFAULT_BUDGET) -> RankEssentialSet:
    """The unique subset T with card(T) - rank(M_{P_T}) = 1 and all proper
    subsets of full rank.  Requires an essential system."""
    if generic_rank(sys) != sys.n:
        raise ValueError("no rank-essential set: system not essential")
    for card in range(1, sys.size + 1):
        for subset in itertools.combinations(range(sys.size), card):
            r = subset_rank(sys, subset, budget=budget)
            if card - r == 1:
                # proper subsets are full rank: all smaller subsets were
                # already seen with card = rank in this ascending scan
                return RankEssentialSet(subset)
    raise AssertionError("essential system without a rank-essential subset")
