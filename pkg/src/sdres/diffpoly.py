"""Exact arithmetic for (Laurent) differential polynomials.

Two families of differential indeterminates are supported:

* geometric variables ``y1, y2, ...`` (family ``'y'``), whose exponents may
  be negative (Laurent), and
* generic coefficients ``u<i>_<k>`` (family ``'u'``), one block ``u_i`` per
  polynomial of a system, which are never inverted.

A derivative variable is a plain tuple so it is hashable and orders
lexicographically:

* ``('u', i, k, order)`` for the ``order``-th derivative of ``u_{ik}``
* ``('y', j, order)`` for the ``order``-th derivative of ``y_j``

Because ``'u' < 'y'``, the global variable order is: all u-variables first
(by block ``i``, coefficient index ``k``, derivative order), then y-variables
(by index ``j``, derivative order).

A monomial is a sorted tuple of ``(var, exponent)`` pairs with nonzero
integer exponents; the empty tuple is the monomial 1.  A polynomial is an
immutable-by-convention map monomial -> Fraction with no zero coefficients.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

NEG_INF = float("-inf")

Var = tuple
Monomial = tuple  # tuple[tuple[Var, int], ...]

ONE: Monomial = ()

# Exponents are kept within machine range; anything larger signals corruption.
_EXP_LIMIT = 2**62


def uvar(i: int, k: int, order: int = 0) -> Var:
    if i < 0 or k < 0 or order < 0:
        raise ValueError("u-variable indices must be nonnegative")
    return ("u", i, k, order)


def yvar(j: int, order: int = 0) -> Var:
    if j < 1 or order < 0:
        raise ValueError("y-variable index must be >= 1, order >= 0")
    return ("y", j, order)


def deriv_of(v: Var) -> Var:
    """The derivative variable one order higher."""
    return v[:-1] + (v[-1] + 1,)


def var_order(v: Var) -> int:
    return v[-1]


def mono(pairs: Union[Mapping[Var, int], Iterable[tuple]]) -> Monomial:
    """Canonical monomial from a var -> exponent mapping (zeros dropped)."""
    if isinstance(pairs, Mapping):
        items = pairs.items()
    else:
        items = list(pairs)
    out = {}
    for v, e in items:
        if not isinstance(e, int):
            raise TypeError("exponents must be integers")
        if abs(e) > _EXP_LIMIT:
            raise OverflowError("exponent out of machine range")
        if e == 0:
            continue
        if v[0] == "u" and e < 0:
            raise ValueError("u-variables are never inverted")
        out[v] = out.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in out.items() if e != 0))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        ne = d.get(v, 0) + e
        if abs(ne) > _EXP_LIMIT:
            raise OverflowError("exponent out of machine range")
        if ne == 0:
            d.pop(v)
        else:
            d[v] = ne
    return tuple(sorted(d.items()))


def mono_pow(a: Monomial, e: int) -> Monomial:
    if e == 0:
        return ONE
    return tuple((v, x * e) for v, x in a)


def mono_degree(a: Monomial) -> int:
    return sum(e for _, e in a)


def mono_key(a: Monomial):
    """Graded-lexicographic sort key (total degree, then exponent listing)."""
    return (mono_degree(a), a)


class Poly:
    """A Laurent differential polynomial with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, Fraction]] = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    clean[m] = clean.get(m, Fraction(0)) + c
            clean = {m: c for m, c in clean.items() if c != 0}
        self.terms = clean

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return Poly()

    @staticmethod
    def const(c) -> "Poly":
        c = Fraction(c)
        return Poly({ONE: c}) if c else Poly()

    @staticmethod
    def var(v: Var, e: int = 1) -> "Poly":
        return Poly({mono({v: e}): Fraction(1)})

    @staticmethod
    def monomial(m: Monomial, c=1) -> "Poly":
        return Poly({m: Fraction(c)})

    # -- basics --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def sorted_terms(self) -> list:
        """Terms in descending canonical (graded-lex) order."""
        return sorted(self.terms.items(), key=lambda t: mono_key(t[0]), reverse=True)

    def leading(self) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.sorted_terms()[0]

    # -- ring operations ------------------------------------------------

    def __add__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            nc = out.get(m, Fraction(0)) + c
            if nc == 0:
                out.pop(m, None)
            else:
                out[m] = nc
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        p = Poly.__new__(Poly)
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return Poly()
            p = Poly.__new__(Poly)
            p.terms = {m: cc * c for m, cc in self.terms.items()}
            return p
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                nc = out.get(m, Fraction(0)) + c1 * c2
                if nc == 0:
                    out.pop(m, None)
                else:
                    out[m] = nc
        p = Poly.__new__(Poly)
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative powers only defined for monomials")
        out = Poly.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    # -- differential structure ------------------------------------------

    def diff(self) -> "Poly":
        """Formal derivative: linearity + product/power rule."""
        out = Poly()
        for m, c in self.terms.items():
            for idx, (v, e) in enumerate(m):
                rest = m[:idx] + m[idx + 1 :]
                dm = mono_mul(mono({v: e - 1, deriv_of(v): 1}), rest)
                out = out + Poly.monomial(dm, c * e)
        return out

    def partial(self, v: Var) -> "Poly":
        """Partial derivative with respect to a single derivative variable."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(v)
            if not e:
                continue
            if e == 1:
                d.pop(v)
            else:
                d[v] = e - 1
            nm = tuple(sorted(d.items()))
            out[nm] = out.get(nm, Fraction(0)) + c * e
        return Poly(out)

    # -- queries ----------------------------------------------------------

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def order_in(self, family) -> Union[int, float]:
        """Max derivative order of a base variable or a whole u-block.

        ``family`` is either a base variable without its order component —
        ``('y', j)`` or ``('u', i, k)`` — or a block ``('u', i)``.
        Returns -inf when absent.
        """
        best = NEG_INF
        for m in self.terms:
            for v, _ in m:
                if v[: len(family)] == tuple(family):
                    best = max(best, v[-1])
        return best

    def y_order(self) -> Union[int, float]:
        """Max derivative order over all y-variables (-inf if none)."""
        best = NEG_INF
        for m in self.terms:
            for v, _ in m:
                if v[0] == "y":
                    best = max(best, v[-1])
        return best

    def degree_y(self) -> Union[int, float]:
        """Max total degree in y-variables over the terms (-inf for 0)."""
        if not self.terms:
            return NEG_INF
        return max(sum(e for v, e in m if v[0] == "y") for m in self.terms)

    def degree_u(self) -> Union[int, float]:
        if not self.terms:
            return NEG_INF
        return max(sum(e for v, e in m if v[0] == "u") for m in self.terms)

    def block_degree(self, i: int) -> Union[int, float]:
        """Max total degree in the u_i block over the terms."""
        if not self.terms:
            return NEG_INF
        return max(
            sum(e for v, e in m if v[0] == "u" and v[1] == i) for m in self.terms
        )

    def u_blocks(self) -> set:
        return {v[1] for m in self.terms for v, _ in m if v[0] == "u"}

    def content(self) -> Fraction:
        """gcd of numerators over lcm of denominators (0 for the zero poly)."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = math.gcd(num, abs(c.numerator))
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def normalized(self) -> "Poly":
        """Primitive integer form with positive leading coefficient."""
        if not self.terms:
            return self
        p = self * (1 / self.content())
        if p.leading()[1] < 0:
            p = -p
        return p

    def __repr__(self):
        return f"Poly({format_poly(self)})"


def differentiate(p: Poly, times: int = 1) -> Poly:
    for _ in range(times):
        p = p.diff()
    return p


def norm_form(f: Poly) -> tuple:
    """Return ``(N, shift)``: the minimal monomial multiple of ``f`` that is an
    ordinary differential polynomial with coprime terms.

    ``shift`` is the monomial with exponent ``-min over terms`` for every
    variable appearing in ``f`` (absence counting as exponent 0), so that
    ``N = shift * f`` has all exponents >= 0 and monomial gcd 1.
    """
    if not f.terms:
        raise ValueError("norm form undefined for 0")
    mins = {}
    monos = list(f.terms)
    for v in {v for m in monos for v, _ in m}:
        mins[v] = min(dict(m).get(v, 0) for m in monos)
    shift = mono({v: -e for v, e in mins.items() if e != 0})
    n = Poly({mono_mul(shift, m): c for m, c in f.terms.items()})
    return n, shift


def effective_order(f: Poly) -> Union[int, float]:
    """Order of the norm form over the y-family."""
    n, _ = norm_form(f)
    return n.y_order()


def euler_apply(p: Poly, block: int, r: int) -> Poly:
    """The order-r differential Euler operator applied on u-block ``block``:

        sum_{k>=0} sum_j C(k+r, r) * u_{block,j}^{(k)} * dp/du_{block,j}^{(k+r)}
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    out = Poly()
    for v in sorted(p.variables()):
        if v[0] != "u" or v[1] != block:
            continue
        m = v[-1]  # this is k + r
        if m < r:
            continue
        k = m - r
        lower = uvar(block, v[2], k)
        out = out + Poly.var(lower) * p.partial(v) * math.comb(k + r, r)
    return out


# ----------------------------------------------------------------------
# Systems of generic Laurent differential polynomials
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class DiffSystem:
    """n+1 generic Laurent differential polynomials P_i = sum_k u_{ik} M_{ik}.

    ``supports[i]`` lists the distinct Laurent monomials M_{i0}, ..., M_{il_i}
    (y-family only); generic coefficients u_{ik} are attached automatically.
    ``overrides`` optionally pins concrete rational values for some u_{ik}
    (used by the solution-recovery checks, not by the generic solver).
    """

    n: int
    supports: tuple
    overrides: Mapping = field(default_factory=dict)

    def __post_init__(self):
        sup = tuple(tuple(s) for s in self.supports)
        object.__setattr__(self, "supports", sup)
        for i, s in enumerate(sup):
            if len(s) < 2:
                raise ValueError(f"P{i} needs at least two monomials (l_i >= 1)")
            if len(set(s)) != len(s):
                raise ValueError(f"P{i} has duplicate monomials in its support")
            for m in s:
                for v, _ in m:
                    if v[0] != "y":
                        raise ValueError("supports must use y-variables only")
                    if v[1] > self.n:
                        raise ValueError(f"variable index {v[1]} exceeds n={self.n}")
        object.__setattr__(self, "overrides", dict(self.overrides))

    @property
    def size(self) -> int:
        return len(self.supports)

    def l(self, i: int) -> int:
        return len(self.supports[i]) - 1

    def s_order(self, i: int) -> int:
        """Order s_i of P_i (max derivative order in its support; 0 if none)."""
        best = 0
        for m in self.supports[i]:
            for v, _ in m:
                best = max(best, v[-1])
        return best

    def poly(self, i: int) -> Poly:
        terms = {}
        for k, m in enumerate(self.supports[i]):
            terms[mono_mul(mono({uvar(i, k): 1}), m)] = Fraction(1)
        return Poly(terms)

    def quotient_monomial(self, i: int, k: int) -> Monomial:
        """The Laurent monomial M_{ik} / M_{i0}."""
        return mono_mul(self.supports[i][k], mono_pow(self.supports[i][0], -1))


# ----------------------------------------------------------------------
# Canonical text form (round-trips through parse_poly)
# ----------------------------------------------------------------------


def format_var(v: Var) -> str:
    if v[0] == "y":
        name = f"y{v[1]}"
    else:
        name = f"u{v[1]}_{v[2]}"
    order = v[-1]
    if order == 0:
        return name
    if order <= 3:
        return name + "'" * order
    return f"{name}^({order})"


def format_mono(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    for v, e in m:
        s = format_var(v)
        if e != 1:
            s += f"^{e}"
        parts.append(s)
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    out = []
    for m, c in p.sorted_terms():
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if m == ONE:
            body = str(c)
        elif c == 1:
            body = format_mono(m)
        else:
            body = f"{c}*{format_mono(m)}"
        out.append((sign, body))
    first_sign, first_body = out[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


_VAR_RE = re.compile(
    r"(?:y(?P<yj>\d+)|u(?P<ui>\d+)_(?P<uk>\d+))"
    r"(?P<primes>'*)(?:\^\((?P<dorder>\d+)\))?"
)


def parse_mono(text: str) -> Monomial:
    """Parse a single monomial: products of y<j>/u<i>_<k> with ' or ^(k)
    derivative marks and optional integer exponents ``^e`` (negative allowed).
    ``1`` is the unit monomial.
    """
    text = text.strip()
    if text == "1":
        return ONE
    exps = {}
    for factor in text.split("*"):
        factor = factor.strip()
        if not factor:
            raise ValueError("empty factor in monomial")
        m = _VAR_RE.match(factor)
        if not m:
            raise ValueError(f"malformed variable in {factor!r}")
        if m.group("primes") and m.group("dorder"):
            raise ValueError(f"both ' and ^(k) derivative marks in {factor!r}")
        order = len(m.group("primes")) or int(m.group("dorder") or 0)
        if m.group("yj") is not None:
            v = yvar(int(m.group("yj")), order)
        else:
            v = uvar(int(m.group("ui")), int(m.group("uk")), order)
        rest = factor[m.end() :]
        e = 1
        if rest:
            if not rest.startswith("^"):
                raise ValueError(f"trailing garbage in {factor!r}")
            e = int(rest[1:])
        exps[v] = exps.get(v, 0) + e
    return mono(exps)


def parse_poly(text: str) -> Poly:
    """Parse the output of format_poly (sums of rational-coefficient monomials)."""
    text = text.strip()
    if text in ("0", ""):
        return Poly()
    # split on top-level +/-; a '-' directly after '^' belongs to a negative
    # exponent, not to the next term
    tokens = re.findall(r"[+-]|(?:\^-?\d+|[^+-])+", text.replace(" ", ""))
    out = Poly()
    sign = 1
    for tok in tokens:
        if tok == "+":
            sign = 1
            continue
        if tok == "-":
            sign = -1
            continue
        # token is coeff*mono or mono or coeff; careful: '^(k' never splits
        parts = tok.split("*")
        coeff = Fraction(1)
        idx = 0
        if re.fullmatch(r"\d+(/\d+)?", parts[0]):
            coeff = Fraction(parts[0])
            idx = 1
        mono_text = "*".join(parts[idx:]) or "1"
        out = out + Poly.monomial(parse_mono(mono_text), sign * coeff)
    return out
