"""Textual description of systems of generic Laurent differential
polynomials, and the canonical printer it round-trips through.

Grammar (statements separated by ';', '#' starts a comment):

    vars y1 y2 ... yn
    P0: <monomial>, <monomial>, ...
    P1: ...
    B: <monomial>, ...            # a bare monomial set (tshape/dtrdeg input)
    coeff P0 1 = -3/2             # optional concrete coefficient u_{0,1}

Monomials use ``y<j>`` with repeated ``'`` or ``^(k)`` derivative marks,
integer exponents ``^e`` (negative allowed), ``*`` for products, and ``1``
for the unit monomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .diffpoly import DiffSystem, format_mono, parse_mono


class SystemParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class SystemFile:
    """Parsed contents of a system description."""

    system: Optional[DiffSystem]      # present when P-lines were given
    n: int
    monomial_set: Optional[tuple]     # present when a B-line was given
    overrides: dict


def _line_col(text: str, pos: int):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _strip_comments(text: str) -> str:
    out = []
    for ln in text.split("\n"):
        if "#" in ln:
            ln = ln[: ln.index("#")] + " " * (len(ln) - ln.index("#"))
        out.append(ln)
    return "\n".join(out)


def parse_system_file(text: str) -> SystemFile:
    clean = _strip_comments(text)
    n = None
    supports = {}
    monomial_set = None
    overrides = {}

    pos = 0
    while pos < len(clean):
        end = clean.find(";", pos)
        if end == -1:
            stmt = clean[pos:]
            end = len(clean)
        else:
            stmt = clean[pos:end]
        stmt_start = pos + (len(stmt) - len(stmt.lstrip()))
        stmt = stmt.strip()
        pos = end + 1
        if not stmt:
            continue
        line, col = _line_col(clean, stmt_start)

        if stmt.startswith("vars"):
            names = stmt[4:].split()
            if not names:
                raise SystemParseError("empty vars declaration", line, col)
            idx = []
            for name in names:
                if not name.startswith("y") or not name[1:].isdigit():
                    raise SystemParseError(
                        f"unknown variable {name!r}", line, col
                    )
                idx.append(int(name[1:]))
            if sorted(idx) != list(range(1, len(idx) + 1)):
                raise SystemParseError(
                    "variables must be y1..yn without gaps", line, col
                )
            n = len(idx)
            continue

        if stmt.startswith("coeff"):
            parts = stmt[5:].split("=")
            if len(parts) != 2:
                raise SystemParseError("malformed coefficient line", line, col)
            head = parts[0].split()
            if len(head) != 2 or not head[0].startswith("P"):
                raise SystemParseError("malformed coefficient line", line, col)
            try:
                i = int(head[0][1:])
                k = int(head[1])
                val = Fraction(parts[1].strip())
            except ValueError as exc:
                raise SystemParseError(str(exc), line, col) from None
            overrides[(i, k)] = val
            continue

        if ":" not in stmt:
            raise SystemParseError(f"unrecognized statement {stmt!r}", line, col)
        head, _, body = stmt.partition(":")
        head = head.strip()
        monos = []
        for piece in body.split(","):
            piece = piece.strip()
            if not piece:
                raise SystemParseError("empty monomial", line, col)
            try:
                m = parse_mono(piece)
            except ValueError as exc:
                raise SystemParseError(str(exc), line, col) from None
            for v, _e in m:
                if v[0] != "y":
                    raise SystemParseError(
                        "supports must use y-variables only", line, col
                    )
            if m in monos:
                raise SystemParseError(
                    f"duplicate monomial {format_mono(m)!r}", line, col
                )
            monos.append(m)

        if head == "B":
            monomial_set = tuple(monos)
        elif head.startswith("P") and head[1:].isdigit():
            i = int(head[1:])
            if i in supports:
                raise SystemParseError(f"duplicate P{i}", line, col)
            supports[i] = tuple(monos)
        else:
            raise SystemParseError(f"unrecognized statement head {head!r}", line, col)

    if n is None:
        raise SystemParseError("missing vars declaration", 1, 1)

    system = None
    if supports:
        if sorted(supports) != list(range(len(supports))):
            raise SystemParseError(
                "polynomials must be P0..Pn without gaps", 1, 1
            )
        try:
            system = DiffSystem(
                n=n,
                supports=tuple(supports[i] for i in range(len(supports))),
                overrides=overrides,
            )
        except ValueError as exc:
            raise SystemParseError(str(exc), 1, 1) from None
    return SystemFile(
        system=system, n=n, monomial_set=monomial_set, overrides=overrides
    )


def parse_system(text: str) -> DiffSystem:
    """Parse a full system description to a DiffSystem."""
    sf = parse_system_file(text)
    if sf.system is None:
        raise SystemParseError("no polynomial supports given", 1, 1)
    return sf.system


def format_system(sys: DiffSystem) -> str:
    """Canonical printer (parse_system round-trips through it)."""
    parts = ["vars " + " ".join(f"y{j}" for j in range(1, sys.n + 1)) + ";"]
    for i in range(sys.size):
        body = ", ".join(format_mono(m) for m in sys.supports[i])
        parts.append(f"P{i}: {body};")
    for (i, k), val in sorted(sys.overrides.items()):
        parts.append(f"coeff P{i} {k} = {val};")
    return "\n".join(parts) + "\n"


def parse_matrix(text: str):
    """Parse a whitespace-separated matrix with ``-inf`` entries allowed."""
    rows = []
    for ln in _strip_comments(text).split("\n"):
        items = ln.split()
        if not items:
            continue
        row = []
        for it in items:
            if it == "-inf":
                row.append(float("-inf"))
            else:
                try:
                    row.append(int(it))
                except ValueError:
                    raise ValueError(f"bad matrix entry {it!r}") from None
        rows.append(row)
    if not rows:
        raise ValueError("empty matrix")
    if len({len(r) for r in rows}) != 1:
        raise ValueError("ragged matrix rows")
    return rows
