"""Command-line interface: parse system descriptions, dispatch commands,
and emit canonical structured result documents.

Exit codes: 0 success, 1 usage/input error, 2 mathematical refusal or a
failed verification.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys as _sys
import time
from fractions import Fraction

from . import __version__
from .bounds import (
    bezout_block_bound,
    degree_bound,
    jacobi_number,
    order_bounds,
    order_matrix,
)
from .diffpoly import NEG_INF, Poly, format_mono, format_poly, parse_poly
from .essential import is_essential, rank_essential_subset
from .resultant import ResourceError, SearchOptions, dresultant, sdresultant
from .support import dtrdeg_monomials, rdm, support_matrix
from .sysfile import SystemParseError, parse_matrix, parse_system_file
from .verify import homogeneity_check, membership_check, recover_solution, span_check

COMMANDS = (
    "tshape",
    "dtrdeg",
    "essential",
    "rank-essential",
    "jacobi",
    "bounds",
    "resultant",
    "dresultant",
    "verify",
    "recover",
)


class MathRefusal(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors exit with code 1
    def error(self, message):
        self.print_usage(_sys.stderr)
        raise SystemExit(1)


# ----------------------------------------------------------------------
# Serialization
# ----------------------------------------------------------------------


def _frac(x) -> str:
    return str(Fraction(x))


def _num(x):
    return "-inf" if x == NEG_INF else int(x)

def _poly_doc(p: Poly):
    return {
        "terms": [[_frac(c), format_mono(m)] for m, c in p.sorted_terms()],
        "text": format_poly(p),
    }


def _entry_doc(entry):
    return [_frac(c) for c in entry]


def _matrix_doc(mat):
    return {
        "rows": [
            "*".join(
                f"y{v[1]}" + ("" if v[-1] == 0 else f"^({v[-1]})")
                + (f"^{e}" if e != 1 else "")
                for v, e in label
            )
            or "1"
            for label in mat.rows
        ],
        "cols": [f"x{j}" for j in mat.cols],
        "entries": [[_entry_doc(e) for e in row] for row in mat.entries],
    }


def _cert_doc(cert):
    return {
        "sr": _poly_doc(cert.sr),
        "h": [None if x is None else int(x) for x in cert.h],
        "d": cert.d,
        "block_degrees": [x if x is None else int(x) for x in cert.block_degrees],
        "lhs_monomial": format_mono(cert.lhs_monomial),
        "cofactors": {
            f"H_{i}_{j}": _poly_doc(p)
            for (i, j), p in sorted(cert.cofactors.items())
        },
        "warnings": list(cert.warnings),
    }


# ----------------------------------------------------------------------
# Command handlers
# ----------------------------------------------------------------------


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _need_system(sf):
    if sf.system is None:
        raise SystemParseError("this command needs polynomial supports", 1, 1)
    return sf.system


def _need_monomials(sf):
    if sf.monomial_set is not None:
        return sf.monomial_set
    if sf.system is not None:
        # fall back to the union of the supports
        out = []
        for s in sf.system.supports:
            for m in s:
                if m not in out:
                    out.append(m)
        return tuple(out)
    raise SystemParseError("this command needs a B: monomial set", 1, 1)


def _options(args) -> SearchOptions:
    return SearchOptions(
        max_order=args.max_order,
        max_degree=args.max_degree,
        cofactor_start=args.cofactor_start,
        budget=args.budget,
        seed=args.seed,
        truncation=args.filter_truncation,
        threads=args.threads,
        certify=args.certify,
    )


def _verification_doc(sr, system, K, seed):
    mem = membership_check(sr, system, K=K, trials=5, seed=seed)
    homog = []
    for i in sorted(sr.u_blocks()):
        r = homogeneity_check(sr, i)
        homog.append({"block": i, "degree": r.degree, "passed": r.passed})
    return {
        "membership": {
            "passed": mem.passed,
            "trials": mem.trials,
            "K": mem.K,
            "margin": mem.margin,
            "failed_trials": list(mem.failed_trials),
        },
        "homogeneity": homog,
    }, mem.passed and all(h["passed"] for h in homog)


def _dispatch(args):
    cmd = args.command
    if cmd == "jacobi":
        mat = parse_matrix(_read(args.file))
        js = [
            jacobi_number([r for t, r in enumerate(mat) if t != i])
            for i in range(len(mat))
        ]
        return {"J": [_num(j) for j in js]}

    sf = parse_system_file(_read(args.file))

    if cmd == "tshape":
        monos = _need_monomials(sf)
        res = rdm(support_matrix(monos, sf.n))
        return {
            "index": list(res.index),
            "rank": res.rank,
            "matrix": _matrix_doc(res.matrix),
        }
    if cmd == "dtrdeg":
        monos = _need_monomials(sf)
        return {"dtrdeg": dtrdeg_monomials(monos, sf.n)}

    system = _need_system(sf)

    if cmd == "essential":
        rep = is_essential(
            system,
            mode="certified" if args.certify else "randomized",
            budget=args.budget,
        )
        return {
            "essential": rep.essential,
            "rank": rep.rank,
            "mode": rep.mode,
            "witness": list(rep.witness) if rep.witness else None,
            "inconclusive": rep.inconclusive,
            "message": rep.message,
        }
    if cmd == "rank-essential":
        try:
            sub = rank_essential_subset(system, budget=args.budget)
        except ValueError as exc:
            raise MathRefusal(str(exc)) from None
        return {"subset": list(sub.subset)}
    if cmd == "bounds":
        try:
            rep = order_bounds(system, budget=args.budget)
        except ValueError as exc:
            raise MathRefusal(str(exc)) from None
        h_eff = [
            None if rep.effective[i] == NEG_INF else int(rep.effective[i])
            for i in range(system.size)
        ]
        out = {
            "order_matrix": [[_num(x) for x in row] for row in rep.order_matrix],
            "jacobi": [_num(x) for x in rep.jacobi],
            "gamma": rep.gamma,
            "modified": [_num(x) for x in rep.modified],
            "alt_L": list(rep.alt_L),
            "alt_E": list(rep.alt_E),
            "subset": list(rep.subset),
            "effective": [_num(x) for x in rep.effective],
            "degree_bound_at_effective": degree_bound(system, h_eff),
        }
        try:
            out["bezout_blocks"] = [
                _frac(bezout_block_bound(system, i)) for i in range(system.size)
            ]
        except ValueError:
            out["bezout_blocks"] = None
        return out
    if cmd in ("resultant", "dresultant"):
        solver = sdresultant if cmd == "resultant" else dresultant
        try:
            cert = solver(system, _options(args))
        except ValueError as exc:
            raise MathRefusal(str(exc)) from None
        doc = {"certificate": _cert_doc(cert), "identity_checked": True}
        if args.verify:
            vdoc, ok = _verification_doc(
                cert.sr, system, args.truncation, args.seed
            )
            doc["verification"] = vdoc
            if not ok:
                raise MathRefusal("verification failed on the computed resultant")
        return doc
    if cmd == "verify":
        sr = parse_poly(_read(args.sr))
        vdoc, ok = _verification_doc(sr, system, args.truncation, args.seed)
        spans = span_check(system)
        vdoc["span"] = [
            {
                "j": s.j,
                "ok": s.ok,
                "witness": (
                    {f"P{i},{k}": t for (i, k), t in sorted(s.witness.items())}
                    if s.witness
                    else None
                ),
            }
            for s in spans
        ]
        if not ok:
            raise MathRefusal("verification failed")
        return vdoc
    if cmd == "recover":
        sr = parse_poly(_read(args.sr))
        res = recover_solution(sr, system, system.overrides)
        if not res.ok:
            raise MathRefusal(res.reason)
        return {
            "point": {f"y{j}": _frac(v) for j, v in sorted(res.point.items())},
            "ratios": {
                f"P{i},{k}": _frac(v) for (i, k), v in sorted(res.ratios.items())
            },
        }
    raise SystemExit(1)


# ----------------------------------------------------------------------
# Entry points
# ----------------------------------------------------------------------


def _build_parser() -> _Parser:
    p = _Parser(prog="sdres", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd, prog=f"sdres {cmd}")
        sp.add_argument("file", help="system or matrix description file")
        sp.add_argument("--certify", action="store_true", default=True)
        sp.add_argument(
            "--randomized", dest="certify", action="store_false",
            help="allow randomized essentiality decisions",
        )
        sp.add_argument("--max-order", type=int, default=None)
        sp.add_argument("--max-degree", type=int, default=None)
        sp.add_argument("--cofactor-start", type=int, default=None)
        sp.add_argument("--budget", type=int, default=10_000)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument(
            "--truncation", type=int, default=12,
            help="series truncation K for verification",
        )
        sp.add_argument(
            "--filter-truncation", type=int, default=10,
            help="valid series coefficients in the search filter",
        )
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--format", choices=("json", "text"), default="json")
        if cmd in ("resultant", "dresultant"):
            sp.add_argument("--verify", action="store_true")
        if cmd in ("verify", "recover"):
            sp.add_argument("--sr", required=True, help="resultant polynomial file")
    return p


def _render_text(doc, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for k in sorted(doc):
            v = doc[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(doc, list):
        for v in doc:
            if isinstance(v, (dict, list)):
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{doc}")
    return "\n".join(lines)


def run(argv) -> tuple:
    """Execute a command line; returns (exit_code, result document)."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    start = time.monotonic()
    digest = None
    try:
        digest = hashlib.sha256(_read(args.file).encode("utf-8")).hexdigest()
        outputs = _dispatch(args)
        code = 0
        error = None
    except MathRefusal as exc:
        outputs, code, error = None, 2, str(exc)
    except (SystemParseError, ValueError, OSError) as exc:
        outputs, code, error = None, 1, str(exc)
    except ResourceError as exc:
        outputs, code, error = None, 2, str(exc)
    doc = {
        "command": args.command,
        "version": __version__,
        "seed": args.seed,
        "inputs_digest": digest,
        "outputs": outputs,
        "error": error,
        "timing_seconds": round(time.monotonic() - start, 6),
    }
    doc["_format"] = args.format
    return code, doc


def main(argv=None) -> int:
    if argv is None:
        argv = _sys.argv[1:]
    code, doc = run(argv)
    fmt = doc.pop("_format", "json")
    if fmt == "json":
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print(_render_text(doc))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
