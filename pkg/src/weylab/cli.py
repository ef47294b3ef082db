"""Command-line surface: ``weylab <subcommand> ...``.

Exit codes: 0 success or true, 1 false or a negative result, 2 usage error,
3 internal inconsistency (a post-verification failed).  Diagnostics go to
stderr; their verbosity follows ``WEYLAB_LOG`` (quiet, info or debug).
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import re
import sys
from fractions import Fraction
from typing import Sequence, TextIO

from . import families, orbits, solver
from .commutant import (DegeneratePartner, NoAlgebraicRelation, NotCommuting, SpectralCurve,
                        bc_curve, find_commuting, find_partner)
from .parsing import OpSyntaxError, parse_op, print_op
from .weyl import commutator

OK, FALSE, USAGE, INTERNAL = 0, 1, 2, 3

log = logging.getLogger("weylab")

_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so that run_command can return a code.

    Arguments such as ``-1/2`` or ``-x*D`` are operands, not options.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-[\d.(xD∂ ]")

    def error(self, message):
        raise _Usage(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _curve_arg(text: str) -> SpectralCurve:
    """``c2,c1,c0`` (descending) for ``z^3 + c2 z^2 + c1 z + c0``, or a JSON curve."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return SpectralCurve.from_json(text)
        except (ValueError, KeyError, TypeError) as e:
            raise argparse.ArgumentTypeError(f"bad curve JSON: {e}") from None
    parts = [_rational(p) for p in text.split(",")]
    if len(parts) % 2 == 0:
        raise argparse.ArgumentTypeError("need an odd number 2g+1 of coefficients")
    return SpectralCurve(len(parts) // 2, tuple(reversed(parts)))


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="weylab", description="Commuting differential operators in the Weyl algebra.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("eval", help="print the normal form of an operator")
    s.add_argument("expr")

    s = sub.add_parser("commute", help="print [A, B]; exit 0 iff it vanishes")
    s.add_argument("a")
    s.add_argument("b")

    s = sub.add_parser("partner", help="basis of the commutant up to an order and degree; "
                                       "exit 1 if no element reaches the order")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--maxdeg", type=int, required=True)
    s.add_argument("l4")

    s = sub.add_parser("curve", help="spectral curve of a commuting pair (JSON)")
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("l4")
    s.add_argument("l6")

    s = sub.add_parser("family", help="build a named family member")
    fam = s.add_subparsers(dest="family", required=True, parser_class=_Parser)
    for name in ("dixmier", "sharp"):
        f = fam.add_parser(name)
        if name == "sharp":
            f.add_argument("--g", type=int, required=True)
        f.add_argument("--a3", type=_rational, default=Fraction(1))
        f.add_argument("--a2", type=_rational, default=Fraction(0))
        f.add_argument("--a1", type=_rational, default=Fraction(0))
        f.add_argument("--a0", type=_rational, default=Fraction(0))
        f.add_argument("--curve", action="store_true", help="also print the spectral curve")
    f = fam.add_parser("mokhov")
    f.add_argument("--g", type=int, default=1)
    f.add_argument("--r", type=int, default=1)
    f.add_argument("--a", type=_rational, required=True)
    f.add_argument("--b", type=_rational, default=Fraction(0))
    f.add_argument("--variant", choices=("substitution", "adjoint"), default="substitution")
    f.add_argument("--curve", action="store_true", help="also print the spectral curve")

    s = sub.add_parser("solve-vw", help="multi-start search for (V, W) on a genus-one curve")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--curve", type=_curve_arg, required=True, help="c2,c1,c0 or curve JSON")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--starts", type=int, default=1000)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--report", type=int, default=1, help="number of reports to print")

    s = sub.add_parser("recurrence-curve", help="cosh-family curve from the recurrence")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--alpha0", type=_rational, required=True)
    s.add_argument("--alpha1", type=_rational, required=True)

    s = sub.add_parser("aut", help="tame automorphisms")
    aut = s.add_subparsers(dest="aut_cmd", required=True, parser_class=_Parser)
    a = aut.add_parser("apply")
    a.add_argument("--word", required=True, help='e.g. "phi1:0,1,-1,0; phi3:x^2"')
    a.add_argument("expr")

    s = sub.add_parser("certificate", help="orbit-exclusion certificate")
    s.add_argument("--dega", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--r1", type=int, required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)
    return p


# -- handlers ------------------------------------------------------------------

def _eval(args, out):
    print(print_op(parse_op(args.expr)), file=out)
    return OK


def _commute(args, out):
    c = commutator(parse_op(args.a), parse_op(args.b))
    print(print_op(c), file=out)
    return OK if c.is_zero() else FALSE


def _partner(args, out):
    basis = find_commuting(parse_op(args.l4), args.order, args.maxdeg)
    for M in basis:
        print(print_op(M), file=out)
    log.info("commutant dimension %d", len(basis))
    return OK if any(M.order == args.order for M in basis) else FALSE


def _curve(args, out):
    curve, _ = bc_curve(parse_op(args.l4), parse_op(args.l6), args.genus)
    print(curve.to_json(), file=out)
    return OK


def _family(args, out):
    if args.family == "mokhov":
        L = families.mokhov_L4(args.g, args.r, args.a, args.b, args.variant)
        g = args.g
    else:
        g = 1 if args.family == "dixmier" else args.g
        L = families.sharp_pair(g, args.a3, args.a2, args.a1, args.a0).L4
    print(print_op(L), file=out)
    if args.curve:
        partner, _, _ = find_partner(L, 4 * g + 2)
        print(bc_curve(L, partner, g)[0].to_json(), file=out)
    return OK


def _solve_vw(args, out):
    if args.curve.genus != 1:
        raise _Usage("solve-vw targets genus-one curves")
    if args.m < 1:
        raise _Usage("--m must be at least 1")
    sys_ = solver.VWSystem(args.m, args.curve)
    reports = solver.multi_start(sys_, seed=args.seed, starts=args.starts, tol=args.tol,
                                 jobs=args.jobs)
    shown = [r.to_dict() for r in reports[: max(1, args.report)]]
    print(json.dumps(_json_safe(shown)), file=out)
    return OK if reports and reports[0].accepted else FALSE


def _recurrence_curve(args, out):
    print(families.cosh_curve(args.g, args.alpha0, args.alpha1).to_json(), file=out)
    return OK


def _aut(args, out):
    word = orbits.AutWord.parse(args.word)
    print(print_op(orbits.apply_aut(word, parse_op(args.expr))), file=out)
    return OK


def _certificate(args, out):
    if (args.n is None) != (args.m is None):
        raise _Usage("--n and --m go together")
    if args.n is not None:
        cert = orbits.orbit_excludes(
            orbits.OrbitQuery(args.dega, args.r, args.r1, args.n, args.m))
        print(json.dumps(cert.to_dict()), file=out)
        return OK if cert.check() else INTERNAL
    counts = {"i": 0, "ii": 0, "iii": 0}
    for n in range(51):
        for m in range(51):
            cert = orbits.orbit_excludes(orbits.OrbitQuery(args.dega, args.r, args.r1, n, m))
            if not cert.check():
                raise AssertionError(f"invalid certificate at n={n}, m={m}")
            counts[cert.branch] += 1
    print(json.dumps({"dega": args.dega, "r": args.r, "r1": args.r1,
                      "range": [0, 50], "branches": counts}), file=out)
    return OK


_HANDLERS = {"eval": _eval, "commute": _commute, "partner": _partner, "curve": _curve,
             "family": _family, "solve-vw": _solve_vw, "recurrence-curve": _recurrence_curve,
             "aut": _aut, "certificate": _certificate}

# domain refusals: the question has a definite negative answer
_NEGATIVE = (NotCommuting, NoAlgebraicRelation, DegeneratePartner, orbits.PreconditionUnmet)


def _configure_logging(err: TextIO) -> None:
    level = _LEVELS.get(os.environ.get("WEYLAB_LOG", "quiet").lower(), logging.ERROR)
    root = logging.getLogger("weylab")
    root.handlers[:] = [logging.StreamHandler(err)]
    root.setLevel(level)
    root.propagate = False


def run_command(argv: Sequence[str], out: TextIO | None = None,
                err: TextIO | None = None) -> int:
    """Run one subcommand, writing results to ``out``; returns the exit code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    _configure_logging(err)
    try:
        args = build_parser().parse_args(list(argv))
        return _HANDLERS[args.cmd](args, out)
    except _Usage as e:
        print(e, file=err)
        return USAGE
    except SystemExit as e:  # --help
        return OK if e.code in (None, 0) else USAGE
    except OpSyntaxError as e:
        print(f"syntax error: {e}\n  {e.text}\n  {' ' * e.position}^", file=err)
        return USAGE
    except AssertionError as e:
        print(f"internal inconsistency: {e}", file=err)
        return INTERNAL
    except _NEGATIVE as e:
        print(f"{type(e).__name__}: {e}", file=err)
        return FALSE
    except ValueError as e:
        print(f"error: {e}", file=err)
        return USAGE


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
