"""Command-line interface.

Exit codes: 0 on success, 2 for invalid input, 3 for an infeasible or empty
locus (the zero class is still printed, with a note on stderr).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import brillnoether as bn
from .exactalg import YPolynomial, format_rational, parse_rational
from .loci import (
    InfeasibleError,
    MotivicSolver,
    csm_resolution_class,
    determinant_class,
    geometry_from_descriptor,
    resolution_class,
    schubert_locus,
    triple_from_json,
)
from .omega import d_kappa, kappa_red, p_shapes
from .rings import GradedClass, theta_ring

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_EMPTY = 3


class _Result:
    """A class, a y-polynomial, a rational or an integer tuple, plus an
    optional note for stderr."""

    def __init__(self, value, note: Optional[str] = None, empty: bool = False):
        self.value = value
        self.note = note
        self.empty = empty


def _csv(text: str) -> List[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number, got {text!r}")


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"invalid JSON: {exc}")


def _evaluate(value, at: Optional[Fraction]):
    if at is None:
        return value
    if isinstance(value, GradedClass):
        return value.evaluate_y(at)
    if isinstance(value, YPolynomial):
        return value(at)
    return value


def _render(value, fmt: str) -> str:
    if fmt == "json":
        if isinstance(value, GradedClass):
            payload = {"class": value.to_json()}
        elif isinstance(value, YPolynomial):
            payload = {"polynomial": value.to_json(), "text": value.format()}
        elif isinstance(value, Fraction):
            payload = {"value": format_rational(value)}
        elif isinstance(value, int):
            payload = {"value": str(value)}
        else:
            payload = {"value": list(value)}
        return json.dumps(payload, sort_keys=True)
    if isinstance(value, (GradedClass, YPolynomial)):
        return value.format()
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, int):
        return str(value)
    return ",".join(str(x) for x in value)


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------

def _degeneracy(args) -> _Result:
    tau = triple_from_json(args.triple)
    geom = geometry_from_descriptor(args.geometry)
    if args.what == "fundamental":
        return _Result(determinant_class(tau, geom))
    if args.what == "resolution":
        return _Result(resolution_class(tau, geom))
    if args.what == "csm":
        return _Result(csm_resolution_class(tau, geom) if args.resolution_only
                       else MotivicSolver(geom, "csm").solve(tau))
    return _Result(MotivicSolver(geom).solve(tau))


def _bn(args) -> _Result:
    try:
        prob = bn.bn_problem(args.g, args.d, args.a, args.n)
    except InfeasibleError as exc:
        zero = theta_ring(args.g).zero() if args.g >= 1 else YPolynomial()
        value = zero if args.what == "class" else YPolynomial()
        return _Result(value, note=str(exc), empty=True)
    note = None
    if prob.rho > prob.g:
        note = (f"rho={prob.rho} exceeds g={prob.g}; by convention the zero class is returned")
    if args.what == "class":
        value = bn.ty_class_W(prob, args.n)
    elif args.what == "chi":
        value = bn.chi_y_W(prob, args.n)
    else:
        value = bn.chi_y_G(prob, args.n)
    return _Result(value, note=note, empty=note is not None)


def _schubert(args) -> _Result:
    tau, geom = schubert_locus(args.shape, args.k, args.n)
    path = "csm" if args.what == "csm" else "ty"
    cls = MotivicSolver(geom, path).solve(tau)
    if args.what == "chi":
        return _Result(cls.integrate())
    return _Result(cls)


def _omega(args) -> _Result:
    if args.what == "pshapes":
        if args.kappa is None:
            raise ValueError("pshapes needs --kappa")
        if any(x < 0 for x in args.kappa) or any(a > b for a, b in zip(args.kappa, args.kappa[1:])):
            raise ValueError("kappa must be a weakly increasing nonnegative sequence")
        return _Result(p_shapes(args.kappa))
    if args.lam is None or args.kappa is None:
        raise ValueError(f"{args.what} needs --lambda and --kappa")
    if args.what == "kred":
        return _Result(kappa_red(args.lam, args.kappa))
    return _Result(d_kappa(args.lam, args.kappa))


def _oracle(args) -> _Result:
    if args.what == "surface":
        cls, chi = bn.oracle_surface_classical(args.g, args.r, args.d, printed=args.printed)
        return _Result(chi if args.chi else cls)
    if args.a is None:
        raise ValueError(f"oracle {args.what} needs --a")
    if args.what == "pencil":
        cls, chi = bn.oracle_surface_pencil(args.g, args.d, args.a, printed=args.printed)
        return _Result(chi if args.chi else cls)
    return _Result(bn.oracle_curve(args.g, args.d, args.a))


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS,
                        help="output format (default text)")
    common.add_argument("--at", type=_rational, default=None, metavar="Y",
                        help="evaluate the result at this rational value of y")

    parser = argparse.ArgumentParser(
        prog="motivic-loci",
        description="Motivic Hirzebruch classes of degeneracy loci, exactly.")
    parser.add_argument("--format", choices=("text", "json"), default="text",
                        help="output format (default text)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("degeneracy", parents=[common], help="degeneracy locus of a triple")
    p.add_argument("what", choices=("ty", "csm", "resolution", "fundamental"))
    p.add_argument("--triple", type=_json_arg, required=True,
                   help='JSON {"k": [...], "p": [...], "q": [...]}')
    p.add_argument("--geometry", type=_json_arg, required=True,
                   help='JSON descriptor, e.g. {"kind": "grassmannian", "k": 2, "n": 5}')
    p.add_argument("--resolution-only", action="store_true",
                   help="with csm: the resolution class only, without strata")
    p.set_defaults(handler=_degeneracy)

    p = sub.add_parser("bn", parents=[common], help="pointed Brill-Noether loci")
    p.add_argument("what", choices=("class", "chi", "gchi"))
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--a", type=_csv, required=True, help="vanishing sequence, e.g. 0,1")
    p.add_argument("--n", type=int, default=None, help="normalization (default: minimal)")
    p.set_defaults(handler=_bn)

    p = sub.add_parser("schubert", parents=[common], help="Schubert varieties in Gr(k, n)")
    p.add_argument("what", choices=("class", "csm", "chi"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--shape", type=_csv, required=True, help="partition, e.g. 2,1")
    p.set_defaults(handler=_schubert)

    p = sub.add_parser("omega", parents=[common], help="shape combinatorics")
    p.add_argument("what", choices=("dk", "kred", "pshapes"))
    p.add_argument("--lambda", dest="lam", type=_csv, default=None)
    p.add_argument("--kappa", type=_csv, default=None)
    p.set_defaults(handler=_omega)

    p = sub.add_parser("oracle", parents=[common], help="closed-form values")
    p.add_argument("what", choices=("surface", "pencil", "curve"))
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, default=None, help="surface: rank parameter r")
    p.add_argument("--a", type=_csv, default=None, help="pencil/curve: vanishing sequence")
    p.add_argument("--chi", action="store_true", help="surface/pencil: print chi_y instead")
    p.add_argument("--printed", action="store_true",
                   help="surface/pencil: use the alternative theta^(g-1) coefficient")
    p.set_defaults(handler=_oracle)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if args.command == "oracle" and args.what == "surface" and args.r is None:
        print("error: oracle surface needs --r", file=err)
        return EXIT_INVALID
    try:
        result = args.handler(args)
    except (ValueError, TypeError, KeyError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    value = _evaluate(result.value, args.at)
    print(_render(value, args.format), file=out)
    if result.note:
        print(f"note: {result.note}", file=err)
    return EXIT_EMPTY if result.empty else EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
