"""Command-line entry point: derive, verify, sample, props."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .catalog import EQUATIONS, EquationInstance
from .catalog_verify import (
    Constants, Grid, default_constants, default_grid, derive, make_solution, residual,
    rows_to_csv, sample, tolerance_tier,
)
from .cfd_num import property_suite
from .surd_solve import SolveError


def _rational(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _params(text):
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise argparse.ArgumentTypeError(f"expected k=v, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = _rational(v)
    return out


def _instance(args, aux_constant=None):
    k = aux_constant
    if k is None:
        k = args.b if getattr(args, "b", None) is not None else getattr(args, "c", None)
    return EquationInstance.build(args.eq, args.params, omega=args.omega, aux_constant=k)


def _add_equation_args(p, with_aux=True):
    p.add_argument("--eq", required=True, choices=sorted(EQUATIONS))
    p.add_argument("--params", type=_params, default={}, help="k=v,... with rational values")
    p.add_argument("--omega", type=_rational, help="wave speed (KdV-Burgers, RLW-Burgers only)")
    if with_aux:
        aux = p.add_mutually_exclusive_group()
        aux.add_argument("--b", type=_rational, help="constant of auxiliary equation A")
        aux.add_argument("--c", type=int, choices=(2, -2), help="constant of auxiliary equation B")


def _add_solution_args(p):
    _add_equation_args(p)
    p.add_argument("--family", required=True, help="explicit solution id, e.g. u2 or u3-")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--grid", type=Grid.parse, help="x0:x1:n,t0:t1:m")
    p.add_argument("--c1", type=float)
    p.add_argument("--g3", type=float)
    p.add_argument("--c2", type=float)
    p.add_argument("--c3", type=float)
    p.add_argument("--eps", type=int, choices=(1, -1))


def _family_id(spec, name):
    ids = {f.index for f in spec.families}
    if name in ids:
        return name
    if name + "+" in ids:
        return name + "+"
    raise ValueError(f"{spec.eq_id} has no family {name!r}; choose from {', '.join(sorted(ids))}")


def _solution(args):
    inst = _instance(args)
    index = _family_id(inst.spec, args.family)
    fam = inst.spec.family(index)
    if fam.aux_constant is not None and args.c is not None and args.c != fam.aux_constant:
        raise ValueError(f"{index} needs c = {fam.aux_constant}")
    base = default_constants(fam.aux_family)
    given = {k: getattr(args, k) for k in ("c1", "g3", "c2", "c3", "eps") if getattr(args, k) is not None}
    consts = Constants(**{**base.__dict__, **given})
    sol = make_solution(inst, index, consts, alpha=args.alpha, beta=args.beta)
    return inst, sol, args.grid or default_grid(sol)


def cmd_derive(args):
    report = derive(_instance(args))
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(f"ODE: {report.ode} = 0")
        for (i, j), eq in zip(report.system.keys, report.system.equations):
            print(f"  F^{i} F'^{j}: {eq.to_text()} = 0")
        for b in report.branches:
            print("  branch: " + ", ".join(f"{k} = {v}" for k, v in b.values.items()))
        print(f"catalog: {report.verdict}")
    return 0 if report.matches else 1


def cmd_verify(args):
    inst, sol, grid = _solution(args)
    rep = residual(inst, sol, grid)
    tol = tolerance_tier(inst.spec.eq_id, sol.alpha, sol.beta)
    out = rep.to_json()
    out.update(equation=inst.spec.eq_id, family=sol.index, alpha=sol.alpha, beta=sol.beta,
               tolerance=tol, passed=rep.passes(tol))
    print(json.dumps(out, indent=2))
    return 0 if out["passed"] else 1


def cmd_sample(args):
    _, sol, grid = _solution(args)
    rows = sample(sol, grid)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            rows_to_csv(rows, fh)
    else:
        sys.stdout.write(rows_to_csv(rows))
    return 0


def cmd_props(args):
    print(property_suite(args.trials, args.seed).to_json())
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="cfwave", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", help="derive and solve the coefficient system")
    _add_equation_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("verify", help="residual of an explicit solution on a grid")
    _add_solution_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="tabulate an explicit solution as CSV")
    _add_solution_args(p)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("props", help="randomized conformable-derivative law checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_props)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, SolveError, ArithmeticError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"cfwave: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
