"""Command line: ``abcfrac <subcommand> [--flag value]...``.

Exit codes: 0 success, 1 library or input error (one ``error:{code}:{message}``
line on stderr), 2 verification failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from .errors import ABCError
from .inequality_lab import reports_to_json, run_suite, suite_passed
from .operators import Normalization, Trajectory, ab_integral, abc_derivative
from .solver import (
    IVProblem,
    RhsFunction,
    SolverConfig,
    continue_globally,
    equicontinuity_modulus,
    extremal_existence_interval,
    local_existence_interval,
    solve_extremal,
    solve_ivp,
)
from .special_functions import MLParams, ml1, ml3

EXIT_OK, EXIT_ERROR, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit 2
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


# name -> (builder(params) -> f, default Lipschitz in omega)
def _linear_tau(p: dict) -> Callable[[float, float], float]:
    a, c = p.get("a", 1.0), p.get("c", 0.0)
    return lambda t, w: a * t + c


def _linear_omega(p: dict) -> Callable[[float, float], float]:
    k, a, c = p.get("k", 1.0), p.get("a", 0.0), p.get("c", 0.0)
    return lambda t, w: k * w + a * t + c


def _logistic(p: dict) -> Callable[[float, float], float]:
    r, K = p.get("r", 1.0), p.get("K", 1.0)
    return lambda t, w: r * w * (1.0 - w / K)


def _tau_cos_omega(p: dict) -> Callable[[float, float], float]:
    a = p.get("a", 1.0)
    return lambda t, w: a * t * math.cos(w)


RHS_REGISTRY: dict[str, Callable[[dict], Callable[[float, float], float]]] = {
    "zero": lambda p: (lambda t, w: 0.0),
    "linear_tau": _linear_tau,
    "linear_omega": _linear_omega,
    "logistic": _logistic,
    "tau_cos_omega": _tau_cos_omega,
}


def build_rhs(spec: dict, lipschitz: dict | None = None) -> RhsFunction:
    name = spec.get("name")
    if name not in RHS_REGISTRY:
        raise UsageError(f"unknown rhs {name!r}; choose from {', '.join(sorted(RHS_REGISTRY))}")
    params = {k: float(v) for k, v in spec.get("params", {}).items()}
    lip = lipschitz or {}
    return RhsFunction(
        RHS_REGISTRY[name](params),
        lipschitz_tau=float(lip.get("L1", 0.0)),
        lipschitz_omega=float(lip.get("L2", 0.0)),
        bound_M=float(lip.get("M", 1.0)),
        box_halfwidth_b=float(lip.get("b", 1.0)),
        name=name,
    )


def parse_normalization(value: Any) -> Normalization:
    if isinstance(value, Normalization):
        return value
    if value is None:
        return Normalization()
    if isinstance(value, str):
        text = value.strip()
        if text.startswith("["):
            return Normalization.from_table(json.loads(text))
        try:
            return {"constant_one": Normalization.constant_one, "alpha_blend": Normalization.alpha_blend}[text]()
        except KeyError:
            raise UsageError(f"unknown normalization {value!r}") from None
    return Normalization.from_table(value)


def _parse_value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(doc: dict, overrides: Sequence[str]) -> dict:
    """Apply ``dotted.key=value`` overrides; values are parsed as JSON when possible."""
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise UsageError(f"override {item!r} is not of the form key=value")
        node = doc
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise UsageError(f"override {item!r} descends into a non-object")
        node[parts[-1]] = _parse_value(raw)
    return doc


def load_problem(path: str, overrides: Sequence[str]) -> tuple[dict, IVProblem, SolverConfig]:
    doc = apply_overrides(json.loads(Path(path).read_text()), overrides)
    missing = [k for k in ("alpha", "omega0", "T", "h", "rhs") if k not in doc]
    if missing:
        raise UsageError(f"problem JSON lacks {', '.join(missing)}")
    B = parse_normalization(doc.get("B"))
    problem = IVProblem(build_rhs(doc["rhs"], doc.get("lipschitz")), float(doc["omega0"]), float(doc["T"]), float(doc["alpha"]), B)
    config = SolverConfig(float(doc["h"]), consistency_mode=doc.get("consistency_mode", "warn"))
    return doc, problem, config


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------ subcommands


def _cmd_ml(args) -> int:
    if args.beta == 1.0 and args.gamma == 1.0:
        value = ml1(args.alpha, args.z)
    else:
        value = ml3(MLParams(args.alpha, args.beta, args.gamma), args.z)
    print(repr(value))
    return EXIT_OK


def _cmd_deriv(args) -> int:
    traj = Trajectory.from_csv(args.input)
    out = abc_derivative(traj, args.alpha, parse_normalization(args.B))
    _emit(out.to_csv(), args.output)
    return EXIT_OK


def _cmd_integ(args) -> int:
    traj = Trajectory.from_csv(args.input)
    out = ab_integral(traj, args.alpha, parse_normalization(args.B))
    _emit(out.to_csv(), args.output)
    return EXIT_OK


def _cmd_solve(args) -> int:
    _, problem, config = load_problem(args.input, args.set)
    _emit(solve_ivp(problem, config).to_csv(), args.output)
    return EXIT_OK


def _cmd_extremal(args) -> int:
    _, problem, config = load_problem(args.input, args.set)
    upper, lower = solve_extremal(problem, config)
    _emit((upper if args.branch == "max" else lower).to_csv(), args.output)
    return EXIT_OK


def _cmd_continue(args) -> int:
    doc, problem, config = load_problem(args.input, args.set)
    if "majorant" not in doc or "u0" not in doc:
        raise UsageError("continue needs 'majorant' and 'u0' in the problem JSON")
    g = build_rhs(doc["majorant"], doc.get("majorant_lipschitz", doc.get("lipschitz")))
    T_max = float(doc.get("T_max", doc["T"]))
    out = continue_globally(problem, g, float(doc["u0"]), config, T_max, restart=bool(doc.get("restart", False)))
    _emit(out.to_csv(), args.output)
    return EXIT_OK


def _cmd_interval(args) -> int:
    B = parse_normalization(args.B)
    T = math.inf if args.T is None else args.T
    if args.local:
        value = local_existence_interval(args.M, args.b, args.alpha, B, T)
    elif args.extremal:
        value = extremal_existence_interval(args.M, args.b, args.alpha, B, T)
    else:
        if args.eps is None:
            raise UsageError("--equicontinuity needs --eps")
        value = equicontinuity_modulus(args.eps, args.alpha, B, args.L1, args.L2, args.M)
    print(f"{value:.12g}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    reports = run_suite(h=args.grid_h, T=args.T, alpha=args.alpha, B=parse_normalization(args.B))
    _emit(reports_to_json(reports) + "\n", args.output)
    return EXIT_OK if suite_passed(reports) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="abcfrac", description="ABC fractional calculus toolkit")
    sub = parser.add_subparsers(dest="subcommand", metavar="<subcommand>", required=True)

    p = sub.add_parser("ml", help="evaluate a Mittag-Leffler function")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--z", type=float, required=True)
    p.set_defaults(func=_cmd_ml)

    for name, func, what in (("deriv", _cmd_deriv, "ABC derivative"), ("integ", _cmd_integ, "AB integral")):
        p = sub.add_parser(name, help=f"{what} of a tau,value CSV")
        p.add_argument("--input", required=True, help="trajectory CSV")
        p.add_argument("--output", help="output CSV (default: stdout)")
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--B", default="constant_one", help="constant_one, alpha_blend or a JSON table")
        p.set_defaults(func=func)

    for name, func, what in (
        ("solve", _cmd_solve, "solve an initial value problem"),
        ("extremal", _cmd_extremal, "maximal or minimal solution"),
        ("continue", _cmd_continue, "continue a solution under a majorant"),
    ):
        p = sub.add_parser(name, help=what)
        p.add_argument("--input", required=True, help="problem JSON")
        p.add_argument("--output", help="output CSV (default: stdout)")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a JSON field")
        if name == "extremal":
            p.add_argument("--branch", choices=("max", "min"), default="max")
        p.set_defaults(func=func)

    p = sub.add_parser("interval", help="existence intervals and equicontinuity modulus")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--local", action="store_true")
    kind.add_argument("--extremal", action="store_true")
    kind.add_argument("--equicontinuity", action="store_true")
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--T", type=float)
    p.add_argument("--B", default="constant_one")
    p.add_argument("--eps", type=float)
    p.add_argument("--L1", type=float, default=0.0)
    p.add_argument("--L2", type=float, default=0.0)
    p.set_defaults(func=_cmd_interval)

    p = sub.add_parser("verify", help="run the inequality suite")
    p.add_argument("--grid-h", type=float, default=2e-3)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--B", default="constant_one")
    p.add_argument("--output", help="report JSON (default: stdout)")
    p.set_defaults(func=_cmd_verify)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error:usage:{exc}", file=sys.stderr)
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    except ABCError as exc:
        print(f"error:{exc.code}:{_one_line(exc)}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"error:input:{_one_line(exc)}", file=sys.stderr)
        return EXIT_ERROR


def _one_line(exc: BaseException) -> str:
    return " ".join(str(exc).split())


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
