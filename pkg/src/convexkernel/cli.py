"""``convexkernel`` command line.

Exit status: 0 on success, 1 when a property check fails or an expected
falsification does not happen, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .harness import REDUCTIONS, Outcome, builtin_decider, default_budget
from .moduli import base_modulus_euclidean, extended_modulus, intersection_delta
from .reals import dyadic, format_rational, from_rational, parse_rational, scale_rational, sub
from .space import Ball, NormKind, Vector, distance
from .witnesses import metric_point, near_convex_point, osculation_common_point

MAX_PRECISION = 256
SUITES = ("midpoint", "lens", "metric", "osculation", "strict", "kernel")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    k: int = 32
    seed: int = 0
    sample_count: int = 100
    output: str = "json"
    budget: int = 1 << 10

    def __post_init__(self):
        if not 0 <= self.k <= MAX_PRECISION:
            raise UsageError(f"precision k must lie in [0, {MAX_PRECISION}]")
        if self.sample_count < 1:
            raise UsageError("sample count must be at least 1")
        if not 0 <= self.seed < 1 << 64:
            raise UsageError("seed must be a 64-bit unsigned integer")
        if self.budget < 0:
            raise UsageError("budget must be non-negative")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational {text!r}: {exc}") from None


def _vector(text: str) -> Vector:
    text = text.strip()
    try:
        if text.startswith("{"):
            return Vector.from_json(json.loads(text))
        return Vector.of(*(_rational(p) for p in text.split(",")))
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad vector {text!r}: {exc}") from None


def _ball(text: str, kind: NormKind) -> Ball:
    """JSON ball, or the shorthand ``c1,...,cd,r``."""
    text = text.strip()
    try:
        if text.startswith("{"):
            return Ball.from_json(json.loads(text))
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad ball {text!r}: {exc}") from None
    parts = [_rational(p) for p in text.split(",")]
    if len(parts) < 2:
        raise UsageError("ball shorthand needs a centre and a radius")
    if parts[-1] < 0:
        raise UsageError("ball radius must be non-negative")
    return Ball(Vector.of(*parts[:-1]), from_rational(parts[-1]), kind)


# ------------------------------------------------------------------ commands

def cmd_modulus(args, cfg: RunConfig) -> tuple[dict, int]:
    eps = _rational(args.eps)
    if eps <= 0:
        raise UsageError("eps must be positive")
    if eps > 4:
        raise UsageError("eps must be at most 4 for the Euclidean base modulus")
    cert = extended_modulus(eps, base_modulus_euclidean)
    out = cert.to_json()
    out["space"] = args.space
    out["base"] = args.base
    return out, 0


def cmd_lens_delta(args, cfg: RunConfig) -> tuple[dict, int]:
    eps = _rational(args.eps)
    if eps <= 0:
        raise UsageError("eps must be positive")
    c, d = _vector(args.c), _vector(args.d)
    if c.dim != d.dim:
        raise UsageError("centres have different dimensions")
    return intersection_delta(eps, c, d, kind=NormKind.parse(args.norm)).to_json(), 0


def _split(args, x: Vector, y: Vector, kind: NormKind, cfg: RunConfig):
    rho = distance(x, y, kind)
    if args.t is not None:
        t = _rational(args.t)
        if not 0 <= t <= 1:
            raise UsageError("t must lie in [0, 1]")
        return scale_rational(rho, t), scale_rational(rho, 1 - t)
    if args.lam is None or args.mu is None:
        raise UsageError("give either --t or both --lambda and --mu")
    lam, mu = _rational(args.lam), _rational(args.mu)
    if lam < 0 or mu < 0:
        raise UsageError("lambda and mu must be non-negative")
    err = sub(rho, lam + mu).approx(cfg.k + 2)
    if abs(err) > dyadic(cfg.k):
        raise UsageError("lambda + mu differs from |x - y|")
    return from_rational(lam), from_rational(mu)


def cmd_metric_point(args, cfg: RunConfig) -> tuple[dict, int]:
    x, y = _vector(args.x), _vector(args.y)
    if x.dim != y.dim:
        raise UsageError("points have different dimensions")
    kind = NormKind.parse(args.norm)
    lam, mu = _split(args, x, y, kind, cfg)
    return metric_point(x, y, lam, mu, kind, k=cfg.k).to_json(), 0


def cmd_near_point(args, cfg: RunConfig) -> tuple[dict, int]:
    x, y = _vector(args.x), _vector(args.y)
    if x.dim != y.dim:
        raise UsageError("points have different dimensions")
    lam, mu, margin = _rational(args.lam), _rational(args.mu), _rational(args.margin)
    if margin <= 0 or lam < margin or mu < margin:
        raise UsageError("need 0 < margin <= lambda, mu")
    try:
        wp = near_convex_point(x, y, lam, mu, margin, NormKind.parse(args.norm), k=cfg.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return wp.to_json(), 0


def cmd_osculate(args, cfg: RunConfig) -> tuple[dict, int]:
    kind = NormKind.parse(args.norm)
    b1, b2 = _ball(args.b1, kind), _ball(args.b2, kind)
    if b1.dim != b2.dim:
        raise UsageError("balls have different dimensions")
    bound = None if args.pos_bound is None else _rational(args.pos_bound)
    if bound is not None and bound <= 0:
        raise UsageError("--pos-bound must be positive")
    gap = sub(distance(b1.center, b2.center, kind), b1.radius + b2.radius)
    if abs(gap.approx(cfg.k + 2)) > dyadic(cfg.k):
        raise UsageError("balls do not osculate")
    return osculation_common_point(b1, b2, bound, k=cfg.k).to_json(), 0


def cmd_verify(args, cfg: RunConfig) -> tuple[dict, int]:
    from . import suites

    chosen = SUITES if args.suite == "all" else (args.suite,)
    eps_list = [_rational(e) for e in args.eps] if args.eps else None
    reports = []
    n = cfg.sample_count
    for name in chosen:
        if name == "midpoint":
            for eps in eps_list or [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(3, 2)]:
                for dim in (2, 3):
                    reports.append(suites.midpoint_sweep(eps, dim, n, cfg.seed))
        elif name == "lens":
            for eps in eps_list or [Fraction(1, 4), Fraction(1, 2)]:
                reports.append(suites.lens_sweep(eps, n, cfg.seed))
        elif name == "metric":
            reports.append(suites.metric_point_sweep(n, cfg.seed))
            reports.append(suites.adversarial_metric_sweep())
        elif name == "osculation":
            reports.append(suites.osculation_sweep(n, cfg.seed))
        elif name == "strict":
            reports.append(suites.strict_convexity_sweep(n, cfg.seed))
        elif name == "kernel":
            reports.extend(suites.kernel_law_sweep(n, cfg.seed))
    passed = all(r.passed for r in reports)
    out = {"seed": cfg.seed, "samples": n, "passed": passed,
           "suites": [r.to_json() for r in reports]}
    return out, 0 if passed else 1


def cmd_demo(args, cfg: RunConfig) -> tuple[dict, int]:
    try:
        decider = builtin_decider(args.reduction, args.decider)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = REDUCTIONS[args.reduction](decider, cfg.budget)
    honest = args.decider.removeprefix("builtin:").startswith("honest-partial")
    expected = Outcome.NON_TOTAL if honest else Outcome.FALSIFIED
    return report.to_json(), 0 if report.outcome is expected else 1


COMMANDS = {
    "modulus": cmd_modulus,
    "lens-delta": cmd_lens_delta,
    "metric-point": cmd_metric_point,
    "near-point": cmd_near_point,
    "osculate": cmd_osculate,
    "verify": cmd_verify,
    "demo": cmd_demo,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-k", "--precision", dest="k", type=int, default=32)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=100)
    common.add_argument("--output", choices=("json", "text"), default="json")
    common.add_argument("--budget", type=int, default=None,
                        help="precision budget for demo (default 1024, env CONVEXKERNEL_BUDGET)")

    parser = argparse.ArgumentParser(prog="convexkernel", description=__doc__.splitlines()[0])
    sub_ = parser.add_subparsers(dest="command", required=True)

    p = sub_.add_parser("modulus", parents=[common], help="extended uniform-convexity modulus certificate")
    p.add_argument("--eps", required=True)
    p.add_argument("--space", choices=("r2", "r3"), default="r2")
    p.add_argument("--base", choices=("euclidean",), default="euclidean")

    p = sub_.add_parser("lens-delta", parents=[common], help="osculation threshold for small lens diameter")
    p.add_argument("--eps", required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--d", required=True)
    p.add_argument("--norm", choices=("p2",), default="p2")

    for name in ("metric-point", "near-point"):
        p = sub_.add_parser(name, parents=[common])
        p.add_argument("--x", required=True)
        p.add_argument("--y", required=True)
        p.add_argument("--lambda", dest="lam")
        p.add_argument("--mu")
        p.add_argument("--norm", choices=("p1", "p2", "pinf"), default="p2")
        if name == "metric-point":
            p.add_argument("--t", help="split |x-y| as lambda = t*rho, mu = (1-t)*rho")
        else:
            p.add_argument("--margin", required=True)

    p = sub_.add_parser("osculate", parents=[common], help="common point of osculating balls")
    p.add_argument("--b1", required=True)
    p.add_argument("--b2", required=True)
    p.add_argument("--pos-bound")
    p.add_argument("--norm", choices=("p1", "p2", "pinf"), default="p2")

    p = sub_.add_parser("verify", parents=[common], help="run the seeded sampling suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--eps", action="append")

    p = sub_.add_parser("demo", parents=[common], help="falsify a decision procedure")
    p.add_argument("--reduction", choices=tuple(REDUCTIONS), required=True)
    p.add_argument("--decider", required=True)
    return parser


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, value in obj.items():
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.append(_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(value)}")
    elif isinstance(obj, list):
        for value in obj:
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(_text(value, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(value)}")
    return "\n".join(lines)


def _scalar(value) -> str:
    if isinstance(value, str) and "/" in value:
        try:
            q = parse_rational(value)
        except ValueError:
            return value
        return f"{value} (approx {float(q):.10g})"
    return str(value)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        budget = default_budget() if args.budget is None else args.budget
        cfg = RunConfig(args.command, args.k, args.seed, args.samples, args.output, budget)
        out, code = COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"convexkernel {args.command}: error: {exc}", file=sys.stderr)
        return 2
    out = {"command": args.command, **out}
    if cfg.output == "json":
        print(json.dumps(out, sort_keys=True, indent=2))
    else:
        print(_text(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
