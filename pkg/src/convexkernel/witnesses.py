"""Witness-producing constructions for metric and near convexity and osculation."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .reals import (
    CReal,
    Verdict,
    _as_fraction,
    add,
    as_creal,
    dichotomy,
    div,
    dyadic,
    format_rational,
    mul,
    pos_or_small,
    scale_rational,
    sub,
)
from .space import Ball, NormKind, Segment, Vector, distance, hull_point, midpoint, norm

__all__ = [
    "WitnessPoint",
    "DependenceWitness",
    "metric_point",
    "near_convex_point",
    "osculation_common_point",
    "osculation_boundary_check",
    "hull_common_points",
    "unique_point_strict",
    "linear_dependence_witness",
]

DEFAULT_PRECISION = 32


@dataclass
class WitnessPoint:
    point: Vector
    achieved_precision: int
    branch_trace: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        k = self.achieved_precision
        return {
            "point": self.point.to_json(k),
            "k": k,
            "branches": list(self.branch_trace),
        }


def metric_point(x: Vector, y: Vector, lam, mu, kind: NormKind = NormKind.P2,
                 k: int = DEFAULT_PRECISION) -> WitnessPoint:
    """The point z with |z - x| = lam and |z - y| = mu, where lam + mu = |x - y|.

    Each approximation of z at precision j first asks whether rho = |x - y|
    is positive or below 2**-(j+2).  If positive (so rho > 2**-(j+4)) it
    evaluates w = (mu x + lam y)/rho; otherwise x itself is within 2**-(j+2)
    of z and its approximation is returned.  Both branches approximate the
    same point, so no choice between them is ever needed.
    """
    x._check(y)
    lam, mu = as_creal(lam), as_creal(mu)
    rho = distance(x, y, kind)
    trace: list[str] = []
    verdicts: dict[int, Verdict] = {}

    def branch(j: int) -> Verdict:
        v = verdicts.get(j)
        if v is None:
            v = verdicts[j] = pos_or_small(rho, dyadic(j + 2))
            trace.append(f"k={j}:{v}")
        return v

    def coordinate(xi: CReal, yi: CReal) -> CReal:
        numerator = add(mul(mu, xi), mul(lam, yi))

        def fn(j: int) -> Fraction:
            if branch(j) is Verdict.POS:
                return div(numerator, rho, dyadic(j + 4)).approx(j)
            return xi.approx(j + 1)

        return CReal(fn)

    z = Vector(tuple(coordinate(xi, yi) for xi, yi in zip(x.coords, y.coords)))
    z.approx(k)
    return WitnessPoint(z, k, trace)


MetricOracle = Callable[..., WitnessPoint]


def near_convex_point(x: Vector, y: Vector, lam, mu, margin,
                      kind: NormKind = NormKind.P2,
                      metric_oracle: MetricOracle = metric_point,
                      k: int = DEFAULT_PRECISION) -> WitnessPoint:
    """z with |x - z| < lam and |z - y| < mu, given |x - y| < lam + mu.

    ``margin`` witnesses the strict hypotheses: lam, mu and
    gamma = lam + mu - |x - y| are all >= margin.  The returned point
    satisfies |x - z| <= lam - margin/4 and |z - y| <= mu - margin/4.
    """
    margin = _as_fraction(margin)
    if margin <= 0:
        raise ValueError("margin must be positive")
    lam, mu = as_creal(lam), as_creal(mu)
    rho = distance(x, y, kind)
    gamma = sub(add(lam, mu), rho)
    half = scale_rational(gamma, Fraction(1, 2))
    upper = sub(gamma, margin / 4)
    trace: list[str] = []

    v = dichotomy(half, upper, margin / 4, lam)
    trace.append(f"lambda:{v}")
    if v is Verdict.GAMMA_LT_BETA:
        lam2, mu2 = as_creal(0), rho
    else:
        v = dichotomy(half, upper, margin / 4, mu)
        trace.append(f"mu:{v}")
        if v is Verdict.GAMMA_LT_BETA:
            lam2, mu2 = rho, as_creal(0)
        else:
            lam2, mu2 = sub(lam, half), sub(mu, half)
    inner = metric_oracle(x, y, lam2, mu2, kind, k=k)
    return WitnessPoint(inner.point, inner.achieved_precision, trace + inner.branch_trace)


def osculation_common_point(b1: Ball, b2: Ball, positivity=None,
                            k: int = DEFAULT_PRECISION) -> WitnessPoint:
    """A common point of osculating balls.

    With a rational lower bound on r1 + r2 the closed form
    (r2 c1 + r1 c2)/(r1 + r2) is used; otherwise the metric point of the
    centres split as (r1, r2).
    """
    if b1.norm is not b2.norm:
        raise ValueError("balls use different norms")
    b1.center._check(b2.center)
    if positivity is None:
        return metric_point(b1.center, b2.center, b1.radius, b2.radius, b1.norm, k=k)
    positivity = _as_fraction(positivity)
    if positivity <= 0:
        raise ValueError("positivity bound must be positive")
    r1, r2 = b1.radius, b2.radius
    total = add(r1, r2)
    num = b1.center.scale(r2) + b2.center.scale(r1)
    z = Vector(tuple(div(c, total, positivity) for c in num.coords))
    z.approx(k)
    return WitnessPoint(z, k, ["closed-form"])


def osculation_boundary_check(v: Vector, b1: Ball, b2: Ball, k: int) -> bool:
    """True iff | |v - c_i| - r_i | <= 2**(1-k) is certified for both balls."""
    for b in (b1, b2):
        gap = sub(distance(v, b.center, b.norm), b.radius)
        if gap.exact is not None:
            if abs(gap.exact) > dyadic(k - 1):
                return False
        elif abs(gap.approx(k + 1)) > dyadic(k):
            return False
    return True


def hull_common_points(u: Vector, v: Vector, b1: Ball, b2: Ball, t) -> Vector:
    """Points of the segment between two common points are common points."""
    b1.center._check(u)
    b2.center._check(v)
    return hull_point(Segment(u, v), t)


def unique_point_strict(c1: Vector, c2: Vector) -> Vector:
    """The only common point of the osculating Euclidean unit balls at c1, c2."""
    return midpoint(c1, c2)


@dataclass
class DependenceWitness:
    lam: CReal
    mu: CReal
    relation: str
    nonzero: str
    lower_bound: Fraction
    common_point: Optional[Vector] = None

    def to_json(self, k: int = DEFAULT_PRECISION) -> dict:
        def fmt(c: CReal) -> str:
            return format_rational(c.exact if c.exact is not None else c.approx(k))

        return {
            "lambda": fmt(self.lam),
            "mu": fmt(self.mu),
            "relation": self.relation,
            "nonzero": self.nonzero,
            "lower_bound": format_rational(self.lower_bound),
        }


def linear_dependence_witness(x: Vector, y: Vector, norm_sum_bound,
                              kind: NormKind = NormKind.P2) -> DependenceWitness:
    """Coefficients with |y| x = |x| y, for |x + y| = |x| + |y| >= norm_sum_bound.

    The balls B_|x|(x) and B_|y|(-y) osculate and both contain 0 and the
    closed-form point z = (|y| x - |x| y)/(|x| + |y|); strict convexity makes
    them equal, which is the dependence relation.
    """
    b = _as_fraction(norm_sum_bound)
    if b <= 0:
        raise ValueError("norm_sum_bound must be positive")
    x._check(y)
    nx, ny = norm(x, kind), norm(y, kind)
    # either |x| > b/3 or |x| < 2b/3, and then |y| > b/3
    v = dichotomy(b / 3, 2 * b / 3, b / 3, nx)
    nonzero = "mu" if v is Verdict.GAMMA_GT_ALPHA else "lambda"
    z = Vector(tuple(div(c, add(nx, ny), b) for c in (x.scale(ny) - y.scale(nx)).coords))
    return DependenceWitness(ny, nx, "lambda*x == mu*y", nonzero, b / 3, z)
