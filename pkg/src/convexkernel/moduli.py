"""Uniform-convexity moduli with exact rational certificates.

``base_modulus_euclidean`` supplies (eps, q) for the unit ball of l2;
``extended_modulus`` turns any unit-sphere modulus into one valid for
arbitrary balls B_r(c), including r = 0; ``intersection_delta`` gives the
closeness-to-osculation threshold below which B_r(c) & B_s(d) has diameter
at most eps.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Optional, Sequence

from .reals import (
    CReal,
    Verdict,
    _as_fraction,
    _precision_for,
    as_creal,
    dyadic,
    format_rational,
    pos_or_small,
    scale_rational,
    sub,
)
from .space import Ball, Membership, NormKind, Vector, distance, in_ball, midpoint

__all__ = [
    "Source",
    "ModulusCertificate",
    "CheckResult",
    "LensDelta",
    "DiameterReport",
    "base_modulus_euclidean",
    "extended_modulus",
    "midpoint_bound_check",
    "intersection_delta",
    "diameter_bound_check",
]

BASE_PRECISION = 32


class Source(enum.Enum):
    BASE_EUCLIDEAN = "BaseEuclidean"
    LEMMA1_EXTENDED = "Lemma1Extended"
    LEMMA3_DELTA = "Lemma3Delta"


@dataclass(frozen=True)
class ModulusCertificate:
    epsilon: Fraction
    q: Fraction
    delta: Fraction
    source: Source
    params: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not 0 <= self.q < 1:
            raise ValueError("q must lie in [0, 1)")
        if self.delta <= 0:
            raise ValueError("delta must be positive")

    def param(self, name: str) -> Fraction:
        return dict(self.params)[name]

    def to_json(self) -> dict:
        out = {
            "epsilon": format_rational(self.epsilon),
            "q": format_rational(self.q),
            "delta": format_rational(self.delta),
            "source": self.source.value,
        }
        if any(name == "qprime" for name, _ in self.params):
            out["qprime"] = format_rational(self.param("qprime"))
        return out


BaseModulus = Callable[[Fraction], ModulusCertificate]


def _sqrt_upper(s: Fraction, bits: int) -> Fraction:
    """Rational upper bound on sqrt(s), within 2**-bits."""
    scaled = s.numerator << (2 * bits)
    m = isqrt(scaled // s.denominator)
    if Fraction(m * m, 1 << (2 * bits)) < s:
        m += 1
    return Fraction(m, 1 << bits)


def base_modulus_euclidean(eps) -> ModulusCertificate:
    """q >= sqrt(1 - eps**2/4) for unit vectors of l2 at distance >= eps.

    By the parallelogram law |(u+v)/2|**2 = (|u|**2 + |v|**2)/2 - |u-v|**2/4.
    """
    eps = _as_fraction(eps)
    if not 0 < eps <= 2:
        raise ValueError("eps must lie in (0, 2]")
    s = 1 - eps * eps / 4
    bits = BASE_PRECISION
    q = _sqrt_upper(s, bits)
    while q >= 1:
        # only for tiny eps; a finer grid keeps the bound strictly below 1
        bits += 16
        q = _sqrt_upper(s, bits)
    return ModulusCertificate(eps, q, 1 - q, Source.BASE_EUCLIDEAN,
                              (("bits", Fraction(bits)),))


def extended_modulus(eps, base: BaseModulus = base_modulus_euclidean) -> ModulusCertificate:
    eps = _as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    eps_half = eps / 2
    qprime = base(eps_half).q
    delta = min(eps / 12, (1 - qprime) / 4, Fraction(1, 3))
    return ModulusCertificate(eps, 1 - delta, delta, Source.LEMMA1_EXTENDED,
                              (("eps_prime", eps_half), ("qprime", qprime)))


class CheckResult(enum.Enum):
    SATISFIED = "Satisfied"
    VIOLATED = "Violated"
    PREMISE_NOT_MET = "PremiseNotMet"


def _bounds(x: CReal, k: int) -> tuple[Fraction, Fraction]:
    if x.exact is not None:
        return x.exact, x.exact
    a = x.approx(k)
    e = dyadic(k)
    return a - e, a + e


def midpoint_bound_check(c: Vector, r, u: Vector, v: Vector,
                         cert: ModulusCertificate, k: int,
                         kind: NormKind = NormKind.P2) -> CheckResult:
    """Test the ball-midpoint inequality of ``cert`` on one configuration.

    Violated is returned only when the premises are certified and
    |(u+v)/2 - c| > q r + 2**-k is certified.
    """
    for w in (u, v):
        c._check(w)
    r = as_creal(r)
    tau = dyadic(k)
    j = k + 2
    lo_a, hi_a = _bounds(sub(distance(u, c, kind), r), j)
    lo_b, hi_b = _bounds(sub(distance(v, c, kind), r), j)
    lo_c, hi_c = _bounds(sub(distance(u, v, kind), scale_rational(r, cert.epsilon)), j)
    if lo_a > tau or lo_b > tau or hi_c < -tau:
        return CheckResult.PREMISE_NOT_MET
    lo_d, _ = _bounds(sub(distance(midpoint(u, v), c, kind), scale_rational(r, cert.q)), j)
    if lo_d <= tau:
        return CheckResult.SATISFIED
    if hi_a <= 0 and hi_b <= 0 and lo_c >= 0:
        return CheckResult.VIOLATED
    return CheckResult.PREMISE_NOT_MET


@dataclass(frozen=True)
class LensDelta:
    delta: Fraction
    branch: str
    rho_lower: Optional[Fraction] = None
    rho_upper: Optional[Fraction] = None
    certificate: Optional[ModulusCertificate] = None

    def __iter__(self):
        # unpacks as (delta, branch)
        return iter((self.delta, self.branch))

    def to_json(self) -> dict:
        out = {"delta": format_rational(self.delta), "branch": self.branch}
        if self.rho_lower is not None:
            out["rho_lower"] = format_rational(self.rho_lower)
            out["rho_upper"] = format_rational(self.rho_upper)
            out["q"] = format_rational(self.certificate.q)
        return out


def intersection_delta(eps, c: Vector, d: Vector,
                       base: BaseModulus = base_modulus_euclidean,
                       kind: NormKind = NormKind.P2) -> LensDelta:
    """delta such that |r + s - |c-d|| < delta forces diam(B_r(c) & B_s(d)) <= eps."""
    eps = _as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    c._check(d)
    rho = distance(c, d, kind)
    if pos_or_small(rho, eps / 4) is Verdict.SMALLER_THAN_E:
        return LensDelta(eps / 4, "SmallCenters")
    # Pos certifies rho > eps/16
    if rho.exact is not None:
        lower = upper = rho.exact
    else:
        j = BASE_PRECISION + _precision_for(eps / 16)
        a = rho.approx(j)
        lower = max(eps / 16, a - dyadic(j))
        upper = a + dyadic(j)
    # a q valid for a smaller eps' stays valid for larger ones; 4 bounds
    # every ratio |u-v|/r inside a ball
    eps_prime = min(eps / upper, Fraction(4))
    ext = extended_modulus(eps_prime, base)
    delta = min(eps / 4, lower * (1 - ext.q))
    cert = ModulusCertificate(eps, ext.q, delta, Source.LEMMA3_DELTA,
                              (("eps_prime", eps_prime), ("qprime", ext.param("qprime")),
                               ("rho_lower", lower), ("rho_upper", upper)))
    return LensDelta(delta, "PositiveDistance", lower, upper, cert)


@dataclass
class DiameterReport:
    passed: bool
    in_scope: bool
    admitted: int = 0
    skipped: int = 0
    worst_pair: Optional[int] = None
    worst_distance: Optional[Fraction] = None
    failures: list[int] = field(default_factory=list)


def diameter_bound_check(c: Vector, r, d: Vector, s, eps, delta,
                         samples: Sequence[tuple[Vector, Vector]], k: int,
                         kind: NormKind = NormKind.P2) -> DiameterReport:
    """Check |u - v| <= eps + 2**(1-k) for sampled pairs in B_r(c) & B_s(d)."""
    eps, delta = _as_fraction(eps), _as_fraction(delta)
    r, s = as_creal(r), as_creal(s)
    gap = sub(r + s, distance(c, d, kind))
    lo, hi = _bounds(gap, max(k + 2, _precision_for(delta / 64)))
    if not (-delta < lo and hi < delta):
        return DiameterReport(passed=True, in_scope=False, skipped=len(samples))
    b1, b2 = Ball(c, r, kind), Ball(d, s, kind)
    tol = dyadic(k)
    report = DiameterReport(passed=True, in_scope=True)
    bound = eps + 2 * tol
    for idx, (u, v) in enumerate(samples):
        if any(in_ball(p, b, tol) is Membership.OUTSIDE
               for p in (u, v) for b in (b1, b2)):
            report.skipped += 1
            continue
        report.admitted += 1
        dlo, dhi = _bounds(distance(u, v, kind), k + 2)
        if report.worst_distance is None or dhi > report.worst_distance:
            report.worst_distance, report.worst_pair = dhi, idx
        if dlo > bound:
            report.failures.append(idx)
            report.passed = False
    return report
