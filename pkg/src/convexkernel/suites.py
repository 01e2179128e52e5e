"""Seeded sampling suites for the convexity bounds and witness constructions.

Random draws come from ``numpy.random.default_rng`` (PCG64) seeded with a
tuple that includes the suite parameters, so each suite is reproducible on
its own.  Floats are only used to propose configurations: every proposal is
snapped to a dyadic grid and then checked in exact arithmetic.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from . import _kernels
from .moduli import (
    CheckResult,
    diameter_bound_check,
    extended_modulus,
    intersection_delta,
    midpoint_bound_check,
)
from . import reals as R
from .reals import Verdict, dyadic, format_rational, from_rational, scale_rational, sub
from .space import Ball, NormKind, Vector, distance, norm
from .harness import make_adversarial
from .witnesses import (
    metric_point,
    osculation_boundary_check,
    osculation_common_point,
    unique_point_strict,
)

GRID_BITS = 24


@dataclass
class SuiteReport:
    name: str
    params: dict
    cases: int = 0
    violations: int = 0
    counts: dict = field(default_factory=dict)
    worst: Optional[Fraction] = None
    first_failures: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.cases > 0

    def fail(self, index: int, detail: str) -> None:
        self.violations += 1
        if len(self.first_failures) < 5:
            self.first_failures.append({"index": index, "detail": detail})

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "cases": self.cases,
            "violations": self.violations,
            "passed": self.passed,
            "counts": dict(sorted(self.counts.items())),
            "worst": None if self.worst is None else format_rational(self.worst),
            "first_failures": self.first_failures,
        }


def _rng(seed: int, *salt: int) -> np.random.Generator:
    return np.random.default_rng([seed, *salt])


def snap(x: float, bits: int = GRID_BITS) -> Fraction:
    return Fraction(round(x * (1 << bits)), 1 << bits)


def snap_vector(xs, bits: int = GRID_BITS) -> Vector:
    return Vector.of(*(snap(float(x), bits) for x in xs))


def _salt(q: Fraction) -> tuple[int, int]:
    return q.numerator, q.denominator


def rational_unit(rng: np.random.Generator, dim: int, bits: int = 16) -> Vector:
    """An exactly Euclidean-unit vector with rational coordinates."""
    if dim == 1:
        return Vector.of(1 if rng.random() < 0.5 else -1)
    if dim == 2:
        t = snap(rng.uniform(-1, 1), bits)
        den = 1 + t * t
        sign = 1 if rng.random() < 0.5 else -1
        return Vector.of((1 - t * t) / den * sign, 2 * t / den)
    if dim == 3:
        a, b = snap(rng.uniform(-1.5, 1.5), bits), snap(rng.uniform(-1.5, 1.5), bits)
        den = a * a + b * b + 1
        return Vector.of(2 * a / den, 2 * b / den, (a * a + b * b - 1) / den)
    raise ValueError("rational_unit supports dimensions 1 to 3")


def _unit_ball_points(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    g = rng.standard_normal((n, dim))
    g /= np.linalg.norm(g, axis=1)[:, None]
    radius = rng.random(n) ** (1.0 / dim)
    return g * radius[:, None]


# ------------------------------------------------------------------ ball midpoints

def midpoint_configs(eps: Fraction, dim: int, n: int, seed: int,
                   margin: Fraction = dyadic(10)) -> Iterator[tuple]:
    """(c, r, u, v) with u, v in B_r(c) and |u - v| >= r*eps, premise margin ``margin``.

    Points are u = c + r*a with |a| <= 1 - margin and |a - b| >= eps + margin.
    """
    rng = _rng(seed, 1, dim, *_salt(eps))
    m = float(margin)
    produced = 0
    while produced < n:
        batch = max(4 * (n - produced), 256)
        a = _unit_ball_points(rng, batch, dim)
        b = _unit_ball_points(rng, batch, dim)
        # float slack keeps the snapped exact points inside the premise
        keep = _kernels.ball_pair_mask(a, b, float(eps), 2 * m)
        centers = rng.uniform(-2, 2, (batch, dim))
        radii = rng.uniform(0, 2, batch)
        for i in np.flatnonzero(keep):
            if produced >= n:
                break
            c = snap_vector(centers[i])
            r = snap(radii[i])
            av, bv = snap_vector(a[i]), snap_vector(b[i])
            u = c + av.scale(r)
            v = c + bv.scale(r)
            produced += 1
            yield c, r, u, v


def midpoint_sweep(eps, dim: int, n: int, seed: int, k: int = 16) -> SuiteReport:
    eps = Fraction(eps)
    t0 = time.perf_counter()
    cert = extended_modulus(eps)
    report = SuiteReport("midpoint", {"eps": format_rational(eps), "dim": dim, "n": n,
                                    "seed": seed, "k": k, "q": format_rational(cert.q)})
    counts: Counter = Counter()
    for idx, (c, r, u, v) in enumerate(midpoint_configs(eps, dim, n, seed)):
        verdict = midpoint_bound_check(c, r, u, v, cert, k)
        counts[verdict.value] += 1
        report.cases += 1
        if verdict is CheckResult.VIOLATED:
            report.fail(idx, f"midpoint bound violated, r={format_rational(r)}")
    report.counts = dict(counts)
    report.elapsed = time.perf_counter() - t0
    return report


def max_midpoint_norm_oracle(eps, n: int = 100_000, seed: int = 0) -> tuple[float, int]:
    """Float brute force: largest |(u+v)/2| over sampled unit pairs in R^2 with |u-v| >= eps."""
    rng = _rng(seed, 7)
    theta = rng.uniform(0, 2 * np.pi, n)
    phi = rng.uniform(-np.pi, np.pi, n)
    return _kernels.max_midpoint_norm(theta, theta + phi, float(eps))


# ------------------------------------------------------------------ lens diameter

def _orthonormal_frame(direction: np.ndarray) -> np.ndarray:
    dim = direction.shape[0]
    frame = [direction / np.linalg.norm(direction)]
    for e in np.eye(dim):
        w = e - sum(np.dot(e, f) * f for f in frame)
        if np.linalg.norm(w) > 1e-6:
            frame.append(w / np.linalg.norm(w))
        if len(frame) == dim:
            break
    return np.array(frame)


def lens_points(c: np.ndarray, r: float, d: np.ndarray, s: float, count: int,
                rng: np.random.Generator, tries: int = 4000) -> np.ndarray:
    """Rejection-sample float points of B_r(c) & B_s(d) from the lens bounding box."""
    axis = d - c
    rho = float(np.linalg.norm(axis))
    frame = _orthonormal_frame(axis)
    a = (rho * rho + r * r - s * s) / (2 * rho)
    half = np.sqrt(max(r * r - a * a, 0.0))
    dim = c.shape[0]
    along = rng.uniform(rho - s, r, tries)
    across = rng.uniform(-half, half, (tries, dim - 1))
    pts = c + along[:, None] * frame[0] + across @ frame[1:]
    keep = _kernels.lens_mask(pts, c, r, d, s, 1e-12)
    return pts[keep][:count]


def lens_sweep(eps, n: int, seed: int, k: int = 10, points: int = 12) -> SuiteReport:
    eps = Fraction(eps)
    t0 = time.perf_counter()
    rng = _rng(seed, 3, *_salt(eps))
    report = SuiteReport("lens", {"eps": format_rational(eps), "n": n, "seed": seed,
                                    "k": k, "points": points})
    counts: Counter = Counter()
    bound = eps + dyadic(10)
    for idx in range(n):
        dim = 2 + idx % 2
        cf = rng.uniform(-1, 1, dim)
        direction = rng.standard_normal(dim)
        direction /= np.linalg.norm(direction)
        rho_f = rng.uniform(0.5, 2.0)
        c = snap_vector(cf)
        d = snap_vector(cf + rho_f * direction)
        lens = intersection_delta(eps, c, d)
        counts[lens.branch] += 1
        rho_f = float(distance(c, d).approx(60))
        total = rho_f + float(lens.delta) * rng.uniform(0.1, 0.9)
        w = rng.uniform(0.2, 0.8)
        r, s = snap(w * total, 40), snap((1 - w) * total, 40)
        cfe = np.array([float(x) for x in c.exact_coords()])
        dfe = np.array([float(x) for x in d.exact_coords()])
        pts = lens_points(cfe, float(r), dfe, float(s), points, rng)
        vecs = [snap_vector(p, 40) for p in pts]
        pairs = [(vecs[i], vecs[j]) for i in range(len(vecs)) for j in range(i + 1, len(vecs))]
        check = diameter_bound_check(c, r, d, s, eps, lens.delta, pairs, k)
        report.cases += 1
        if not check.in_scope:
            counts["out_of_scope"] += 1
            report.fail(idx, "configuration not within delta of osculation")
            continue
        counts["admitted_pairs"] += check.admitted
        counts["skipped_pairs"] += check.skipped
        if check.worst_distance is not None and (report.worst is None
                                                 or check.worst_distance > report.worst):
            report.worst = check.worst_distance
        if not check.passed or (check.worst_distance is not None
                                and check.worst_distance > bound):
            report.fail(idx, f"lens pair farther apart than eps: {check.failures}")
    report.counts = dict(counts)
    report.elapsed = time.perf_counter() - t0
    return report


# ------------------------------------------------------------------ witnesses

def _rational_point(rng: np.random.Generator, dim: int, lo=-2.0, hi=2.0) -> Vector:
    return snap_vector(rng.uniform(lo, hi, dim), 16)


def metric_point_sweep(n: int, seed: int, ks=(8, 16, 32)) -> SuiteReport:
    """|z - x| = lam and |z - y| = mu checked at each precision in ``ks``."""
    t0 = time.perf_counter()
    rng = _rng(seed, 4)
    report = SuiteReport("metric_point", {"n": n, "seed": seed, "ks": list(ks)})
    counts: Counter = Counter()
    kinds = (NormKind.P1, NormKind.P2)
    top = max(ks)
    for idx in range(n):
        dim = 1 + idx % 3
        kind = kinds[(idx // 3) % 2]
        x = _rational_point(rng, dim)
        y = _rational_point(rng, dim)
        if idx % 17 == 0:
            y = x
        t = snap(rng.random(), 16)
        rho = distance(x, y, kind)
        lam, mu = scale_rational(rho, t), scale_rational(rho, 1 - t)
        wp = metric_point(x, y, lam, mu, kind, k=top)
        counts[f"dim{dim}-{kind.value}"] += 1
        report.cases += 1
        for k in ks:
            tol = dyadic(k - 2)
            e1 = abs(distance(wp.point, x, kind).approx(k) - lam.approx(k))
            e2 = abs(distance(wp.point, y, kind).approx(k) - mu.approx(k))
            worst = max(e1, e2)
            if report.worst is None or worst > report.worst:
                report.worst = worst
            if worst > tol:
                report.fail(idx, f"k={k}: distance error {float(worst):.3g}")
    report.counts = dict(counts)
    report.elapsed = time.perf_counter() - t0
    return report


def pairwise_modulus_violations(x, top: int = 64) -> list[tuple[int, int]]:
    vals = [x.approx(k) for k in range(top + 1)]
    bad = []
    for i in range(top + 1):
        for j in range(i + 1, top + 1):
            if abs(vals[i] - vals[j]) > dyadic(i) + dyadic(j):
                bad.append((i, j))
    return bad


def adversarial_metric_sweep(stages=(4, 16, 40), top: int = 64) -> SuiteReport:
    """Stream soundness of metric_point when |x - y| is an undecided real."""
    t0 = time.perf_counter()
    report = SuiteReport("metric_point_adversarial", {"stages": list(stages), "top": top})
    counts: Counter = Counter()
    for stage in stages:
        for sign in (0, 1):
            for dim in (1, 2):
                alpha = make_adversarial(stage, sign)
                zero = from_rational(0)
                x = Vector.of(*([0] * dim))
                y = Vector((alpha,) + (zero,) * (dim - 1))
                wp = metric_point(x, y, alpha, 0, NormKind.P2, k=top)
                report.cases += 1
                counts[f"stage{stage}"] += 1
                for ci, coord in enumerate(wp.point.coords):
                    bad = pairwise_modulus_violations(coord, top)
                    if bad:
                        report.fail(report.cases, f"stage {stage} coord {ci}: {bad[:3]}")
                # the point must equal alpha itself in the first coordinate
                err = abs(wp.point.coords[0].approx(top) - alpha.approx(top + 1))
                if err > dyadic(top) + dyadic(top + 1):
                    report.fail(report.cases, f"stage {stage}: z != alpha")
    report.counts = dict(counts)
    report.elapsed = time.perf_counter() - t0
    return report


def osculating_pair(rng: np.random.Generator, dim: int, kind: NormKind,
                    r1: Fraction, r2: Fraction) -> tuple[Ball, Ball]:
    c1 = _rational_point(rng, dim)
    direction = rational_unit(rng, dim)
    if kind is not NormKind.P2:
        direction = direction.scale(1 / norm(direction, kind).exact)
    c2 = c1 + direction.scale(r1 + r2)
    return Ball(c1, from_rational(r1), kind), Ball(c2, from_rational(r2), kind)


def osculation_sweep(n: int, seed: int, k: int = 18) -> SuiteReport:
    """Closed-form common point versus the metric-point delegate."""
    t0 = time.perf_counter()
    rng = _rng(seed, 5)
    report = SuiteReport("osculation", {"n": n, "seed": seed, "k": k})
    counts: Counter = Counter()
    kinds = (NormKind.P2, NormKind.P1, NormKind.PINF)
    tol = dyadic(k)
    for idx in range(n):
        dim = 1 + idx % 3
        kind = kinds[(idx // 3) % 3]
        r1 = snap(rng.uniform(0.05, 2), 16)
        r2 = snap(rng.uniform(0.05, 2), 16)
        b1, b2 = osculating_pair(rng, dim, kind, r1, r2)
        closed = osculation_common_point(b1, b2, positivity=r1 + r2, k=k + 2)
        delegate = osculation_common_point(b1, b2, k=k + 2)
        gap = max(abs(p - q) for p, q in zip(closed.point.approx(k + 2), delegate.point.approx(k + 2)))
        counts[kind.value] += 1
        report.cases += 1
        if report.worst is None or gap > report.worst:
            report.worst = gap
        if gap > tol:
            report.fail(idx, f"closed form and delegate differ by {float(gap):.3g}")
        if not osculation_boundary_check(closed.point, b1, b2, k):
            report.fail(idx, "closed-form point not on both spheres")
    report.counts = dict(counts)
    report.elapsed = time.perf_counter() - t0
    return report


def strict_convexity_sweep(n: int, seed: int, k: int = 20) -> SuiteReport:
    """Common points of osculating Euclidean unit balls all coincide."""
    t0 = time.perf_counter()
    rng = _rng(seed, 6)
    report = SuiteReport("strict_convexity", {"n": n, "seed": seed, "k": k})
    one = Fraction(1)
    tol = dyadic(k)
    for idx in range(n):
        dim = 2 + idx % 2
        b1, b2 = osculating_pair(rng, dim, NormKind.P2, one, one)
        candidates = [
            osculation_common_point(b1, b2, positivity=2, k=k + 2).point,
            osculation_common_point(b1, b2, k=k + 2).point,
            unique_point_strict(b1.center, b2.center),
        ]
        report.cases += 1
        for p in candidates:
            if not osculation_boundary_check(p, b1, b2, k):
                report.fail(idx, "candidate is not a common point")
        approx = [p.approx(k + 2) for p in candidates]
        for i in range(len(approx)):
            for j in range(i + 1, len(approx)):
                gap = max(abs(a - b) for a, b in zip(approx[i], approx[j]))
                if report.worst is None or gap > report.worst:
                    report.worst = gap
                if gap > tol:
                    report.fail(idx, f"common points {i},{j} differ by {float(gap):.3g}")
    report.elapsed = time.perf_counter() - t0
    return report


def pinf_nonuniqueness(k: int = 20) -> dict:
    """The explicit max-norm pair of distinct common points."""
    b1 = Ball(Vector.of(0, 0), from_rational(1), NormKind.PINF)
    b2 = Ball(Vector.of(2, 0), from_rational(1), NormKind.PINF)
    u, v = Vector.of(1, 1), Vector.of(1, -1)
    gap = distance(u, v, NormKind.PINF)
    return {
        "u_common": osculation_boundary_check(u, b1, b2, k),
        "v_common": osculation_boundary_check(v, b1, b2, k),
        "distance": gap.exact,
    }


# ------------------------------------------------------------------ kernel laws

def modulus_consistent(vals) -> bool:
    """All pairs satisfy |a_i - a_j| <= 2**-i + 2**-j.

    That is the pairwise intersection of the intervals [a_i -+ 2**-i], which on
    the line holds iff the largest lower end is at most the smallest upper end.
    """
    lo = max(a - dyadic(i) for i, a in enumerate(vals))
    hi = min(a + dyadic(i) for i, a in enumerate(vals))
    return lo <= hi


def _rand_rational(rng: np.random.Generator, scale: int = 100) -> Fraction:
    """Uniform-ish rational in [-scale, scale] with denominator below 2**12."""
    den = int(rng.integers(1, 1 << 12))
    return Fraction(int(rng.integers(-scale * den, scale * den + 1)), den)


def _random_creal(rng: np.random.Generator, depth: int = 2):
    if depth == 0 or rng.random() < 0.2:
        return from_rational(_rand_rational(rng, 4))
    a = _random_creal(rng, depth - 1)
    b = _random_creal(rng, depth - 1)
    op = int(rng.integers(0, 7))
    if op == 0:
        return R.add(a, b)
    if op == 1:
        return R.sub(a, b)
    if op == 2:
        return R.mul(a, b)
    if op == 3:
        return R.sqrt(R.creal_abs(a))
    if op == 4:
        return R.div(a, R.add(1, R.creal_abs(b)), 1)
    if op == 5:
        return R.plus_part(R.sub(a, b))
    return R.creal_max(a, R.neg(b))


def kernel_law_sweep(n: int, seed: int, top: int = 64) -> list[SuiteReport]:
    """Pairwise modulus, ring laws, parts identity and dichotomy soundness."""
    out = []

    t0 = time.perf_counter()
    rng = _rng(seed, 8, 1)
    rep = SuiteReport("creal_modulus", {"n": n, "seed": seed, "top": top})
    for idx in range(n):
        x = _random_creal(rng)
        rep.cases += 1
        if not modulus_consistent([x.approx(k) for k in range(top + 1)]):
            rep.fail(idx, "pairwise modulus violated")
    rep.elapsed = time.perf_counter() - t0
    out.append(rep)

    t0 = time.perf_counter()
    rng = _rng(seed, 8, 2)
    rep = SuiteReport("ring_laws", {"n": n, "seed": seed})
    for idx in range(n):
        a, b = _rand_rational(rng), _rand_rational(rng)
        k = int(rng.integers(0, 33))
        rep.cases += 1
        checks = ((R.add(a, b), a + b), (R.sub(a, b), a - b), (R.mul(a, b), a * b), (R.neg(a), -a))
        # route through non-folded operands as well, so the error bounds are exercised
        ia, ib = R.CReal(lambda j, a=a: a), R.CReal(lambda j, b=b: b)
        checks += ((R.add(ia, ib), a + b), (R.sub(ia, ib), a - b), (R.mul(ia, ib), a * b))
        for x, ref in checks:
            if abs(R.approx_to(x, k) - ref) > dyadic(k):
                rep.fail(idx, f"ring law off at k={k}")
                break
    rep.elapsed = time.perf_counter() - t0
    out.append(rep)

    t0 = time.perf_counter()
    rng = _rng(seed, 8, 3)
    rep = SuiteReport("parts_identity", {"n": n, "seed": seed})
    for idx in range(n):
        a = _rand_rational(rng)
        alpha = R.CReal(lambda j, a=a: a) if idx % 2 else from_rational(a)
        k = int(rng.integers(0, 33))
        rep.cases += 1
        lhs = R.add(R.plus_part(alpha), R.minus_part(alpha)).approx(k)
        if abs(lhs - R.creal_abs(alpha).approx(k)) > dyadic(k - 1):
            rep.fail(idx, f"a+ + a- != |a| at k={k}")
    rep.elapsed = time.perf_counter() - t0
    out.append(rep)

    t0 = time.perf_counter()
    rng = _rng(seed, 8, 4)
    rep = SuiteReport("dichotomy_soundness", {"n": n, "seed": seed})
    counts: Counter = Counter()
    for idx in range(n):
        a = _rand_rational(rng)
        gap = Fraction(int(rng.integers(1, 1 << 16)), 1 << int(rng.integers(0, 24)))
        b = a + gap + abs(_rand_rational(rng, 1)) * int(rng.integers(0, 2))
        # gamma near the decision boundary half of the time
        g = (a + b) / 2 + _rand_rational(rng, 1) * gap / 64 if idx % 2 else _rand_rational(rng)
        rep.cases += 1
        v = R.dichotomy(a, b, gap, g)
        counts[v.value] += 1
        if (v is Verdict.GAMMA_GT_ALPHA and not g > a) or (v is Verdict.GAMMA_LT_BETA and not g < b):
            rep.fail(idx, f"dichotomy verdict {v} unsound")
        x = abs(_rand_rational(rng, 1)) / int(rng.integers(1, 1 << 10))
        e = Fraction(int(rng.integers(1, 1 << 10)), 1 << int(rng.integers(0, 30)))
        p = R.pos_or_small(x, e)
        counts[p.value] += 1
        if (p is Verdict.POS and not x > 0) or (p is Verdict.SMALLER_THAN_E and not x < e):
            rep.fail(idx, f"pos_or_small verdict {p} unsound")
    rep.counts = dict(counts)
    rep.elapsed = time.perf_counter() - t0
    out.append(rep)
    return out
