from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from convexkernel.harness import make_adversarial
from convexkernel.reals import add, dyadic, from_rational, minus_part, plus_part
from convexkernel.space import Ball, NormKind, Vector, distance
from convexkernel.witnesses import (
    hull_common_points,
    linear_dependence_witness,
    metric_point,
    near_convex_point,
    osculation_boundary_check,
    osculation_common_point,
    unique_point_strict,
)

coord = st.fractions(min_value=-4, max_value=4, max_denominator=256)


# -- metric_point ----------------------------------------------------------

def test_metric_point_substitution():
    wp = metric_point(Vector.of(0), Vector.of(4), 1, 3)
    assert wp.point.approx(32) == (1,)
    assert wp.branch_trace == ["k=32:Pos"]


def test_metric_point_coincident():
    x = Vector.of(Fraction(1, 3), -2)
    wp = metric_point(x, x, 0, 0)
    for k in (0, 5, 40):
        assert all(abs(a - b) <= dyadic(k) for a, b in zip(wp.point.approx(k), x.approx(k)))
    assert all(t.endswith("SmallerThanE") for t in wp.branch_trace)


def test_metric_point_adversarial_stage_40():
    alpha = make_adversarial(40, 1)
    wp = metric_point(Vector.of(0), Vector((alpha,)), alpha, 0, k=64)
    z = wp.point.coords[0]
    assert [z.approx(k) for k in (0, 10, 37)] == [0, 0, 0]
    assert all(z.approx(k) == dyadic(40) for k in range(38, 65))


def test_metric_point_adversarial_zero_stream():
    alpha = make_adversarial(40, 0)
    wp = metric_point(Vector.of(0), Vector((alpha,)), alpha, 0, k=64)
    assert all(wp.point.coords[0].approx(k) == 0 for k in range(65))


@given(st.tuples(coord, coord), st.tuples(coord, coord),
       st.fractions(min_value=0, max_value=1, max_denominator=64),
       st.sampled_from([NormKind.P1, NormKind.P2, NormKind.PINF]))
def test_metric_point_distances(xs, ys, t, kind):
    x, y = Vector.of(*xs), Vector.of(*ys)
    rho = distance(x, y, kind)
    lam, mu = rho * t, rho * (1 - t)
    wp = metric_point(x, y, lam, mu, kind, k=20)
    k = 16
    assert abs(distance(wp.point, x, kind).approx(k) - lam.approx(k)) <= dyadic(k - 2)
    assert abs(distance(wp.point, y, kind).approx(k) - mu.approx(k)) <= dyadic(k - 2)


# -- near_convex_point -----------------------------------------------------

def test_near_point_fourth_case():
    wp = near_convex_point(Vector.of(0), Vector.of(1), Fraction(3, 5), Fraction(3, 5),
                           Fraction(1, 5))
    assert wp.point.approx(32) == (Fraction(1, 2),)
    assert wp.branch_trace[:2] == ["lambda:GammaGtAlpha", "mu:GammaGtAlpha"]


def test_near_point_coincident_endpoints():
    x = Vector.of(2, 3)
    wp = near_convex_point(x, x, 1, 1, Fraction(1, 2))
    assert wp.branch_trace[0] == "lambda:GammaLtBeta"
    assert wp.point.approx(20) == x.approx(20)


def test_near_point_open_branches():
    x, y = Vector.of(0), Vector.of(1)
    lam, mu = Fraction(2), Fraction(1, 4)
    wp = near_convex_point(x, y, lam, mu, Fraction(1, 4))
    z = wp.point.approx(40)[0]
    assert abs(z) < lam and abs(z - 1) < mu


def test_near_point_delegates_split_of_rho():
    seen = []

    def oracle(x, y, lam, mu, kind, k):
        seen.append(add(lam, mu))
        return metric_point(x, y, lam, mu, kind, k=k)

    x, y = Vector.of(0, 0), Vector.of(3, 4)
    near_convex_point(x, y, 3, 3, Fraction(1, 2), metric_oracle=oracle)
    assert len(seen) == 1
    assert abs(seen[0].approx(30) - 5) <= dyadic(30)


def test_near_point_rejects_bad_margin():
    with pytest.raises(ValueError):
        near_convex_point(Vector.of(0), Vector.of(1), 1, 1, 0)


@given(st.tuples(coord, coord), st.tuples(coord, coord),
       st.fractions(min_value=Fraction(1, 64), max_value=2, max_denominator=64),
       st.fractions(min_value=0, max_value=1, max_denominator=64),
       st.fractions(min_value=Fraction(1, 64), max_value=1, max_denominator=64))
def test_near_point_strict_bounds(xs, ys, extra, t, margin):
    x, y = Vector.of(*xs), Vector.of(*ys)
    rho = distance(x, y)
    rho_hi = rho.approx(30) + dyadic(30)
    # lam + mu = rho + gamma with gamma >= margin, lam, mu >= margin
    total = rho_hi + margin + extra
    lam = max(margin, total * t)
    mu = max(margin, total - lam)
    wp = near_convex_point(x, y, lam, mu, margin, k=24)
    k = 24
    assert distance(x, wp.point).approx(k) <= lam - margin / 4 + 3 * dyadic(k)
    assert distance(wp.point, y).approx(k) <= mu - margin / 4 + 3 * dyadic(k)


# -- osculation ------------------------------------------------------------

def test_osculation_closed_form():
    b1 = Ball(Vector.of(0), from_rational(1))
    b2 = Ball(Vector.of(3), from_rational(2))
    wp = osculation_common_point(b1, b2, positivity=3)
    assert wp.point.approx(32) == (1,)
    assert wp.branch_trace == ["closed-form"]
    assert osculation_common_point(b1, b2).point.approx(32) == (1,)


def test_osculation_zero_radii():
    c = Vector.of(Fraction(5, 7))
    b = Ball(c, from_rational(0))
    assert osculation_common_point(b, b).point.approx(30) == c.approx(30)


@pytest.mark.parametrize("sign", [-1, 0, 1])
def test_osculation_adversarial_balls(sign):
    alpha = make_adversarial(12, sign)
    b1 = Ball(Vector.of(0), minus_part(alpha))
    b2 = Ball(Vector((alpha,)), plus_part(alpha))
    wp = osculation_common_point(b1, b2, k=40)
    assert osculation_boundary_check(wp.point, b1, b2, 30)


def test_boundary_check_examples():
    b1 = Ball(Vector.of(0), from_rational(1))
    b2 = Ball(Vector.of(3), from_rational(2))
    assert osculation_boundary_check(Vector.of(1), b1, b2, 20)
    assert not osculation_boundary_check(Vector.of(0), b1, b2, 20)


def test_osculation_rejects_mixed_norms():
    b1 = Ball(Vector.of(0), from_rational(1), NormKind.P1)
    b2 = Ball(Vector.of(2), from_rational(1), NormKind.P2)
    with pytest.raises(ValueError):
        osculation_common_point(b1, b2)
    with pytest.raises(ValueError):
        osculation_common_point(b1, b1, positivity=0)


def test_hull_of_common_points():
    b1 = Ball(Vector.of(0, 0), from_rational(1), NormKind.PINF)
    b2 = Ball(Vector.of(2, 0), from_rational(1), NormKind.PINF)
    u, v = Vector.of(1, 1), Vector.of(1, -1)
    assert hull_common_points(u, v, b1, b2, 0) is u
    mid = hull_common_points(u, v, b1, b2, Fraction(1, 2))
    assert mid.approx(10) == (1, 0)
    for t in (Fraction(1, 7), Fraction(2, 3)):
        assert osculation_boundary_check(hull_common_points(u, v, b1, b2, t), b1, b2, 20)
    p = Ball(Vector.of(0, 0), from_rational(1))
    q = Ball(Vector.of(2, 0), from_rational(1))
    w = Vector.of(1, 0)
    assert hull_common_points(w, w, p, q, Fraction(1, 3)).approx(10) == (1, 0)


def test_unique_point_strict():
    assert unique_point_strict(Vector.of(0, 0), Vector.of(2, 0)).approx(10) == (1, 0)
    assert unique_point_strict(Vector.of(-1, 0), Vector.of(1, 0)).approx(10) == (0, 0)
    assert unique_point_strict(Vector.of(0, 0), Vector.of(0, 2)).approx(10) == (0, 1)


# -- linear dependence -----------------------------------------------------

@pytest.mark.parametrize("x, y, bound, lam, mu", [
    ((2, 0), (3, 0), 5, 3, 2),
    ((1, 0), (1, 0), 2, 1, 1),
    ((0, 0), (1, 0), 1, 1, 0),
])
def test_linear_dependence_examples(x, y, bound, lam, mu):
    w = linear_dependence_witness(Vector.of(*x), Vector.of(*y), bound)
    assert w.lam.approx(30) == lam and w.mu.approx(30) == mu
    lhs = Vector.of(*x).scale(w.lam.exact)
    rhs = Vector.of(*y).scale(w.mu.exact)
    assert lhs.exact_coords() == rhs.exact_coords()
    assert w.common_point.approx(30) == (0, 0)


def test_linear_dependence_nonzero_witness():
    w = linear_dependence_witness(Vector.of(0, 0), Vector.of(1, 0), 1)
    assert w.nonzero == "lambda" and w.lam.approx(20) > w.lower_bound
    w = linear_dependence_witness(Vector.of(4, 0), Vector.of(0, 0), 4)
    assert w.nonzero == "mu" and w.mu.approx(20) > w.lower_bound


def test_linear_dependence_inexact_norms():
    x, y = Vector.of(1, 1), Vector.of(2, 2)
    w = linear_dependence_witness(x, y, 4)
    k = 30
    for a, b in zip(x.scale(w.lam).approx(k), y.scale(w.mu).approx(k)):
        assert abs(a - b) <= 2 * dyadic(k)
    assert abs(w.lam.approx(k) - 2 * w.mu.approx(k)) <= 3 * dyadic(k)
