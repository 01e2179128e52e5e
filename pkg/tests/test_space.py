from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from convexkernel.harness import make_adversarial
from convexkernel.reals import add, dyadic, from_rational
from convexkernel.space import (
    Ball,
    Membership,
    NormKind,
    Segment,
    Vector,
    distance,
    hull_point,
    in_ball,
    midpoint,
    norm,
)

getcontext().prec = 60

coord = st.fractions(min_value=-50, max_value=50, max_denominator=1 << 10)
vec2 = st.tuples(coord, coord).map(lambda t: Vector.of(*t))
kinds = st.sampled_from(list(NormKind))


def test_norm_examples():
    assert norm(Vector.of(3, 4)).exact == 5
    assert norm(Vector.of(1, -1), NormKind.P1).exact == 2
    assert norm(Vector.of(1, -1), NormKind.PINF).exact == 1


def test_sqrt2_norm_against_decimal_oracle():
    a = norm(Vector.of(1, 1)).approx(10)
    assert abs(Decimal(a.numerator) / a.denominator - Decimal(2).sqrt()) <= Decimal(1) / 1024


def test_distance_examples():
    x = Vector.of(Fraction(1, 3), 2)
    assert distance(x, x).approx(20) == 0
    assert distance(Vector.of(0, 0), Vector.of(3, 4)).exact == 5
    alpha = make_adversarial(6, -1)
    d = distance(Vector.of(0), Vector((alpha,)))
    assert d.approx(30) == dyadic(6)


def test_midpoint_examples():
    assert midpoint(Vector.of(0, 0), Vector.of(2, 0)).exact_coords() == (1, 0)
    u = Vector.of(Fraction(1, 7), 3)
    assert midpoint(u, u).exact_coords() == u.exact_coords()
    assert midpoint(Vector.of(1, 0), Vector.of(0, 1)).exact_coords() == (Fraction(1, 2),) * 2


def test_hull_point_examples():
    seg = Segment(Vector.of(-1), Vector.of(1))
    assert hull_point(seg, 0) is seg.endpoint_u
    assert hull_point(seg, 1) is seg.endpoint_v
    assert hull_point(seg, Fraction(3, 4)).exact_coords() == (Fraction(1, 2),)
    with pytest.raises(ValueError):
        hull_point(seg, 2)


def test_in_ball_examples():
    unit = Ball(Vector.of(0, 0), from_rational(1))
    tol = Fraction(1, 8)
    assert in_ball(Vector.of(0, 0), unit, tol) is Membership.INSIDE
    assert in_ball(Vector.of(2, 0), unit, tol) is Membership.OUTSIDE
    assert in_ball(Vector.of(1, 0), unit, tol) is Membership.BOUNDARY_INDETERMINATE


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        distance(Vector.of(1), Vector.of(1, 2))


def test_ball_rejects_negative_radius():
    b = Ball(Vector.of(0), from_rational(-1))
    assert b.radius.approx(10) <= dyadic(10)


def test_vector_json_round_trip():
    v = Vector.of(Fraction(-3, 7), 5)
    data = v.to_json()
    assert data == {"dim": 2, "coords": ["-3/7", "5/1"]}
    assert Vector.from_json(data).exact_coords() == v.exact_coords()
    b = Ball(v, from_rational(Fraction(1, 2)), NormKind.PINF)
    back = Ball.from_json(b.to_json())
    assert back.norm is NormKind.PINF and back.radius.exact == Fraction(1, 2)


@given(vec2, vec2, kinds)
def test_triangle_inequality(x, y, kind):
    k = 20
    lhs = norm(x + y, kind).approx(k)
    rhs = add(norm(x, kind), norm(y, kind)).approx(k)
    assert lhs <= rhs + 2 * dyadic(k)


@given(vec2, coord, kinds)
def test_homogeneity(x, s, kind):
    k = 20
    lhs = norm(x.scale(s), kind).approx(k)
    rhs = abs(s) * norm(x, kind).approx(k + 8)
    assert abs(lhs - rhs) <= dyadic(k) + abs(s) * dyadic(k + 8)


@given(vec2, vec2)
def test_parallelogram_law(x, y):
    # exact for P2: squares of norms are rational
    def sq(v):
        return sum(c * c for c in v.exact_coords())

    assert sq(x + y) + sq(x - y) == 2 * sq(x) + 2 * sq(y)
    k = 16
    n = norm(x + y).approx(k)
    assert abs(n * n - sq(x + y)) <= 2 * dyadic(k) * (abs(n) + 1)


@given(vec2, vec2, st.fractions(min_value=0, max_value=1, max_denominator=64))
def test_hull_point_distances(u, v, t):
    p = hull_point(Segment(u, v), t)
    k = 18
    d = distance(u, v).approx(k)
    assert abs(distance(u, p).approx(k) - t * d) <= 3 * dyadic(k)
