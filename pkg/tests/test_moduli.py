from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from convexkernel.moduli import (
    CheckResult,
    ModulusCertificate,
    Source,
    base_modulus_euclidean,
    diameter_bound_check,
    extended_modulus,
    intersection_delta,
    midpoint_bound_check,
)
from convexkernel.reals import from_rational
from convexkernel.space import NormKind, Vector
from convexkernel.suites import lens_points, max_midpoint_norm_oracle, snap_vector

getcontext().prec = 60


def dec(q: Fraction) -> Decimal:
    return Decimal(q.numerator) / Decimal(q.denominator)


def ref_base(eps: Fraction) -> Decimal:
    return (1 - dec(eps) ** 2 / 4).sqrt()


# -- base modulus ----------------------------------------------------------

@pytest.mark.parametrize("eps", [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(3, 2)])
def test_base_is_tight_upper_bound(eps):
    q = base_modulus_euclidean(eps).q
    ref = ref_base(eps)
    assert dec(q) >= ref
    assert dec(q) - ref <= Decimal(2) ** -32


def test_base_values():
    assert float(base_modulus_euclidean(1).q) == pytest.approx(0.8660254, abs=1e-7)
    assert float(base_modulus_euclidean(Fraction(1, 2)).q) == pytest.approx(0.9682458, abs=1e-7)
    cert = base_modulus_euclidean(2)
    assert 0 <= cert.q < 1


def test_base_against_sampling_oracle():
    best, hits = max_midpoint_norm_oracle(1, 100_000, seed=3)
    assert hits > 10_000
    assert best <= float(base_modulus_euclidean(1).q)
    assert best > 0.86


def test_base_rejects_bad_eps():
    for eps in (0, -1, 5):
        with pytest.raises(ValueError):
            base_modulus_euclidean(eps)


# -- extended modulus ------------------------------------------------------

@pytest.mark.parametrize("eps", [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(3, 2),
                                 Fraction(6, 5), Fraction(4)])
def test_extended_formula_chain(eps):
    cert = extended_modulus(eps)
    qprime = base_modulus_euclidean(eps / 2).q
    delta = min(eps / 12, (1 - qprime) / 4, Fraction(1, 3))
    assert cert.param("qprime") == qprime
    assert cert.delta == delta
    assert cert.q == 1 - delta
    assert cert.source is Source.LEMMA1_EXTENDED


def test_extended_values():
    one = extended_modulus(1)
    assert float(one.param("qprime")) == pytest.approx(0.9682458, abs=1e-7)
    assert float(one.delta) == pytest.approx(0.0079385, abs=1e-7)
    six_fifths = extended_modulus(Fraction(6, 5))
    assert float(six_fifths.delta) == pytest.approx(0.0115152, abs=1e-7)
    assert float(six_fifths.q) == pytest.approx(0.9884848, abs=1e-7)
    assert float(extended_modulus(Fraction(1, 2)).delta) == pytest.approx(0.0019608, abs=1e-7)
    assert extended_modulus(4).delta == Fraction(1, 4)


@given(st.fractions(min_value=Fraction(1, 64), max_value=4, max_denominator=64),
       st.fractions(min_value=Fraction(1, 64), max_value=4, max_denominator=64))
def test_extended_monotone(a, b):
    lo, hi = min(a, b), max(a, b)
    assert extended_modulus(lo).delta <= extended_modulus(hi).delta


def test_extended_against_float_sampling():
    # u, v in random balls with |u - v| >= r: midpoint offset never exceeds q r
    q = float(extended_modulus(1).q)
    rng = np.random.default_rng(11)
    a = rng.standard_normal((200_000, 2))
    b = rng.standard_normal((200_000, 2))
    a *= (rng.random(len(a)) ** 0.5 / np.linalg.norm(a, axis=1))[:, None]
    b *= (rng.random(len(b)) ** 0.5 / np.linalg.norm(b, axis=1))[:, None]
    keep = np.linalg.norm(a - b, axis=1) >= 1
    mid = np.linalg.norm(0.5 * (a[keep] + b[keep]), axis=1)
    assert keep.sum() > 10_000
    assert mid.max() <= q


def test_certificate_validation():
    with pytest.raises(ValueError):
        ModulusCertificate(Fraction(1), Fraction(1), Fraction(0), Source.BASE_EUCLIDEAN)


def test_certificate_json():
    out = extended_modulus(1).to_json()
    assert set(out) == {"epsilon", "q", "delta", "source", "qprime"}
    assert out["source"] == "Lemma1Extended"


# -- midpoint check --------------------------------------------------------

def test_midpoint_check_examples():
    cert = extended_modulus(1)
    c = Vector.of(0, 0)
    one = from_rational(1)
    r = midpoint_bound_check(c, one, Vector.of(1, 0), Vector.of(-1, 0), cert, 16)
    assert r is CheckResult.SATISFIED
    r = midpoint_bound_check(c, one, Vector.of(1, 0), Vector.of(1, 0), cert, 16)
    assert r is CheckResult.PREMISE_NOT_MET
    r = midpoint_bound_check(c, from_rational(0), c, c, cert, 16)
    assert r is CheckResult.SATISFIED


def test_pinf_negative_control():
    cert = extended_modulus(1)
    r = midpoint_bound_check(Vector.of(0, 0), from_rational(1), Vector.of(1, 1),
                             Vector.of(1, -1), cert, 16, NormKind.PINF)
    assert r is CheckResult.VIOLATED


def test_midpoint_check_detects_bad_certificate():
    bogus = ModulusCertificate(Fraction(1), Fraction(1, 2), Fraction(1, 2), Source.BASE_EUCLIDEAN)
    u, v = Vector.of(Fraction(3, 5), Fraction(4, 5)), Vector.of(Fraction(3, 5), Fraction(-4, 5))
    r = midpoint_bound_check(Vector.of(0, 0), from_rational(1), u, v, bogus, 16)
    assert r is CheckResult.VIOLATED


# -- intersection delta ----------------------------------------------------

def test_lens_delta_examples():
    eps = Fraction(1, 2)
    delta, branch = intersection_delta(eps, Vector.of(0, 0), Vector.of(0, 0))
    assert (delta, branch) == (eps / 4, "SmallCenters")
    res = intersection_delta(eps, Vector.of(0, 0), Vector.of(1, 0))
    assert res.branch == "PositiveDistance"
    assert res.rho_lower == res.rho_upper == 1
    assert res.delta == 1 - extended_modulus(eps).q
    assert float(res.delta) == pytest.approx(0.0019608, abs=1e-7)
    big = intersection_delta(8, Vector.of(0, 0), Vector.of(1, 0))
    assert big.delta == 2


def test_lens_delta_inexact_rho_is_conservative():
    eps = Fraction(1, 4)
    res = intersection_delta(eps, Vector.of(0, 0), Vector.of(1, 1))
    assert dec(res.rho_lower) < Decimal(2).sqrt() < dec(res.rho_upper)
    assert res.rho_upper - res.rho_lower <= Fraction(1, 1 << 30)
    assert res.delta <= res.rho_lower * (1 - extended_modulus(eps / res.rho_upper).q)


# -- diameter check --------------------------------------------------------

def _pairs(c, r, d, s, count, seed):
    pts = lens_points(np.asarray(c, float), float(r), np.asarray(d, float), float(s),
                      count, np.random.default_rng(seed))
    vs = [snap_vector(p, 40) for p in pts]
    return [(vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs))]


def test_diameter_out_of_scope_is_vacuous():
    eps = Fraction(1, 2)
    delta = intersection_delta(eps, Vector.of(0, 0), Vector.of(1, 0)).delta
    pairs = [(Vector.of(Fraction(1, 2), Fraction(1, 2)), Vector.of(Fraction(1, 2), Fraction(-1, 2)))]
    rep = diameter_bound_check(Vector.of(0, 0), 1, Vector.of(1, 0), 1, eps, delta, pairs, 10)
    assert rep.passed and not rep.in_scope and rep.skipped == 1


def test_diameter_just_outside_delta():
    # r + s - rho = 1/500 exceeds delta ~ 0.00196, so the lens is not covered
    eps = Fraction(1, 2)
    delta = intersection_delta(eps, Vector.of(0, 0), Vector.of(1, 0)).delta
    r = Fraction(501, 1000)
    rep = diameter_bound_check(Vector.of(0, 0), r, Vector.of(1, 0), r, eps, delta, [], 10)
    assert not rep.in_scope


def test_diameter_in_scope_lens():
    eps = Fraction(1, 2)
    delta = intersection_delta(eps, Vector.of(0, 0), Vector.of(1, 0)).delta
    r = Fraction(1, 2) + delta / 3
    pairs = _pairs([0, 0], r, [1, 0], r, 30, seed=5)
    rep = diameter_bound_check(Vector.of(0, 0), r, Vector.of(1, 0), r, eps, delta, pairs, 10)
    assert rep.in_scope and rep.passed
    assert rep.admitted > 0
    assert rep.worst_distance < eps


def test_diameter_osculating_lens():
    r = Fraction(1, 2)
    pairs = [(Vector.of(r, 0), Vector.of(r, 0))]
    rep = diameter_bound_check(Vector.of(0, 0), r, Vector.of(1, 0), r, Fraction(1, 2),
                               Fraction(1, 500), pairs, 10)
    assert rep.passed and rep.admitted == 1 and rep.worst_distance <= Fraction(1, 256)


def test_diameter_flags_far_pair():
    # deliberately wrong delta: radii 1 around centres 1 apart, pair at distance 1
    pairs = [(Vector.of(Fraction(1, 2), Fraction(1, 2)), Vector.of(Fraction(1, 2), Fraction(-1, 2)))]
    rep = diameter_bound_check(Vector.of(0, 0), 1, Vector.of(1, 0), 1, Fraction(1, 4), 2, pairs, 10)
    assert rep.in_scope and not rep.passed and rep.failures == [0]
