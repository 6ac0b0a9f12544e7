import math

import numpy as np
import pytest

import fracops as fo
from fracops import DomainError
from fracops.oracle import (
    VerificationReport,
    brute_force_integral,
    closed_form_reference,
    limit_check,
    symmetry_check,
)


def test_brute_force_closed_forms():
    # int (1 - e^-t) t^(-a-1) = Gamma(1-a)/a ; int (1 - cos t) t^(-a-1) = Gamma(1-a) cos(a pi/2)/a
    a = 0.5
    g = math.gamma(1 - a) / a
    v = brute_force_integral(lambda t: -np.expm1(-t), a, order=1, limit=1.0)
    assert abs(v - g) <= 1e-8 * g
    v = brute_force_integral(lambda t: 1 - np.cos(t), a, order=2, limit=1.0,
                             oscillation=[(-0.5, 1.0), (-0.5, -1.0)])
    assert abs(v - g * math.cos(a * math.pi / 2)) <= 1e-6


def test_brute_force_agrees_with_adaptive():
    from fracops.quadrature import QuadratureConfig, singular_integral
    psi = lambda t: t**3 * np.exp(-t)
    ref = math.gamma(3 - 1.4)
    assert abs(brute_force_integral(psi, 1.4, order=3) - ref) <= 1e-8
    est = singular_integral(psi, 1.4, QuadratureConfig(near_zero_order=3))
    assert abs(est.value - ref) <= 1e-9


@pytest.mark.parametrize("case, params, want", [
    ("lw_plus_exp", dict(lam=2.0, alpha=0.5, x=0.0), math.sqrt(2)),
    ("lw_plus_exp", dict(lam=1.0, alpha=0.25, x=1.0), math.e),
    ("d1_plane_wave", dict(omega=-4.0, alpha=0.5, x=0.0), -2j),
    ("riesz_plane_wave", dict(omega=4.0, alpha=0.5, x=0.0), -2.0),
    ("riesz_plane_wave", dict(omega=1.0, alpha=0.5, x=math.pi, kind="cos"), 1.0),
    ("feller_plane_wave", dict(omega=1.0, alpha=0.5, theta=1.0, x=0.0), 1j),
    ("feller_plane_wave", dict(omega=-1.0, alpha=0.5, theta=0.0, x=0.0), -1.0),
    ("ordinary_derivative", dict(k=1, x=0.5), -math.exp(-0.25)),
    ("ordinary_derivative", dict(k=2, x=0.0), -2.0),
    ("ordinary_derivative", dict(k=4, sigma=2.0, x=0.0), 12 / 16),
])
def test_closed_form_reference(case, params, want):
    assert closed_form_reference(case, params) == pytest.approx(want, rel=1e-14, abs=1e-15)


def test_closed_form_derivatives_match_catalog():
    for k in range(1, 6):
        for x in (-0.7, 0.3, 1.9):
            d = fo.gaussian(1.3).derivative(k)(np.array([x]))[0]
            assert closed_form_reference("ordinary_derivative", dict(k=k, sigma=1.3, x=x)) == \
                pytest.approx(d, rel=1e-12, abs=1e-14)


def test_closed_form_unknown():
    with pytest.raises(DomainError):
        closed_form_reference("nope", {})


def test_report():
    r = VerificationReport("x")
    r.add("a", 1.0, 1.0 + 1e-9, 1e-8)
    assert r.overall_pass
    r.add("b", 1.0, 2.0, 1e-8)
    assert not r.overall_pass and [c.passed for c in r.cases] == [True, False]
    r.add("c", 0, 0, 0, passed=False)
    other = VerificationReport("y")
    other.extend(r)
    assert len(other.cases) == 3


def test_limit_check_examples():
    rep = limit_check(1, fo.gaussian(1.0), 0.7, [1e-2, 1e-3])
    assert rep.overall_pass
    assert 0.8 <= rep.details["rate"] <= 1.2
    rep = limit_check(2, fo.cosine(1.0), 0.0, [1e-3])
    assert rep.overall_pass and rep.details["rate"] is None
    assert rep.cases[0].expected == pytest.approx(-1.0)


def test_limit_check_linear_function_vanishes():
    # sin(eps x) / eps is x up to O(eps**2)
    f = fo.sine(1e-4) * 1e4
    rep = limit_check(2, f, 0.0, [1e-3])
    assert abs(rep.cases[0].actual) <= 1e-5 and rep.overall_pass


def test_symmetry_check_signs():
    g, h = fo.gaussian(1.0), fo.gaussian(1.2).shifted(0.5)
    rep = symmetry_check(2, 1.2, g, h)
    assert rep.overall_pass and rep.details["sigma"] == 1
    rep = symmetry_check(1, 0.5, g.shifted(0.3), h)
    assert rep.overall_pass and rep.details["sigma"] == -1
    assert rep.details["residual"] <= 1e-6 * rep.details["norm_product"]


def test_symmetry_check_odd_order_same_function():
    g = fo.gaussian(1.0).shifted(0.2)
    rep = symmetry_check(3, 1.8, g, g)
    assert abs(rep.details["lhs"]) <= 1e-6 * rep.details["norm_product"]


def test_brute_force_zero_and_truncation():
    assert brute_force_integral(lambda t: np.zeros_like(t), 0.5) == 0
    # without end corrections the rule is the truncated integral over [lo, hi]
    bare = brute_force_integral(lambda t: -np.expm1(-t), 0.5)
    assert abs(bare - (2 * math.sqrt(math.pi) - 2 * 1e3**-0.5 - 2 * 1e-6**0.5)) <= 1e-6
