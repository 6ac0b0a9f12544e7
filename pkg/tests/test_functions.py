import math

import numpy as np
import pytest

from fracops import DomainError, engine, parse_function
from fracops import functions as F

X = np.linspace(-2.5, 2.5, 11)

HANDLES = [
    F.gaussian(1.0), F.gaussian(0.7).shifted(0.3), F.lorentzian(1.3), F.plane_wave(1.7),
    F.cosine(0.8), F.sine(2.0), F.exp_growth(0.9), F.exp_decay(1.4), F.constant(2.5),
    F.lorentzian(1.0).rescaled(2.0) * -0.5,
]


def richardson_fd(f, x, h=1e-2):
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4 * d2 - d1) / 3


@pytest.mark.parametrize("f", HANDLES, ids=lambda f: f.description)
@pytest.mark.parametrize("j", [1, 2, 3])
def test_derivatives_against_finite_differences(f, j):
    lower = f.derivative(j - 1)
    fd = richardson_fd(lower, X)
    np.testing.assert_allclose(f.derivative(j)(X), fd, rtol=1e-6, atol=1e-7)


def test_gaussian_values():
    g = F.gaussian(2.0)
    np.testing.assert_allclose(g(X), np.exp(-(X / 2) ** 2), rtol=1e-15)
    u = X / 2
    np.testing.assert_allclose(g.derivative(2)(X), (4 * u * u - 2) / 4 * np.exp(-u * u),
                               rtol=1e-13, atol=1e-15)


def test_lorentzian_values():
    f = F.lorentzian(0.5)
    np.testing.assert_allclose(f(X), 1 / (1 + (X / 0.5) ** 2), rtol=1e-14)


@pytest.mark.skipif(not engine.HAVE_EXTENSION, reason="compiled extension not built")
@pytest.mark.parametrize("f", HANDLES, ids=lambda f: f.description)
@pytest.mark.parametrize("j", [0, 1, 4])
def test_compiled_catalog_matches_python(f, j):
    h = f.derivative(j)
    p = h.catalog
    got = engine._kernels.catalog_values(p.base, p.param, p.amplitude, p.scale, p.shift,
                                         p.deriv, np.ascontiguousarray(X))
    np.testing.assert_allclose(got, h(X), rtol=1e-12, atol=1e-14)


def test_affine_operations_stay_in_catalog():
    g = F.gaussian(1.0)
    for h in (g.shifted(1.0), g.rescaled(2.0), g * 3.0, 2 * g, g.derivative(2).shifted(-1)):
        assert h.catalog is not None
    np.testing.assert_allclose(g.shifted(1.0)(X), g(X - 1.0))
    np.testing.assert_allclose(g.rescaled(2.0)(X), g(2.0 * X))
    np.testing.assert_allclose(g.rescaled(2.0).shifted(0.5)(X), g(2.0 * (X - 0.5)))
    assert (g + g).catalog is None


def test_generic_handles():
    h = F.gaussian(1.0) - F.lorentzian(1.0) * 0.5
    np.testing.assert_allclose(h(X), F.gaussian(1.0)(X) - 0.5 * F.lorentzian(1.0)(X))
    np.testing.assert_allclose(h.derivative(1)(X),
                               F.gaussian(1.0).derivative(1)(X)
                               - 0.5 * F.lorentzian(1.0).derivative(1)(X))
    s = h.shifted(0.4).rescaled(1.5)
    np.testing.assert_allclose(s(X), h(1.5 * X - 0.4))
    np.testing.assert_allclose(s.derivative(1)(X), 1.5 * h.derivative(1)(1.5 * X - 0.4))


def test_spectrum_reproduces_oscillating_part():
    for f in (F.cosine(1.3).shifted(0.2), F.sine(0.7).rescaled(2.0) * 3.0,
              F.plane_wave(-2.0).derivative(2), F.constant(4.0)):
        rebuilt = sum(c * np.exp(1j * w * X) for c, w in f.spectrum)
        np.testing.assert_allclose(rebuilt, f(X), atol=1e-13)


def test_decay_classes():
    assert F.gaussian().decay_class == "schwartz"
    assert F.cosine().decay_class == "bounded_oscillatory"
    assert F.exp_growth().decay_class == "left_decaying"
    assert F.exp_decay().decay_class == "right_decaying"
    assert F.exp_growth().bounded_toward(-1) and not F.exp_growth().bounded_toward(1)


def test_parse_function():
    f = parse_function("gaussian:sigma=2,shift=1")
    np.testing.assert_allclose(f(X), np.exp(-((X - 1) / 2) ** 2))
    g = parse_function("exp_growth:lambda=0.5,amplitude=3")
    np.testing.assert_allclose(g(X), 3 * np.exp(0.5 * X))
    assert parse_function("cosine:w=3").catalog.param == 3.0


@pytest.mark.parametrize("text", ["nosuch", "gaussian:sigma", "gaussian:sigma=x",
                                  "gaussian:omega=1", "gaussian:sigma=-1", "exp_growth:lam=0"])
def test_parse_errors(text):
    with pytest.raises(DomainError):
        parse_function(text)


def test_missing_derivatives():
    h = F.FunctionHandle(evaluate=lambda x: x + 0j, description="id", decays_left=False,
                         decays_right=False)
    assert not h.has_derivatives
    with pytest.raises(DomainError):
        h.derivative(1)
    assert h.derivative(0) is h
    assert math.isclose(h(np.array([2.0]))[0].real, 2.0)
