import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracops import DomainError, build_stencil, apply_stencil, stencil_moment
from fracops.functions import constant, gaussian
from fracops.stencil import coefficient_rows


def poly(coeffs):
    """Handle-like callable for a real polynomial."""
    return lambda x: np.polyval(coeffs, np.asarray(x, dtype=float)) + 0j


@pytest.mark.parametrize("k", range(1, 9))
def test_moment_ladder(k):
    s = build_stencil(k)
    assert len(s.coefficients) == 2 * s.radius + 1
    for j in range(k):
        assert stencil_moment(s, j) == 0
    assert stencil_moment(s, k) == math.factorial(k)


@pytest.mark.parametrize("k, offsets, coeffs", [
    (1, (1, 0, -1), (Fraction(1, 2), 0, Fraction(-1, 2))),
    (2, (1, 0, -1), (1, -2, 1)),
    (3, (2, 1, 0, -1, -2), (Fraction(1, 2), -1, 0, 1, Fraction(-1, 2))),
    (4, (2, 1, 0, -1, -2), (1, -4, 6, -4, 1)),
])
def test_explicit_coefficients(k, offsets, coeffs):
    s = build_stencil(k)
    assert s.offsets == offsets
    assert s.coefficients == tuple(Fraction(c) for c in coeffs)
    assert all(isinstance(c, Fraction) for c in s.coefficients)


def test_odd_order_is_averaged_difference_of_even_one():
    # delta_1 applied to the (k-1)-fold half-step difference, expanded by hand for k=3
    d2 = dict(zip((1, 0, -1), (1, -2, 1)))
    comp = {}
    for o, c in d2.items():
        for step, w in ((1, Fraction(1, 2)), (-1, Fraction(-1, 2))):
            comp[o + step] = comp.get(o + step, 0) + w * c
    s = build_stencil(3)
    assert {o: c for o, c in zip(s.offsets, s.coefficients)} == {
        o: comp.get(o, 0) for o in s.offsets}


@pytest.mark.parametrize("k", [0, -1, 17, 2.5])
def test_rejects_bad_orders(k):
    with pytest.raises(DomainError):
        build_stencil(k)


def test_max_order_is_configurable():
    assert build_stencil(20, max_order=20).k == 20


def test_apply_examples():
    h = 0.3
    assert apply_stencil(build_stencil(2), constant(1.0), 0.7, h) == 0
    assert apply_stencil(build_stencil(1), poly([1, 0]), 0.0, h) == pytest.approx(h)
    assert apply_stencil(build_stencil(3), poly([1, 0, 0, 0]), 0.0, h) == pytest.approx(6 * h**3)


def test_apply_vectorized_over_step():
    steps = np.array([0.1, 0.2, 0.4])
    out = apply_stencil(build_stencil(2), poly([1, 0, 0]), 0.5, steps)
    np.testing.assert_allclose(out, 2 * steps**2, rtol=1e-12)


@pytest.mark.parametrize("k", range(1, 5))
def test_taylor_consistency(k):
    g = gaussian(1.0)
    x = 0.37
    exact = g.derivative(k)(np.array([x]))[0].real
    s = build_stencil(k)
    errs = [abs(apply_stencil(s, g, x, h) / h**k - exact) for h in (0.02, 0.01, 0.005)]
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    # central stencils: even powers only
    assert min(orders) > 1.9


def test_parity():
    g = gaussian(1.0)
    for k in (1, 3):
        assert abs(apply_stencil(build_stencil(k), g, 0.0, 0.4)) < 1e-15
    odd = gaussian(1.0).derivative(1)
    for k in (2, 4):
        assert abs(apply_stencil(build_stencil(k), odd, 0.0, 0.4)) < 1e-15


def test_coefficient_rows():
    rows = coefficient_rows(3)
    assert rows[0] == (3, 0, 2, 1, 2)
    assert [r[2] for r in rows] == [2, 1, 0, -1, -2]


@settings(max_examples=40, deadline=None)
@given(k=st.integers(1, 16))
def test_symmetry_property(k):
    s = build_stencil(k)
    c = s.coefficients
    sign = 1 if k % 2 == 0 else -1
    assert all(c[n] == sign * c[len(c) - 1 - n] for n in range(len(c)))
    assert sum(c) == 0
    assert s.is_symmetric == (k % 2 == 0)


@settings(max_examples=40, deadline=None)
@given(k=st.integers(1, 6), a=st.floats(-3, 3), b=st.floats(-3, 3),
       x=st.floats(-2, 2), h=st.floats(0.01, 1.0))
def test_linear_in_f(k, a, b, x, h):
    s = build_stencil(k)
    f, g = gaussian(1.0), gaussian(0.7).shifted(0.2)
    lhs = apply_stencil(s, lambda t: a * f(t) + b * g(t), x, h)
    rhs = a * apply_stencil(s, f, x, h) + b * apply_stencil(s, g, x, h)
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(a) + abs(b)) * 2**k
