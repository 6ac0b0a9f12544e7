"""Independent reference computations.

Nothing here imports :mod:`fracops.quadrature` or :mod:`fracops.engine`: the
brute-force rule and the inner-product rule are fixed, non-adaptive and short
enough to check by eye.  Closed forms are worked out in
``docs/derivations.md``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .functions import FunctionHandle
from .operators import central_fractional, evaluate, OperatorSpec


@dataclass(frozen=True)
class Case:
    description: str
    expected: complex | float
    actual: complex | float
    tolerance: float
    passed: bool


@dataclass
class VerificationReport:
    suite: str
    cases: list[Case] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.cases)

    def add(self, description, expected, actual, tolerance, passed=None) -> Case:
        if passed is None:
            passed = abs(actual - expected) <= tolerance
        case = Case(description, expected, actual, float(tolerance), bool(passed))
        self.cases.append(case)
        return case

    def extend(self, other: "VerificationReport") -> None:
        self.cases.extend(other.cases)


def brute_force_integral(psi: Callable, alpha: float, lo: float = 1e-6, hi: float = 1e3,
                         points: int = 10**6, *, order: int | None = None,
                         limit: complex = 0.0,
                         oscillation: Sequence[tuple[complex, float]] = ()) -> complex:
    """Trapezoid rule for ``int psi(xi) xi**(-alpha-1) dxi`` on a geometric grid.

    The grid is uniform in ``log xi`` over ``[lo, hi]``.  Optional end
    corrections: ``order`` adds ``int_0^lo`` assuming ``psi ~ c xi**order``;
    ``limit`` and ``oscillation`` (pairs ``(a, nu)`` for ``a exp(i nu xi)``)
    add the leading asymptotic contribution of ``[hi, inf)``.
    """
    u = np.linspace(math.log(lo), math.log(hi), points)
    xi = np.exp(u)
    vals = np.asarray(psi(xi), dtype=complex) * xi ** (-alpha)
    du = u[1] - u[0]
    total = du * (vals.sum() - 0.5 * (vals[0] + vals[-1]))
    if order is not None:
        c = complex(np.asarray(psi(np.array([lo])), dtype=complex)[0]) / lo**order
        total += c * lo ** (order - alpha) / (order - alpha)
    total += limit * hi ** (-alpha) / alpha
    beta = alpha + 1.0
    for a, nu in oscillation:
        z = 1j * nu * hi
        total += -a * np.exp(z) * hi ** (-beta) / (1j * nu) * (1.0 - beta / z)
    return complex(total)


def _hermite(n: int, u):
    h0, h1 = np.ones_like(u), 2.0 * u
    if n == 0:
        return h0
    for m in range(1, n):
        h0, h1 = h1, 2.0 * u * h1 - 2.0 * m * h0
    return h1


def closed_form_reference(case_id: str, params: dict) -> complex:
    """Analytic value for one of the catalogued cases.

    ``lw_plus_exp``: ``lam, alpha, x``.  ``d1_plane_wave``,
    ``riesz_plane_wave``: ``omega, alpha, x`` (``riesz_plane_wave`` also
    takes ``kind="plane"|"cos"``).  ``feller_plane_wave``: ``omega, alpha,
    theta, x``.  ``ordinary_derivative``: ``k, sigma, x`` for
    ``exp(-(x/sigma)**2)``.
    """
    p = dict(params)
    if case_id == "lw_plus_exp":
        lam, a, x = p["lam"], p["alpha"], p["x"]
        return complex(lam**a * math.exp(lam * x))
    if case_id == "d1_plane_wave":
        w, a, x = p["omega"], p["alpha"], p["x"]
        return 1j * math.copysign(1.0, w) * abs(w) ** a * complex(np.exp(1j * w * x))
    if case_id == "riesz_plane_wave":
        w, a, x = p["omega"], p["alpha"], p["x"]
        if p.get("kind", "plane") == "cos":
            return complex(-abs(w) ** a * math.cos(w * x))
        return -abs(w) ** a * complex(np.exp(1j * w * x))
    if case_id == "feller_plane_wave":
        w, a, th, x = p["omega"], p["alpha"], p["theta"], p["x"]
        phase = np.exp(-1j * math.copysign(1.0, w) * th * math.pi / 2)
        return complex(-abs(w) ** a * phase * np.exp(1j * w * x))
    if case_id == "ordinary_derivative":
        k, s, x = int(p["k"]), p.get("sigma", 1.0), p["x"]
        u = x / s
        return complex((-1) ** k * s ** (-k) * _hermite(k, u) * math.exp(-u * u))
    raise DomainError(f"unknown closed-form case {case_id!r}")


LIMIT_TOLERANCE = 5e-3


def limit_check(k: int, f: FunctionHandle, x: float, epsilons: Sequence[float],
                tolerance: float = LIMIT_TOLERANCE) -> VerificationReport:
    """Compare ``central(k, k - eps)`` with ``f^(k)(x)``.

    Each case passes when the gap is at most ``tolerance * (1 + |f^(k)(x)|)``.
    ``details["rate"]`` is the least-squares slope of ``log gap`` against
    ``log eps`` (``None`` with fewer than two non-zero gaps).
    """
    rep = VerificationReport(f"limit k={k}")
    target = complex(np.asarray(f.derivative(k)(np.array([float(x)])))[0])
    tol = tolerance * (1.0 + abs(target))
    gaps = []
    for eps in epsilons:
        val = complex(central_fractional(k, k - eps, f, x, full_output=True).value)
        rep.add(f"k={k} eps={eps:g} x={x:g} {f.description}", target, val, tol)
        gaps.append((eps, abs(val - target)))
    pts = [(math.log(e), math.log(g)) for e, g in gaps if g > 0]
    rep.details["rate"] = float(np.polyfit(*zip(*pts), 1)[0]) if len(pts) >= 2 else None
    return rep


#: Fixed inner-product rule: composite trapezoid on ``[-20, 20]``.
INNER_GRID = np.linspace(-20.0, 20.0, 4001)
SYMMETRY_TOLERANCE = 1e-6


def _inner(u: np.ndarray, v: np.ndarray) -> complex:
    h = INNER_GRID[1] - INNER_GRID[0]
    w = np.full(INNER_GRID.shape, h)
    w[0] = w[-1] = 0.5 * h
    return complex(np.sum(w * np.conj(u) * v))


def _apply_on_grid(k: int, alpha: float, f: FunctionHandle) -> np.ndarray:
    spec = OperatorSpec("central", alpha, k=k)
    return np.array([complex(evaluate(spec, f, t, full_output=True).value) for t in INNER_GRID])


def symmetry_check(k: int, alpha: float, f: FunctionHandle, g: FunctionHandle,
                   tolerance: float = SYMMETRY_TOLERANCE) -> VerificationReport:
    """Measure ``sigma`` in ``<D f, g> = sigma <f, D g>``.

    ``details`` holds ``sigma`` (the sign with the smaller residual), both
    inner products, the residual and the norm product it is compared with.
    """
    fv, gv = f(INNER_GRID), g(INNER_GRID)
    lhs = _inner(_apply_on_grid(k, alpha, f), gv)
    rhs = _inner(fv, _apply_on_grid(k, alpha, g))
    sigma = min((1, -1), key=lambda s: abs(lhs - s * rhs))
    resid = abs(lhs - sigma * rhs)
    norms = math.sqrt(abs(_inner(fv, fv)) * abs(_inner(gv, gv)))
    rep = VerificationReport(f"symmetry k={k}")
    rep.add(f"k={k} alpha={alpha:g} <Df,g> vs {sigma:+d}<f,Dg> "
            f"({f.description}; {g.description})",
            sigma * rhs, lhs, tolerance * norms)
    rep.details.update(sigma=sigma, lhs=lhs, rhs=rhs, residual=resid, norm_product=norms)
    return rep
