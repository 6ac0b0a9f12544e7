"""Fractional derivative operators on the real line.

All operators are evaluated pointwise from singular integrals of shifted
function values; see :func:`fracops.engine.shift_integral`.  Each public
operator returns a complex number, or an :class:`IntegralEstimate` (value,
error estimate, evaluation count, convergence flag) with ``full_output=True``.
A :class:`QuadratureWarning` is issued when the requested tolerance was not
reached.
"""

from __future__ import annotations

import datetime as _dt
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .engine import get_backend, shift_integral
from .errors import DomainError, FracOpsError, QuadratureWarning
from .functions import FunctionHandle
from .normalization import prefactor
from .quadrature import IntegralEstimate, QuadratureConfig
from .stencil import build_stencil

FAMILIES = (
    "lw_plus", "lw_minus", "riesz", "feller", "feller_rotation", "central", "hyperspherical"
)

#: Offset used when an extended order lands exactly on a multiple of ``k``.
EXACT_MULTIPLE_OFFSET = 1e-6


@dataclass(frozen=True)
class OperatorSpec:
    family: str
    alpha: float
    k: int | None = None
    theta: float | None = None
    angles: tuple[float, ...] = ()
    unsafe_theta: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown operator family {self.family!r}")
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")
        fam = self.family
        if fam in ("feller", "feller_rotation") and self.theta is None:
            raise DomainError(f"{fam} needs theta")
        if fam == "central":
            if self.k is None or self.k < 1:
                raise DomainError("central needs an order k >= 1")
        if fam in ("lw_plus", "lw_minus", "feller", "feller_rotation", "hyperspherical"):
            _open(self.alpha, 0.0, 1.0, fam)
        if fam == "riesz":
            _open(self.alpha, 0.0, 2.0, fam)
        if fam == "feller":
            feller_coeffs(self.theta, self.alpha, unsafe=self.unsafe_theta)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["angles"] = list(self.angles)
        return d


@dataclass(frozen=True)
class FellerCoefficients:
    c_minus: float
    c_plus: float
    a1: float
    a2: float


@dataclass(frozen=True)
class DirectionWeights:
    n: int
    weights: tuple[float, ...]


@dataclass
class GridResult:
    operator: OperatorSpec
    points: list[float]
    values: list[complex]
    error_estimates: list[float]
    converged: list[bool]
    metadata: dict = field(default_factory=dict)

    @property
    def all_converged(self) -> bool:
        return all(self.converged)


def _open(alpha, lo, hi, name):
    if not (lo < alpha < hi):
        raise DomainError(f"{name}: alpha={alpha} outside ({lo:g}, {hi:g})")


def _combine(parts: Sequence[tuple[complex, IntegralEstimate]]) -> IntegralEstimate:
    value = 0j
    err = 0.0
    nev = 0
    conv = True
    for c, est in parts:
        if c == 0:
            continue
        value += c * est.value
        err += abs(c) * est.error_estimate
        nev += est.evaluations
        conv = conv and est.converged
    return IntegralEstimate(value, err, nev, conv)


def _finish(est: IntegralEstimate, full_output: bool, what: str):
    if not est.converged:
        warnings.warn(
            f"{what}: tolerance not reached (error estimate {est.error_estimate:.3g})",
            QuadratureWarning,
            stacklevel=3,
        )
    return est if full_output else est.value


# Liouville-Weyl -------------------------------------------------------------

def _lw(f, x, alpha, config, side):
    _open(alpha, 0.0, 1.0, "lw_plus" if side < 0 else "lw_minus")
    est = shift_integral(f, x, [1.0, -1.0], [0.0, float(side)], alpha, 1, config)
    return est.scaled(alpha / math.gamma(1.0 - alpha))


def lw_plus(f: FunctionHandle, x: float, alpha: float, config: QuadratureConfig | None = None,
            *, full_output: bool = False):
    """Left derivative ``alpha/Gamma(1-alpha) int_0^inf (f(x) - f(x-xi)) xi**(-alpha-1) dxi``."""
    return _finish(_lw(f, x, alpha, config, -1), full_output, "lw_plus")


def lw_minus(f: FunctionHandle, x: float, alpha: float, config: QuadratureConfig | None = None,
             *, full_output: bool = False):
    """Right derivative, the mirror of :func:`lw_plus` sampling ``f(x + xi)``."""
    return _finish(_lw(f, x, alpha, config, +1), full_output, "lw_minus")


# Riesz and the antisymmetric derivative ------------------------------------

def _riesz(f, x, alpha, config):
    _open(alpha, 0.0, 2.0, "riesz")
    est = shift_integral(f, x, [1.0, -2.0, 1.0], [1.0, 0.0, -1.0], alpha, 2, config, parity=True)
    c = math.gamma(1.0 + alpha) * math.sin(alpha * math.pi / 2) / math.pi
    return est.scaled(c)


def riesz(f: FunctionHandle, x: float, alpha: float, config: QuadratureConfig | None = None,
          *, full_output: bool = False):
    """Symmetric derivative from the second central difference, ``0 < alpha < 2``."""
    return _finish(_riesz(f, x, alpha, config), full_output, "riesz")


def _d1(f, x, alpha, config):
    _open(alpha, 0.0, 1.0, "antisymmetric derivative")
    est = shift_integral(f, x, [1.0, -1.0], [1.0, -1.0], alpha, 1, config, parity=True)
    c = math.gamma(1.0 + alpha) * math.cos(alpha * math.pi / 2) / math.pi
    return est.scaled(c)


def antisymmetric(f: FunctionHandle, x: float, alpha: float,
                  config: QuadratureConfig | None = None, *, full_output: bool = False):
    """``Gamma(1+a) cos(a pi/2)/pi int_0^inf (f(x+xi) - f(x-xi)) xi**(-a-1) dxi``.

    Equal to ``(lw_plus - lw_minus) / (2 sin(alpha pi / 2))``.
    """
    return _finish(_d1(f, x, alpha, config), full_output, "antisymmetric")


# Feller ----------------------------------------------------------------------

def feller_coeffs(theta: float, alpha: float, unsafe: bool = False) -> FellerCoefficients:
    """Skewness weights of the Feller derivative.

    ``c_plus = sin((alpha - theta) pi/2) / sin(alpha pi)`` and
    ``c_minus = sin((alpha + theta) pi/2) / sin(alpha pi)``; ``a1, a2`` are
    the weights of ``D+ - D-`` and ``D+ + D-``.
    """
    if not (0.0 < alpha < 2.0) or alpha == 1.0:
        raise DomainError(f"feller: alpha={alpha} must lie in (0, 2) and differ from 1")
    if not unsafe and abs(theta) > min(alpha, 2.0 - alpha):
        raise DomainError(
            f"feller: |theta|={abs(theta)} exceeds min(alpha, 2-alpha)={min(alpha, 2 - alpha)}"
            " (pass unsafe=True to override)"
        )
    s = math.sin(alpha * math.pi)
    c_plus = math.sin((alpha - theta) * math.pi / 2) / s
    c_minus = math.sin((alpha + theta) * math.pi / 2) / s
    return FellerCoefficients(
        c_minus=c_minus,
        c_plus=c_plus,
        a1=-(c_plus - c_minus) / 2,
        a2=-(c_plus + c_minus) / 2,
    )


def _feller(f, x, alpha, theta, config, unsafe):
    _open(alpha, 0.0, 1.0, "feller")
    c = feller_coeffs(theta, alpha, unsafe=unsafe)
    return _combine([(-c.c_plus, _lw(f, x, alpha, config, -1)),
                     (-c.c_minus, _lw(f, x, alpha, config, +1))])


def feller(f: FunctionHandle, x: float, alpha: float, theta: float,
           config: QuadratureConfig | None = None, *, unsafe_theta: bool = False,
           full_output: bool = False):
    """``-(c_plus D+ + c_minus D-)`` built from the one-sided derivatives."""
    return _finish(_feller(f, x, alpha, theta, config, unsafe_theta), full_output, "feller")


def _feller_rotation(f, x, alpha, theta, config):
    _open(alpha, 0.0, 1.0, "feller_rotation")
    s = math.sin(theta * math.pi / 2)
    c = math.cos(theta * math.pi / 2)
    parts = []
    if s != 0:
        parts.append((s, _d1(f, x, alpha, config)))
    if c != 0:
        parts.append((c, _riesz(f, x, alpha, config)))
    return _combine(parts)


def feller_rotation(f: FunctionHandle, x: float, alpha: float, theta: float,
                    config: QuadratureConfig | None = None, *, full_output: bool = False):
    """``sin(theta pi/2) * antisymmetric + cos(theta pi/2) * riesz``; any real theta."""
    return _finish(_feller_rotation(f, x, alpha, theta, config), full_output, "feller_rotation")


# Central-difference family ---------------------------------------------------

def _central(k, alpha, f, x, config):
    if not (0.0 < alpha < k):
        raise DomainError(f"central: alpha={alpha} outside (0, {k}); use extended_order")
    s = build_stencil(k)
    w, o = s.nonzero()
    est = shift_integral(f, x, w, o, alpha, k, config, parity=True)
    return est.scaled(prefactor(k, alpha).prefactor)


def central_fractional(k: int, alpha: float, f: FunctionHandle, x: float,
                       config: QuadratureConfig | None = None, *, full_output: bool = False):
    """Order-``k`` central-difference fractional derivative, ``0 < alpha < k``."""
    return _finish(_central(k, alpha, f, x, config), full_output, f"central(k={k})")


def split_order(k: int, alpha: float) -> tuple[int, float]:
    """``(n, beta)`` with ``alpha = n k + beta`` and ``0 < beta < k``.

    An exact multiple of ``k`` maps to ``beta = k - 1e-6``.
    """
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    n = math.floor(alpha / k)
    beta = alpha - n * k
    if beta <= 0:
        n -= 1
        beta = k - EXACT_MULTIPLE_OFFSET
    return n, beta


def _richardson_derivative(g, x, m, h0, levels):
    """Order-``m`` derivative of scalar ``g`` at ``x`` by central differences.

    Uses the order-``m`` central stencil with steps ``h0 / 2**i`` and
    eliminates the even powers of the step.
    """
    s = build_stencil(m)
    w, o = s.nonzero()
    rows = []
    for i in range(levels):
        h = h0 / 2**i
        d = sum(wj * g(x + oj * h) for wj, oj in zip(w, o)) / h**m
        row = [d]
        for j in range(1, i + 1):
            fac = 4.0**j
            row.append(row[j - 1] + (row[j - 1] - rows[-1][j - 1]) / (fac - 1.0))
        rows.append(row)
    best = rows[-1][-1]
    err = abs(best - rows[-2][-2]) if levels > 1 else float("inf")
    return best, err


def _extended(k, alpha, f, x, config, strategy, h0, levels):
    n, beta = split_order(k, alpha)
    if n == 0:
        return _central(k, beta, f, x, config)
    m = n * k
    if strategy == "auto":
        strategy = "derivative" if f.has_derivatives else "finite_difference"
    if strategy == "derivative":
        return _central(k, beta, f.derivative(m), x, config)
    if strategy != "finite_difference":
        raise DomainError(f"unknown strategy {strategy!r}")
    cfg = config or QuadratureConfig()
    inner = QuadratureConfig(
        rel_tol=max(cfg.rel_tol * 1e-3, 1e-13), abs_tol=cfg.abs_tol * 1e-3,
        split_point=cfg.split_point, truncation=cfg.truncation,
        max_subdivisions=max(cfg.max_subdivisions, 200), zero_floor=cfg.zero_floor,
    )
    evals = [0]
    conv = [True]

    def g(t):
        est = _central(k, beta, f, t, inner)
        evals[0] += est.evaluations
        conv[0] = conv[0] and est.converged
        return est.value

    value, err = _richardson_derivative(g, x, m, h0, levels)
    return IntegralEstimate(value, err, evals[0], conv[0])


def extended_order(k: int, alpha: float, f: FunctionHandle, x: float,
                   config: QuadratureConfig | None = None, *, strategy: str = "auto",
                   h0: float = 0.1, levels: int = 4, full_output: bool = False):
    """Central-difference derivative of any order ``alpha > 0``.

    Writes ``alpha = n k + beta`` and applies ``d^(nk)/dx^(nk)`` either to
    ``f`` itself (``strategy="derivative"``, needs analytic derivatives) or to
    the computed ``x -> central(k, beta, f, x)`` by Richardson-extrapolated
    central differences (``strategy="finite_difference"``).
    """
    est = _extended(k, alpha, f, x, config, strategy, h0, levels)
    return _finish(est, full_output, f"extended_order(k={k})")


# Hyperspherical combination ----------------------------------------------------

def hyperspherical_weights(angles: Sequence[float]) -> DirectionWeights:
    """Direction cosines of the unit vector with angles ``theta_1..theta_{n-1}``.

    ``x_1 = cos(theta_{n-1})``, ``x_2 = sin(theta_{n-1}) cos(theta_{n-2})``, ...,
    ``x_n = sin(theta_{n-1}) ... sin(theta_1)``.
    """
    th = [float(a) for a in angles]
    n = len(th) + 1
    out = []
    prod = 1.0
    for i in range(1, n):
        ang = th[n - i - 1]  # theta_{n-i}
        out.append(prod * math.cos(ang))
        prod *= math.sin(ang)
    out.append(prod)
    return DirectionWeights(n=n, weights=tuple(out))


def _hyper(angles, alpha, f, x, config):
    _open(alpha, 0.0, 1.0, "hyperspherical")
    dw = hyperspherical_weights(angles)
    return _combine([(wk, _central(k, alpha, f, x, config))
                     for k, wk in enumerate(dw.weights, start=1) if wk != 0])


def hyperspherical_apply(angles: Sequence[float], alpha: float, f: FunctionHandle, x: float,
                         config: QuadratureConfig | None = None, *, full_output: bool = False):
    """``sum_k x_k * central(k, alpha)`` over the direction cosines of ``angles``."""
    return _finish(_hyper(angles, alpha, f, x, config), full_output, "hyperspherical")


# Dispatch --------------------------------------------------------------------

def _estimate(spec: OperatorSpec, f, x, config) -> IntegralEstimate:
    fam = spec.family
    if fam == "lw_plus":
        return _lw(f, x, spec.alpha, config, -1)
    if fam == "lw_minus":
        return _lw(f, x, spec.alpha, config, +1)
    if fam == "riesz":
        return _riesz(f, x, spec.alpha, config)
    if fam == "feller":
        return _feller(f, x, spec.alpha, spec.theta, config, spec.unsafe_theta)
    if fam == "feller_rotation":
        return _feller_rotation(f, x, spec.alpha, spec.theta, config)
    if fam == "central":
        return _extended(spec.k, spec.alpha, f, x, config, "auto", 0.1, 4)
    return _hyper(spec.angles, spec.alpha, f, x, config)


def evaluate(spec: OperatorSpec, f: FunctionHandle, x: float,
             config: QuadratureConfig | None = None, *, full_output: bool = False):
    """Apply the operator described by ``spec`` at one point."""
    return _finish(_estimate(spec, f, x, config), full_output, spec.family)


def grid_eval(spec: OperatorSpec, f: FunctionHandle, grid: Sequence[float],
              config: QuadratureConfig | None = None) -> GridResult:
    """Evaluate at every grid point; failures are recorded, not raised."""
    pts = [float(t) for t in grid]
    if not all(math.isfinite(t) for t in pts):
        raise DomainError("grid points must be finite")
    if any(b < a for a, b in zip(pts, pts[1:])):
        raise DomainError("grid must be sorted")
    config = config or QuadratureConfig()
    values, errs, conv, failures = [], [], [], {}
    for i, t in enumerate(pts):
        try:
            est = _estimate(spec, f, t, config)
        except FracOpsError as exc:
            values.append(complex(math.nan, math.nan))
            errs.append(math.inf)
            conv.append(False)
            failures[i] = str(exc)
            continue
        values.append(complex(est.value))
        errs.append(float(est.error_estimate))
        conv.append(bool(est.converged))
    meta = {
        "function": f.description,
        "config": asdict(config),
        "backend": get_backend() if f.catalog is not None else "python",
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    if failures:
        meta["failures"] = failures
    return GridResult(spec, pts, values, errs, conv, meta)

