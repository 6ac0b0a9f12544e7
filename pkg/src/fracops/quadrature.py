"""Improper integrals ``int_0^inf psi(xi) xi**(-alpha-1) dxi``.

``psi`` is expected to vanish like ``xi**k`` at the origin (``k`` is the
declared ``near_zero_order``) and to approach a known constant at infinity,
possibly plus oscillating exponentials and a decaying remainder.

The half line is covered by

* a near-origin piece ``[0, xi_lo]`` integrated from a two-point fit
  ``psi(xi) / xi**k ~ c0 + c1 xi`` (or ``c0 + c2 xi**2`` when the expansion is
  even), checked against the same fit one halving closer to the origin;
* geometric panels ``[xi_lo, xi_hi]`` handled by Gauss-Kronrod 10/21 with
  bisection;
* a far piece ``[xi_hi, inf)``: the limit constant is integrated exactly,
  oscillating components through their asymptotic expansion, and the decaying
  remainder is bounded by ``max|r| xi_hi**-alpha / alpha`` from probes.

All three pieces compete in one global error budget; whichever carries the
largest error is refined next (bisect a panel, halve ``xi_lo`` or double
``xi_hi``).  The compiled kernel in :mod:`fracops._kernels` follows the same
steps.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, TailBoundError

# Gauss-Kronrod 21-point nodes on [-1, 1] (QUADPACK qk21); the 10-point Gauss
# rule uses the odd-indexed nodes.
GK_NODES = np.array([
    0.9956571630258081, 0.9739065285171717, 0.9301574913557082,
    0.8650633666889845, 0.7808177265864169, 0.6794095682990244,
    0.5627571346686047, 0.4333953941292472, 0.2943928627014602,
    0.14887433898163122, 0.0, -0.14887433898163122, -0.2943928627014602,
    -0.4333953941292472, -0.5627571346686047, -0.6794095682990244,
    -0.7808177265864169, -0.8650633666889845, -0.9301574913557082,
    -0.9739065285171717, -0.9956571630258081,
])
GK_KRONROD_WEIGHTS = np.array([
    0.011694638867371874, 0.032558162307964725, 0.054755896574351995,
    0.07503967481091996, 0.0931254545836976, 0.10938715880229764,
    0.12349197626206584, 0.13470921731147334, 0.14277593857706009,
    0.14773910490133849, 0.1494455540029169, 0.14773910490133849,
    0.14277593857706009, 0.13470921731147334, 0.12349197626206584,
    0.10938715880229764, 0.0931254545836976, 0.07503967481091996,
    0.054755896574351995, 0.032558162307964725, 0.011694638867371874,
])
GK_GAUSS_WEIGHTS = np.zeros(21)
GK_GAUSS_WEIGHTS[1::2] = [
    0.06667134430868714, 0.14945134915058053, 0.21908636251598224,
    0.26926671930999674, 0.2955242247147533, 0.2955242247147533,
    0.26926671930999674, 0.21908636251598224, 0.14945134915058053,
    0.06667134430868714,
]

#: Minimum ``|nu| * xi_hi`` before the asymptotic oscillatory tail is trusted.
OSC_MIN_PHASE = 32.0
#: ``xi_hi`` never exceeds ``split_point * 2**MAX_DOUBLINGS``.
MAX_DOUBLINGS = 60
#: Number of probes ``xi_hi * 2**m`` used to bound the decaying remainder.
N_PROBES = 4
#: Default near-origin floor is ``NEAR_ZERO_SIGNAL**(1/k)``: below it the
#: stencil sum loses more than about half the available digits.
NEAR_ZERO_SIGNAL = 1e-7


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and tuning knobs for :func:`singular_integral`.

    ``truncation`` is the initial far cut ``xi_hi``; ``None`` picks one from
    the split point and the tail model.  ``near_zero_step`` is 2 when
    ``psi(xi) / xi**k`` is even in ``xi`` (central stencils), else 1.
    ``zero_floor`` bounds how close to the origin panels are placed; ``None``
    uses ``1e-7**(1/k)``.
    ``max_subdivisions`` limits panel bisections only.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    split_point: float = 1.0
    truncation: float | None = None
    max_subdivisions: int = 60
    near_zero_order: int = 1
    near_zero_step: int = 1
    zero_floor: float | None = None

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if not self.abs_tol >= 0:
            raise DomainError("abs_tol must be non-negative")
        if not self.split_point > 0:
            raise DomainError("split_point must be positive")
        if self.truncation is not None and not self.truncation > self.split_point:
            raise DomainError("truncation must exceed split_point")
        if self.near_zero_order < 1:
            raise DomainError("near_zero_order must be >= 1")
        if self.near_zero_step not in (1, 2):
            raise DomainError("near_zero_step must be 1 or 2")
        if self.max_subdivisions < 0:
            raise DomainError("max_subdivisions must be non-negative")

    @property
    def floor(self) -> float:
        if self.zero_floor is not None:
            return self.zero_floor
        return NEAR_ZERO_SIGNAL ** (1.0 / self.near_zero_order)


@dataclass(frozen=True)
class TailModel:
    """Behaviour of ``psi`` for large ``xi``.

    ``psi(xi) = limit + sum_j amplitudes[j] * exp(1j * frequencies[j] * xi) + r(xi)``
    where ``r`` decays monotonically beyond ``min_truncation``.
    """

    limit: complex = 0.0
    amplitudes: tuple[complex, ...] = ()
    frequencies: tuple[float, ...] = ()
    min_truncation: float = 0.0

    def __post_init__(self):
        if len(self.amplitudes) != len(self.frequencies):
            raise DomainError("amplitudes and frequencies differ in length")
        if any(f == 0.0 for f in self.frequencies):
            raise DomainError("zero frequencies belong in the limit constant")

    def oscillation(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.zeros(xi.shape, dtype=complex)
        for a, nu in zip(self.amplitudes, self.frequencies):
            out += a * np.exp(1j * nu * xi)
        return out


@dataclass
class IntegralEstimate:
    value: complex
    error_estimate: float
    evaluations: int
    converged: bool

    def scaled(self, c) -> "IntegralEstimate":
        return IntegralEstimate(self.value * c, self.error_estimate * abs(c),
                                self.evaluations, self.converged)


def osc_tail(nu: float, beta: float, xi: float) -> tuple[complex, float]:
    """Asymptotic ``int_xi^inf exp(i nu t) t**-beta dt`` and an error bound.

    Repeated integration by parts gives
    ``-exp(i nu xi) xi**-beta / (i nu) * sum_m (beta)_m (i nu xi)**-m``;
    the remainder after ``M`` terms is at most twice the first omitted term.
    """
    z = 1j * nu * xi
    term = 1.0 + 0j
    total = term
    m = 0
    while True:
        nxt = term * (beta + m) / z
        if abs(nxt) >= abs(term) or abs(nxt) < 1e-17 * abs(total) or m >= 60:
            bound = 2.0 * abs(nxt)
            break
        total += nxt
        term = nxt
        m += 1
    pref = -np.exp(1j * nu * xi) * xi ** (-beta) / (1j * nu)
    return complex(pref * total), float(abs(pref) * bound)


def _eval(psi: Callable, xi: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(psi(xi), dtype=complex)
    except TypeError:
        out = None
    if out is None or out.shape != xi.shape:
        if out is not None and out.ndim == 0:
            return np.full(xi.shape, complex(out))
        out = np.array([complex(psi(float(t))) for t in xi.ravel()]).reshape(xi.shape)
    return out


class _Integrator:
    """State of one adaptive evaluation (single use)."""

    def __init__(self, psi, alpha, config: QuadratureConfig, tail: TailModel):
        self.psi = psi
        self.alpha = alpha
        self.cfg = config
        self.tail = tail
        self.k = config.near_zero_order
        self.nevals = 0

    def f(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        self.nevals += xi.size
        return _eval(self.psi, xi)

    def panel(self, a: float, b: float) -> tuple[complex, float]:
        c = 0.5 * (a + b)
        h = 0.5 * (b - a)
        xi = c + h * GK_NODES
        vals = self.f(xi) * xi ** (-self.alpha - 1.0)
        k21 = h * np.dot(GK_KRONROD_WEIGHTS, vals)
        g10 = h * np.dot(GK_GAUSS_WEIGHTS, vals)
        return complex(k21), float(abs(k21 - g10))

    def _fit(self, lo: float) -> complex:
        """Integral over ``[0, lo]`` of ``c0 + c1 u + c2 u**2``, ``u = xi**step``.

        The model for ``psi / xi**k`` interpolates at ``lo``, ``lo/2``, ``lo/4``.
        """
        k, a, st = self.k, self.alpha, self.cfg.near_zero_step
        t = np.array([lo, 0.5 * lo, 0.25 * lo])
        y0, y1, y2 = self.f(t) / t**k
        r = 0.5**st
        # Newton form in s = (xi / lo)**step on the nodes 1, r, r**2
        f01 = (y1 - y0) / (r - 1.0)
        f012 = ((y2 - y1) / (r * r - r) - f01) / (r * r - 1.0)
        d0 = y0 - f01 + f012 * r
        d1 = f01 - f012 * (1.0 + r)
        return complex(lo ** (k - a) * (d0 / (k - a) + d1 / (k + st - a) + f012 / (k + 2 * st - a)))

    def near(self, lo: float) -> tuple[complex, float, tuple]:
        """Value over ``[0, lo]`` from the model at ``lo/2`` plus one panel.

        The error is the disagreement with the model fitted at ``lo``.
        """
        pv, pe = self.panel(0.5 * lo, lo)
        value = self._fit(0.5 * lo) + pv
        err = abs(self._fit(lo) - value) + pe
        return value, float(err), (0.5 * lo, lo, pv, pe)

    def far(self, hi: float) -> tuple[complex, float]:
        a, t = self.alpha, self.tail
        value = t.limit * hi ** (-a) / a
        err = 0.0
        for amp, nu in zip(t.amplitudes, t.frequencies):
            v, e = osc_tail(nu, a + 1.0, hi)
            value += amp * v
            err += abs(amp) * e
        probes = hi * 2.0 ** np.arange(N_PROBES)
        r = self.f(probes) - t.limit - t.oscillation(probes)
        err += float(np.max(np.abs(r))) * hi ** (-a) / a
        return complex(value), err

    def run(self) -> IntegralEstimate:
        cfg, tail = self.cfg, self.tail
        delta = cfg.split_point
        floor = cfg.floor

        lo = delta / 8.0
        if lo < floor:
            lo = min(delta, floor)
        hi = cfg.truncation or 8.0 * delta
        need = max(tail.min_truncation, 8.0 * delta)
        if tail.frequencies:
            need = max(need, OSC_MIN_PHASE / min(abs(nu) for nu in tail.frequencies))
        while hi < need:
            hi *= 2.0
        hi_cap = delta * 2.0**MAX_DOUBLINGS

        edges = [lo]
        while edges[-1] < delta:
            edges.append(min(2.0 * edges[-1], delta))
        while edges[-1] < hi:
            edges.append(min(2.0 * edges[-1], hi))
        # heap of (-err, tiebreak, a, b, value)
        heap = []
        counter = 0
        for a, b in zip(edges[:-1], edges[1:]):
            v, e = self.panel(a, b)
            heap.append((-e, counter, a, b, v))
            counter += 1
        heapq.heapify(heap)
        near_v, near_e, near_panel = self.near(lo)
        far_v, far_e = self.far(hi)
        nsub = 0

        while True:
            total = near_v + far_v + sum(p[4] for p in heap)
            err = near_e + far_e + sum(-p[0] for p in heap)
            tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
            if err <= tol:
                converged = True
                break
            best = None
            if heap and nsub < cfg.max_subdivisions:
                best = ("panel", -heap[0][0])
            if 0.5 * lo >= floor and (best is None or near_e > best[1]):
                best = ("near", near_e)
            if 2.0 * hi <= hi_cap and (best is None or far_e > best[1]):
                best = ("far", far_e)
            if best is None or best[1] == 0.0:
                converged = False
                break
            kind = best[0]
            if kind == "panel":
                _, _, a, b, _ = heapq.heappop(heap)
                m = 0.5 * (a + b)
                for pa, pb in ((a, m), (m, b)):
                    v, e = self.panel(pa, pb)
                    heapq.heappush(heap, (-e, counter, pa, pb, v))
                    counter += 1
                nsub += 1
            elif kind == "near":
                pa, pb, v, e = near_panel
                heapq.heappush(heap, (-e, counter, pa, pb, v))
                counter += 1
                lo *= 0.5
                near_v, near_e, near_panel = self.near(lo)
            else:
                v, e = self.panel(hi, 2.0 * hi)
                heapq.heappush(heap, (-e, counter, hi, 2.0 * hi, v))
                counter += 1
                hi *= 2.0
                far_v, far_e = self.far(hi)

        return IntegralEstimate(value=complex(total), error_estimate=float(err),
                                evaluations=self.nevals, converged=converged)


def singular_integral(psi: Callable, alpha: float, config: QuadratureConfig | None = None,
                      tail: TailModel | None = None) -> IntegralEstimate:
    """Integrate ``psi(xi) / xi**(alpha+1)`` over ``(0, inf)``.

    ``psi`` is called with 1-d float arrays and should return an array of the
    same shape (scalar-only callables are tolerated, slowly).  ``tail``
    describes ``psi`` at infinity; by default ``psi`` must decay to zero.

    Returns the best estimate even when the tolerance is not reached, with
    ``converged=False``.
    """
    config = config or QuadratureConfig()
    tail = tail or TailModel()
    k = config.near_zero_order
    if not (0.0 < alpha < k):
        raise DomainError(f"alpha={alpha} outside (0, {k}): integral diverges")
    if not math.isfinite(complex(tail.limit).real) or not math.isfinite(complex(tail.limit).imag):
        raise TailBoundError("tail limit must be finite")
    return _Integrator(psi, float(alpha), config, tail).run()
