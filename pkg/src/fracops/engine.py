"""Shift-combination integrals and backend selection.

Every operator reduces to ``int_0^inf psi(xi) xi**(-alpha-1) dxi`` with
``psi(xi) = sum_n w_n f(x + o_n xi)``.  For catalog functions the compiled
kernel evaluates the whole integral in C; otherwise (or when the extension is
missing, or ``FRACOPS_PURE_PYTHON`` is set) the pure-Python engine in
:mod:`fracops.quadrature` is used.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import replace

import numpy as np

from .errors import DomainError
from .functions import FunctionHandle
from .quadrature import IntegralEstimate, QuadratureConfig, TailModel, singular_integral

try:
    if os.environ.get("FRACOPS_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _kernels
except ImportError:  # pragma: no cover - exercised when the extension is absent
    _kernels = None

HAVE_EXTENSION = _kernels is not None
_backend = "compiled" if HAVE_EXTENSION else "python"


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    """Select ``"compiled"`` or ``"python"`` for catalog functions."""
    global _backend
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and not HAVE_EXTENSION:
        raise RuntimeError("compiled extension is not available")
    _backend = name


@contextmanager
def backend(name: str):
    old = _backend
    set_backend(name)
    try:
        yield
    finally:
        set_backend(old)


def tail_model(f: FunctionHandle, x: float, weights, offsets) -> TailModel:
    """Large-``xi`` behaviour of ``sum_n w_n f(x + o_n xi)``."""
    limit = 0j
    comps: dict[float, complex] = {}
    min_trunc = 0.0
    fx = None
    for w, o in zip(weights, offsets):
        if w == 0:
            continue
        if o == 0:
            if fx is None:
                fx = complex(np.asarray(f(np.array([x])))[0])
            limit += w * fx
            continue
        if not f.bounded_toward(o):
            side = "+inf" if o > 0 else "-inf"
            raise DomainError(
                f"{f.description} is not bounded toward {side}, which this operator samples"
            )
        for c, om in f.spectrum:
            amp = w * c * np.exp(1j * om * x)
            nu = om * o
            if nu == 0:
                limit += amp
            else:
                comps[nu] = comps.get(nu, 0j) + amp
        min_trunc = max(min_trunc, (abs(f.center - x) + f.width) / abs(o))
    keep = [(a, nu) for nu, a in sorted(comps.items()) if a != 0]
    return TailModel(
        limit=limit,
        amplitudes=tuple(a for a, _ in keep),
        frequencies=tuple(nu for _, nu in keep),
        min_truncation=min_trunc,
    )


def shift_integral(f: FunctionHandle, x: float, weights, offsets, alpha: float, order: int,
                   config: QuadratureConfig | None = None,
                   parity: bool = False) -> IntegralEstimate:
    """Integrate ``sum_n w_n f(x + o_n xi) / xi**(alpha+1)`` over ``(0, inf)``.

    ``order`` is the vanishing order of the combination at ``xi = 0``;
    ``parity`` declares the weights symmetric or antisymmetric under
    ``o -> -o``, so the combination over ``xi**order`` is even in ``xi``.
    """
    config = replace(config or QuadratureConfig(), near_zero_order=int(order),
                     near_zero_step=2 if parity else 1)
    if not (0.0 < alpha < order):
        raise DomainError(f"alpha={alpha} outside (0, {order})")
    weights = np.ascontiguousarray(weights, dtype=float)
    offsets = np.ascontiguousarray(offsets, dtype=float)
    x = float(x)
    tail = tail_model(f, x, weights, offsets)
    if _backend == "compiled" and f.catalog is not None:
        p = f.catalog
        value, err, nev, conv = _kernels.shifted_integral(
            p.base, p.param, p.amplitude, p.scale, p.shift, p.deriv, x,
            weights, offsets, float(alpha), int(order), complex(tail.limit),
            np.ascontiguousarray(tail.amplitudes, dtype=complex),
            np.ascontiguousarray(tail.frequencies, dtype=float),
            tail.min_truncation, config.rel_tol, config.abs_tol, config.split_point,
            config.truncation or 0.0, config.max_subdivisions, config.floor,
            config.near_zero_step,
        )
        return IntegralEstimate(value, err, nev, conv)

    ev = f.evaluate

    def psi(xi):
        xi = np.asarray(xi, dtype=float)
        return sum(w * ev(x + o * xi) for w, o in zip(weights, offsets))

    return singular_integral(psi, alpha, config, tail)
