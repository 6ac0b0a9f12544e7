"""Symmetric central-difference stencils of arbitrary order.

The operator of order ``k`` combines samples ``f(x + o * h)`` at integer
offsets ``o = r, r-1, ..., -r`` with ``r = (k + 1) // 2``.  Even orders are the
plain ``k``-fold half-step central difference; odd orders apply one averaged
full-step difference on top of ``k - 1`` half-step differences.  Coefficients
are kept as exact fractions so that moment identities can be checked exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError

#: Largest order accepted by :func:`build_stencil` unless overridden.
MAX_ORDER = 16


def _binom(n: int, m: int) -> int:
    if m < 0 or m > n:
        return 0
    return math.comb(n, m)


@dataclass(frozen=True)
class CentralStencil:
    """Coefficients ``a[n]`` attached to offsets ``offsets[n] = r - n``."""

    k: int
    radius: int
    offsets: tuple[int, ...]
    coefficients: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.coefficients)

    @property
    def weights(self) -> np.ndarray:
        """Coefficients as float64, in offset order."""
        return np.array([float(c) for c in self.coefficients])

    @property
    def float_offsets(self) -> np.ndarray:
        return np.array(self.offsets, dtype=float)

    @property
    def is_symmetric(self) -> bool:
        return self.k % 2 == 0

    def nonzero(self) -> tuple[np.ndarray, np.ndarray]:
        """(weights, offsets) with the zero coefficients dropped."""
        keep = [i for i, c in enumerate(self.coefficients) if c != 0]
        return self.weights[keep], self.float_offsets[keep]


def coefficient(k: int, n: int) -> Fraction:
    """Single coefficient ``a^k_n``; binomials with negative lower index vanish."""
    sign = -1 if n % 2 else 1
    if k % 2 == 0:
        return Fraction(sign * _binom(k, n))
    return Fraction(sign * (_binom(k - 1, n) - _binom(k - 1, n - 2)), 2)


def build_stencil(k: int, max_order: int = MAX_ORDER) -> CentralStencil:
    """Build the central-difference stencil of order ``k``.

    >>> build_stencil(3).coefficients
    (Fraction(1, 2), Fraction(-1, 1), Fraction(0, 1), Fraction(1, 1), Fraction(-1, 2))
    """
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise DomainError(f"stencil order must be an integer, got {k!r}")
    k = int(k)
    if k < 1:
        raise DomainError(f"stencil order must be >= 1, got {k}")
    if k > max_order:
        raise DomainError(f"stencil order {k} exceeds max_order={max_order}")
    r = (k + 1) // 2
    offsets = tuple(r - n for n in range(2 * r + 1))
    coeffs = tuple(coefficient(k, n) for n in range(2 * r + 1))
    return CentralStencil(k=k, radius=r, offsets=offsets, coefficients=coeffs)


def apply_stencil(s: CentralStencil, f, x: float, step):
    """Return ``sum_n a_n f(x + o_n * step)``.

    ``f`` must accept numpy arrays.  ``step`` may be a scalar or an array, in
    which case the result has the shape of ``step``.
    """
    step = np.asarray(step, dtype=float)
    if np.any(step <= 0):
        raise DomainError("step must be positive")
    w, o = s.nonzero()
    pts = x + np.multiply.outer(o, step)
    vals = np.asarray(f(pts), dtype=complex)
    out = np.tensordot(w, vals, axes=1)
    return complex(out) if out.ndim == 0 else out


def stencil_moment(s: CentralStencil, j: int) -> Fraction:
    """Exact moment ``sum_n a_n o_n**j`` (with ``0**0 == 1``)."""
    if j < 0:
        raise DomainError("moment index must be non-negative")
    return sum((c * Fraction(o) ** j for c, o in zip(s.coefficients, s.offsets)), Fraction(0))


def coefficient_rows(k: int) -> list[tuple[int, int, int, int, int]]:
    """Table rows ``(k, n, offset, numerator, denominator)``."""
    s = build_stencil(k)
    return [
        (k, n, o, c.numerator, c.denominator)
        for n, (o, c) in enumerate(zip(s.offsets, s.coefficients))
    ]
