"""Normalization of the central-difference fractional derivative.

The multiplier in front of the singular integral is written through the
reflection identity ``Gamma(1+a) Gamma(1-a) = pi a / sin(pi a)`` as::

    s_k * Gamma(1 + a) * T_k(a) / (pi * S_k(a))

with ``T_k = sin(a pi / 2)`` for even ``k`` and ``cos(a pi / 2)`` for odd ``k``
and ``S_k(a) = sum_{n <= r} a^k_n (r - n)**a``.  This form has no gamma poles
on ``(0, k)``.  At interior integers of the same parity as ``k`` both ``T_k``
and ``S_k`` vanish; there the ratio is evaluated from a cancellation-free
rewrite in ``delta = a - a0`` (and by the derivative ratio when ``delta`` is
negligible).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DegeneracyError, DomainError
from .stencil import build_stencil

#: Below this distance from a removable point the derivative ratio is used.
REMOVABLE_WINDOW = 1e-8


@dataclass(frozen=True)
class NormalizationResult:
    k: int
    alpha: float
    prefactor: float
    sum_term: float
    trig_term: float
    sign: int
    at_removable_point: bool

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "alpha": self.alpha,
            "prefactor": self.prefactor,
            "sum_term": self.sum_term,
            "trig_term": self.trig_term,
            "sign": self.sign,
            "at_removable_point": self.at_removable_point,
        }


def _check(k: int, alpha: float) -> None:
    if k < 1:
        raise DomainError(f"order k must be >= 1, got {k}")
    if not (0.0 < alpha < k):
        raise DomainError(f"alpha={alpha} outside (0, {k})")


@lru_cache(maxsize=None)
def _positive_terms(k: int) -> tuple[tuple[float, int], ...]:
    """(coefficient, base) pairs of the stencil sum with base >= 1."""
    s = build_stencil(k)
    return tuple((float(c), o) for c, o in zip(s.coefficients, s.offsets) if o > 0 and c != 0)


def stencil_sum(k: int, alpha: float) -> float:
    """``sum_{n=0}^{r} a^k_n (r - n)**alpha`` with ``0**alpha = 0``."""
    _check(k, alpha)
    return math.fsum(c * float(m) ** alpha for c, m in _positive_terms(k))


def trig_term(k: int, alpha: float) -> float:
    if k % 2 == 0:
        return math.sin(alpha * math.pi / 2)
    return math.cos(alpha * math.pi / 2)


@lru_cache(maxsize=None)
def calibrate_sign(k: int) -> int:
    """Sign making the derivative tend to ``+d^k/dx^k`` as ``alpha -> k-``.

    Near ``alpha = k`` the integral behaves like ``f^(k) / (k - alpha)`` and
    ``T_k(alpha) ~ tau * (k - alpha)``; the sign is that of ``tau * S_k(k)``.
    """
    if k < 1:
        raise DomainError(f"order k must be >= 1, got {k}")
    s = build_stencil(k)
    s_at_k = sum(
        (c * Fraction(o) ** k for c, o in zip(s.coefficients, s.offsets) if o > 0),
        Fraction(0),
    )
    if k % 2 == 0:
        tau = -((-1) ** (k // 2))  # -d/da sin(a pi/2) at a=k, over pi/2
    else:
        tau = (-1) ** ((k - 1) // 2)  # -d/da cos(a pi/2) at a=k, over pi/2
    return 1 if tau * s_at_k > 0 else -1


def _removable_point(k: int, alpha: float) -> int | None:
    a0 = round(alpha)
    if 0 < a0 < k and a0 % 2 == k % 2 and abs(alpha - a0) < 0.5:
        return a0
    return None


def _ratio_near(k: int, a0: int, delta: float) -> tuple[float, bool]:
    """``T_k / S_k`` near the common zero ``a0``, without cancellation."""
    # T_k(a0 + d) = tsign * sin(d pi / 2)
    if k % 2 == 0:
        tsign = (-1) ** (a0 // 2)
    else:
        tsign = -((-1) ** ((a0 - 1) // 2))
    terms = _positive_terms(k)
    if abs(delta) < REMOVABLE_WINDOW:
        dsum = math.fsum(c * float(m) ** a0 * math.log(m) for c, m in terms)
        return tsign * (math.pi / 2) / dsum, True
    t = tsign * math.sin(delta * math.pi / 2)
    ssum = math.fsum(c * float(m) ** a0 * math.expm1(delta * math.log(m)) for c, m in terms)
    return t / ssum, False


def prefactor(k: int, alpha: float) -> NormalizationResult:
    """Multiplier applied to the singular integral of the order-``k`` stencil."""
    _check(k, alpha)
    sign = calibrate_sign(k)
    ssum = stencil_sum(k, alpha)
    trig = trig_term(k, alpha)
    a0 = _removable_point(k, alpha)
    removable = False
    if a0 is not None:
        ratio, removable = _ratio_near(k, a0, alpha - a0)
    else:
        if ssum == 0.0 or abs(ssum) < 1e-14 * max(abs(c) for c, _ in _positive_terms(k)):
            raise DegeneracyError(f"stencil sum vanishes at k={k}, alpha={alpha}")
        ratio = trig / ssum
    value = sign * math.gamma(1.0 + alpha) * ratio / math.pi
    return NormalizationResult(
        k=k,
        alpha=alpha,
        prefactor=value,
        sum_term=ssum,
        trig_term=trig,
        sign=sign,
        at_removable_point=removable,
    )


def literal_normalization(k: int, alpha: float) -> float:
    """Gamma-pole form ``2 Gamma(1-a)/a * S_k(a) * (cos if k even else sin)``.

    Only meaningful away from integer ``alpha``; used for cross-checks.
    """
    _check(k, alpha)
    trig = math.cos(alpha * math.pi / 2) if k % 2 == 0 else math.sin(alpha * math.pi / 2)
    return 2.0 * math.gamma(1.0 - alpha) / alpha * stencil_sum(k, alpha) * trig
