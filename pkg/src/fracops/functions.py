"""Test functions with analytic derivatives and tail metadata.

Catalog entries have the form ``amplitude * g(scale * (x - shift))`` for a
fixed base ``g``; the affine parameters make shifted and rescaled copies
cheap and keep them eligible for the compiled kernel.  Anything built by
arithmetic on handles becomes a generic handle evaluated in Python.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from numpy.polynomial.hermite import hermval

from .errors import DomainError

DECAY_CLASSES = ("schwartz", "bounded_oscillatory", "left_decaying", "right_decaying")

# Base-function ids shared with the compiled kernel.
GAUSSIAN, LORENTZIAN, PLANE_WAVE, COSINE, SINE, EXP_GROWTH, EXP_DECAY, CONSTANT = range(8)
_BASE_NAMES = {
    GAUSSIAN: "gaussian", LORENTZIAN: "lorentzian", PLANE_WAVE: "plane_wave",
    COSINE: "cosine", SINE: "sine", EXP_GROWTH: "exp_growth", EXP_DECAY: "exp_decay",
    CONSTANT: "constant",
}


@dataclass(frozen=True)
class CatalogParams:
    """Affine parameters of a catalog entry, ``amplitude * g^(deriv)(scale * (x - shift))``."""

    base: int
    param: float = 0.0
    amplitude: float = 1.0
    scale: float = 1.0
    shift: float = 0.0
    deriv: int = 0

    def as_array(self) -> np.ndarray:
        return np.array([self.param, self.amplitude, self.scale, self.shift, float(self.deriv)])


def _base_eval(p: CatalogParams, u: np.ndarray) -> np.ndarray:
    """``g^(j)(u)`` for the base function, vectorized."""
    j = p.deriv
    w = p.param
    if p.base == GAUSSIAN:
        coef = np.zeros(j + 1)
        coef[j] = 1.0
        return ((-1) ** j) * hermval(u, coef) * np.exp(-u * u) + 0j
    if p.base == LORENTZIAN:
        return ((-1) ** j * math.factorial(j) / (u - 1j) ** (j + 1)).imag + 0j
    if p.base == PLANE_WAVE:
        return (1j * w) ** j * np.exp(1j * w * u)
    if p.base == COSINE:
        return w**j * np.cos(w * u + j * np.pi / 2) + 0j
    if p.base == SINE:
        return w**j * np.sin(w * u + j * np.pi / 2) + 0j
    if p.base == EXP_GROWTH:
        return w**j * np.exp(w * u) + 0j
    if p.base == EXP_DECAY:
        return (-w) ** j * np.exp(-w * u) + 0j
    if p.base == CONSTANT:
        return np.full(np.shape(u), 1.0 if j == 0 else 0.0, dtype=complex)
    raise DomainError(f"unknown base function id {p.base}")


def _base_spectrum(p: CatalogParams) -> tuple[tuple[complex, float], ...]:
    """Exponential components ``(c, nu)`` with ``g^(j)(u) = sum c exp(i nu u)``."""
    j, w = p.deriv, p.param
    if p.base == PLANE_WAVE:
        return (((1j * w) ** j, w),)
    if p.base == COSINE:
        return (((1j * w) ** j / 2, w), ((-1j * w) ** j / 2, -w))
    if p.base == SINE:
        return (((1j * w) ** j / 2j, w), (-((-1j * w) ** j) / 2j, -w))
    if p.base == CONSTANT:
        return ((1.0 + 0j, 0.0),) if j == 0 else ()
    return ()


@dataclass(frozen=True)
class FunctionHandle:
    """Evaluable test function.

    ``evaluate`` maps float arrays to complex arrays.  ``decays_left`` /
    ``decays_right`` state whether ``f`` minus its ``spectrum`` (exponential
    components ``(c, omega)``, ``f ~ sum c exp(i omega x)``) tends to zero
    toward -inf / +inf; ``center`` and ``width`` locate the region outside of
    which that remainder decays monotonically.
    """

    evaluate: Callable[[np.ndarray], np.ndarray]
    description: str
    decays_left: bool
    decays_right: bool
    spectrum: tuple[tuple[complex, float], ...] = ()
    derivative_factory: Callable[[int], "FunctionHandle"] | None = None
    center: float = 0.0
    width: float = 0.0
    catalog: CatalogParams | None = None

    def __call__(self, x):
        return self.evaluate(np.asarray(x, dtype=float))

    @property
    def decay_class(self) -> str:
        if self.spectrum:
            return "bounded_oscillatory"
        if self.decays_left and self.decays_right:
            return "schwartz"
        if self.decays_left:
            return "left_decaying"
        if self.decays_right:
            return "right_decaying"
        return "unbounded"

    def bounded_toward(self, direction: int) -> bool:
        """True when the tail toward ``sign(direction) * inf`` is modelled."""
        return self.decays_right if direction > 0 else self.decays_left

    @property
    def has_derivatives(self) -> bool:
        return self.derivative_factory is not None

    def derivative(self, j: int) -> "FunctionHandle":
        if j == 0:
            return self
        if self.derivative_factory is None:
            raise DomainError(f"{self.description} has no analytic derivatives")
        return self.derivative_factory(j)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: "FunctionHandle") -> "FunctionHandle":
        return combine([(1.0, self), (1.0, other)])

    def __sub__(self, other: "FunctionHandle") -> "FunctionHandle":
        return combine([(1.0, self), (-1.0, other)])

    def __mul__(self, c) -> "FunctionHandle":
        if self.catalog is not None and isinstance(c, (int, float)) and not isinstance(c, bool):
            return from_catalog(replace(self.catalog, amplitude=self.catalog.amplitude * c))
        return combine([(c, self)])

    __rmul__ = __mul__

    def shifted(self, a: float) -> "FunctionHandle":
        """``x -> f(x - a)``."""
        if self.catalog is not None:
            return from_catalog(replace(self.catalog, shift=self.catalog.shift + a))
        ev = self.evaluate
        fac = self.derivative_factory
        return FunctionHandle(
            evaluate=lambda x: ev(np.asarray(x) - a),
            description=f"({self.description})(x-{a!r})",
            decays_left=self.decays_left,
            decays_right=self.decays_right,
            spectrum=tuple((c * np.exp(-1j * w * a), w) for c, w in self.spectrum),
            derivative_factory=None if fac is None else (lambda j: fac(j).shifted(a)),
            center=self.center + a,
            width=self.width,
        )

    def rescaled(self, c: float) -> "FunctionHandle":
        """``x -> f(c x)`` for ``c > 0``."""
        if not c > 0:
            raise DomainError("rescaling factor must be positive")
        if self.catalog is not None:
            p = self.catalog
            return from_catalog(replace(p, scale=p.scale * c, shift=p.shift / c))
        ev = self.evaluate
        fac = self.derivative_factory
        return FunctionHandle(
            evaluate=lambda x: ev(c * np.asarray(x)),
            description=f"({self.description})({c!r}x)",
            decays_left=self.decays_left,
            decays_right=self.decays_right,
            spectrum=tuple((a, w * c) for a, w in self.spectrum),
            derivative_factory=None if fac is None else (lambda j: c**j * fac(j).rescaled(c)),
            center=self.center / c,
            width=self.width / c,
        )


def combine(terms: list[tuple[complex, FunctionHandle]]) -> FunctionHandle:
    """Linear combination ``sum c_i f_i`` as a generic handle."""
    terms = list(terms)
    spec: dict[float, complex] = {}
    for c, f in terms:
        for a, w in f.spectrum:
            spec[w] = spec.get(w, 0) + c * a
    lo = min(f.center - f.width for _, f in terms)
    hi = max(f.center + f.width for _, f in terms)

    def evaluate(x):
        return sum(c * f.evaluate(x) for c, f in terms)

    factory = None
    if all(f.has_derivatives for _, f in terms):
        def factory(j):
            return combine([(c, f.derivative(j)) for c, f in terms])

    return FunctionHandle(
        evaluate=evaluate,
        description=" + ".join(f"{c!r}*{f.description}" for c, f in terms),
        decays_left=all(f.decays_left for _, f in terms),
        decays_right=all(f.decays_right for _, f in terms),
        spectrum=tuple((a, w) for w, a in spec.items() if a != 0),
        derivative_factory=factory,
        center=0.5 * (lo + hi),
        width=0.5 * (hi - lo),
    )


def _catalog_eval(p: CatalogParams):
    def evaluate(x):
        u = p.scale * (np.asarray(x, dtype=float) - p.shift)
        return p.amplitude * p.scale**p.deriv * _base_eval(p, u)
    return evaluate


def from_catalog(p: CatalogParams) -> FunctionHandle:
    """Handle for a catalog parameter set (derivatives included)."""
    name = _BASE_NAMES[p.base]
    desc = name
    if p.base in (PLANE_WAVE, COSINE, SINE):
        desc += f"(omega={p.param!r})"
    elif p.base in (EXP_GROWTH, EXP_DECAY):
        desc += f"(lambda={p.param!r})"
    if p.amplitude != 1.0:
        desc = f"{p.amplitude!r}*{desc}"
    if p.scale != 1.0:
        desc += f"[scale={p.scale!r}]"
    if p.shift != 0.0:
        desc += f"[shift={p.shift!r}]"
    if p.deriv:
        desc = f"d^{p.deriv}/dx^{p.deriv} {desc}"

    s, a = p.scale, p.shift
    gain = p.amplitude * s**p.deriv
    spectrum = tuple(
        (gain * c * np.exp(-1j * nu * s * a), nu * s) for c, nu in _base_spectrum(p)
    )
    oscillating = p.base in (PLANE_WAVE, COSINE, SINE, CONSTANT)
    if p.base == GAUSSIAN:
        width = (6.0 + math.sqrt(p.deriv)) / s
    elif p.base == LORENTZIAN:
        width = (1.0 + p.deriv) / s
    else:
        width = 0.0
    return FunctionHandle(
        evaluate=_catalog_eval(p),
        description=desc,
        decays_left=oscillating or p.base in (GAUSSIAN, LORENTZIAN, EXP_GROWTH),
        decays_right=oscillating or p.base in (GAUSSIAN, LORENTZIAN, EXP_DECAY),
        spectrum=spectrum,
        derivative_factory=lambda j: from_catalog(replace(p, deriv=p.deriv + j)),
        center=a,
        width=width,
        catalog=p,
    )


# public constructors ------------------------------------------------------

def gaussian(sigma: float = 1.0) -> FunctionHandle:
    """``exp(-(x / sigma)**2)``."""
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    return from_catalog(CatalogParams(GAUSSIAN, scale=1.0 / sigma))


def lorentzian(gamma: float = 1.0) -> FunctionHandle:
    """``1 / (1 + (x / gamma)**2)``."""
    if not gamma > 0:
        raise DomainError("gamma must be positive")
    return from_catalog(CatalogParams(LORENTZIAN, scale=1.0 / gamma))


def plane_wave(omega: float = 1.0) -> FunctionHandle:
    """``exp(i omega x)``."""
    return from_catalog(CatalogParams(PLANE_WAVE, param=float(omega)))


def cosine(omega: float = 1.0) -> FunctionHandle:
    return from_catalog(CatalogParams(COSINE, param=float(omega)))


def sine(omega: float = 1.0) -> FunctionHandle:
    return from_catalog(CatalogParams(SINE, param=float(omega)))


def exp_growth(lam: float = 1.0) -> FunctionHandle:
    """``exp(lam x)``, ``lam > 0``; decays toward -inf only."""
    if not lam > 0:
        raise DomainError("lambda must be positive")
    return from_catalog(CatalogParams(EXP_GROWTH, param=float(lam)))


def exp_decay(lam: float = 1.0) -> FunctionHandle:
    """``exp(-lam x)``, ``lam > 0``; decays toward +inf only."""
    if not lam > 0:
        raise DomainError("lambda must be positive")
    return from_catalog(CatalogParams(EXP_DECAY, param=float(lam)))


def constant(value: float = 1.0) -> FunctionHandle:
    return from_catalog(CatalogParams(CONSTANT, amplitude=float(value)))


CATALOG: dict[str, tuple[Callable[..., FunctionHandle], dict[str, str]]] = {
    "gaussian": (gaussian, {"sigma": "sigma"}),
    "lorentzian": (lorentzian, {"gamma": "gamma"}),
    "plane_wave": (plane_wave, {"omega": "omega", "w": "omega"}),
    "cosine": (cosine, {"omega": "omega", "w": "omega"}),
    "sine": (sine, {"omega": "omega", "w": "omega"}),
    "exp_growth": (exp_growth, {"lambda": "lam", "lam": "lam"}),
    "exp_decay": (exp_decay, {"lambda": "lam", "lam": "lam"}),
    "constant": (constant, {"value": "value", "c": "value"}),
}


def parse_function(text: str) -> FunctionHandle:
    """Parse ``NAME[:param=value,...]``, e.g. ``gaussian:sigma=2``.

    Besides the entry's own parameter, ``shift``, ``scale`` and ``amplitude``
    are accepted for every entry.
    """
    name, _, rest = text.partition(":")
    name = name.strip()
    if name not in CATALOG:
        raise DomainError(f"unknown function {name!r}; choose from {', '.join(CATALOG)}")
    ctor, aliases = CATALOG[name]
    kwargs, affine = {}, {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise DomainError(f"malformed parameter {item!r} (expected key=value)")
        key = key.strip()
        try:
            num = float(val)
        except ValueError:
            raise DomainError(f"parameter {key!r} is not a number: {val!r}") from None
        if key in aliases:
            kwargs[aliases[key]] = num
        elif key in ("shift", "scale", "amplitude"):
            affine[key] = num
        else:
            raise DomainError(f"{name} has no parameter {key!r}")
    f = ctor(**kwargs)
    if "scale" in affine:
        f = f.rescaled(affine["scale"])
    if "shift" in affine:
        f = f.shifted(affine["shift"])
    if "amplitude" in affine:
        f = f * affine["amplitude"]
    return f
