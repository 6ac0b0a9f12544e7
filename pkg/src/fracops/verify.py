"""Built-in verification suites.

Every bound used below lives in :data:`TOLERANCES`.  Relative comparisons
scale by ``max(|expected|, REL_FLOOR)`` so that exact zeros (odd operators
on even functions) are compared absolutely.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import functions as F
from .normalization import calibrate_sign, literal_normalization, prefactor
from .operators import (
    antisymmetric,
    central_fractional,
    extended_order,
    feller,
    feller_rotation,
    lw_minus,
    lw_plus,
    riesz,
)
from .oracle import (
    VerificationReport,
    brute_force_integral,
    closed_form_reference,
    limit_check,
    symmetry_check,
)
from .quadrature import QuadratureConfig, singular_integral, TailModel
from .stencil import build_stencil, stencil_moment

SUITES = ("stencil", "norm", "limits", "equivalence", "symmetry", "scaling")

TOLERANCES = {
    "explicit_prefactor": 1e-12,
    "reflection": 1e-12,
    "removable_continuity": 1e-5,
    "limit": 5e-3,
    "eigenfunction": 1e-7,
    "closed_form_brute": 1e-8,
    "family": 1e-6,
    "feller_forms": 1e-8,
    "symbol": 1e-6,
    "symmetry": 1e-6,
    "scaling": 1e-6,
    "honesty_factor": 3.0,
    "closed_form_quadrature": 1e-8,
    "brute_vs_adaptive": 1e-5,
    "order_extension": 1e-5,
}
REL_FLOOR = 1e-3
#: Component integrals for identities checked at 1e-8 relative, where the
#: combined value can be much smaller than its parts.
TIGHT = QuadratureConfig(rel_tol=1e-11, abs_tol=1e-14)

# Integrands written out in the explicit k = 1..4 formulas, on offsets r..-r,
# and the factor relating our stencil to each (ours = factor * explicit).
EXPLICIT_INTEGRANDS = {
    1: ((1, 0, -1), Fraction(1, 2)),
    2: ((1, -2, 1), Fraction(1)),
    3: ((-1, 2, 0, -2, 1), Fraction(-1, 2)),
    4: ((-1, 4, -6, 4, -1), Fraction(-1)),
}


def explicit_prefactor(k: int, alpha: float) -> float:
    """Prefactor of the explicit ``k = 1..4`` formulas (limit at ``0/0`` points)."""
    g = math.gamma(1.0 + alpha) / math.pi
    h = alpha * math.pi / 2
    if k == 1:
        return g * math.cos(h)
    if k == 2:
        return g * math.sin(h)
    if k == 3:
        return g * math.cos(h) / (2.0**alpha - 2.0)
    if k == 4:
        if alpha == 2.0:
            return g * (math.pi / 2) * math.cos(h) / (4.0 * math.log(2.0))
        return g * math.sin(h) / (2.0**alpha - 4.0)
    raise ValueError("explicit forms exist for k = 1..4 only")


def _rel(report, desc, expected, actual, key):
    tol = TOLERANCES[key] * max(abs(expected), REL_FLOOR)
    return report.add(desc, expected, actual, tol)


def _val(est):
    return complex(est.value)


# suites -----------------------------------------------------------------------

def suite_stencil(k_max: int = 4) -> VerificationReport:
    rep = VerificationReport("stencil")
    for k in range(1, max(8, k_max) + 1):
        s = build_stencil(k)
        bad = [j for j in range(k) if stencil_moment(s, j) != 0]
        top = stencil_moment(s, k)
        rep.add(f"moment ladder k={k}: lower moments zero, top = {k}!",
                0, len(bad) + abs(top - math.factorial(k)), 0)
    for k, (coef, fac) in EXPLICIT_INTEGRANDS.items():
        want = [fac * c for c in coef]
        got = list(build_stencil(k).coefficients)
        rep.add(f"k={k} coefficients match explicit integrand x {fac}", 0,
                0 if got == want else 1, 0)
    return rep


def suite_norm(k_max: int = 4) -> VerificationReport:
    rep = VerificationReport("norm")
    for k in range(1, min(k_max, 4) + 1):
        fac = float(EXPLICIT_INTEGRANDS[k][1])
        for frac in (0.25, 0.5, 0.75):
            a = frac * k
            _rel(rep, f"explicit prefactor k={k} alpha={a:g}",
                 explicit_prefactor(k, a), prefactor(k, a).prefactor * fac, "explicit_prefactor")
    for k in range(1, k_max + 1):
        grid = np.arange(1, 1000 * k) * 1e-3
        near = [n + d for n in range(k + 1) for d in (-1e-6, 1e-6) if 0 < n + d < k]
        vals = [prefactor(k, float(a)).prefactor for a in np.concatenate([grid, near])]
        nonfinite = sum(not math.isfinite(v) for v in vals)
        rep.add(f"prefactor finite on (0, {k}) scan", 0, nonfinite, 0)
        for n in range(1, k):
            lo, hi = prefactor(k, n - 1e-6).prefactor, prefactor(k, n + 1e-6).prefactor
            at = prefactor(k, float(n)).prefactor
            _rel(rep, f"prefactor continuous at k={k} alpha={n}", at, 0.5 * (lo + hi),
                 "removable_continuity")
        worst = 0.0
        for a in np.arange(0.005, k, 0.01):
            if abs(a - round(a)) <= 0.01:
                continue
            p = prefactor(k, float(a)).prefactor
            worst = max(worst, abs(p * literal_normalization(k, float(a)) - calibrate_sign(k)))
        rep.add(f"reflection form equals sign s_{k}", 0.0, worst, TOLERANCES["reflection"])
    if k_max >= 4:
        _rel(rep, "removable point k=4 alpha=2 equals 1/(4 ln 2)", 1.0 / (4 * math.log(2.0)),
             prefactor(4, 2.0).prefactor, "explicit_prefactor")
    return rep


def suite_limits(k_max: int = 4) -> VerificationReport:
    rep = VerificationReport("limits")
    g = F.gaussian(1.0)
    rates = {}
    for k in range(1, k_max + 1):
        for x in (0.0, 0.7, 1.3):
            sub = limit_check(k, g, x, [1e-2, 3e-3, 1e-3], tolerance=TOLERANCES["limit"])
            rep.cases.append(sub.cases[-1])
            rates[(k, x)] = sub.details["rate"]
    rep.details["rates"] = rates
    # order extension: commuting the derivative vs differencing the output
    for x in (0.0, 0.6):
        a = _val(extended_order(1, 1.5, g, x, strategy="derivative", full_output=True))
        b = _val(extended_order(1, 1.5, g, x, strategy="finite_difference", full_output=True))
        _rel(rep, f"extended k=1 alpha=1.5 x={x:g}: derivative vs finite difference",
             a, b, "order_extension")
    for w, alpha, x in ((1.0, 1.5, 0.3), (2.0, 2.5, 0.0), (-1.5, 1.5, 0.2)):
        n, beta = divmod(alpha, 1.0)
        want = (1j * w) ** int(n) * closed_form_reference(
            "d1_plane_wave", dict(omega=w, alpha=beta, x=x))
        got = _val(extended_order(1, alpha, F.plane_wave(w), x, full_output=True))
        _rel(rep, f"extended k=1 alpha={alpha:g} plane wave omega={w:g}", want, got, "symbol")
    # k >= 3 symbols are conjectural: reported, not asserted
    rep.details["symbol_k_ge_3"] = {
        k: complex(central_fractional(k, 0.5, F.plane_wave(1.0), 0.0)) for k in (3, 4)
        if k <= k_max
    }
    if k_max >= 4:
        rep.details["central_4_at_2_vs_second_derivative"] = (
            complex(central_fractional(4, 2.0, g, 0.5)),
            complex(g.derivative(2)(np.array([0.5]))[0]),
        )
    return rep


def _lw_brute(f_x, lam, alpha):
    return brute_force_integral(lambda t: f_x * (1 - np.exp(-lam * t)), alpha,
                                order=1, limit=f_x) * alpha / math.gamma(1 - alpha)


def _brute_plane(w, alpha, side):
    """``D+`` (side=-1) or ``D-`` (side=+1) of ``exp(i w x)`` at 0 by brute force."""
    nu = w * side
    return brute_force_integral(lambda t: 1 - np.exp(1j * nu * t), alpha, order=1, limit=1.0,
                                oscillation=[(-1.0, nu)]) * alpha / math.gamma(1 - alpha)


def suite_equivalence(k_max: int = 4) -> VerificationReport:
    rep = VerificationReport("equivalence")
    # eigenfunction of the left derivative
    for lam, a in ((1.0, 0.5), (2.0, 0.5), (1.0, 0.25)):
        f = F.exp_growth(lam)
        for x in (-1.0, 0.0, 1.0):
            want = closed_form_reference("lw_plus_exp", dict(lam=lam, alpha=a, x=x))
            _rel(rep, f"closed form lw_plus exp lam={lam:g} alpha={a:g} x={x:g} vs brute force",
                 want, _lw_brute(math.exp(lam * x), lam, a), "closed_form_brute")
            _rel(rep, f"lw_plus exp lam={lam:g} alpha={a:g} x={x:g}",
                 want, _val(lw_plus(f, x, a, full_output=True)), "eigenfunction")
    # family agreement
    for name, f in (("gaussian", F.gaussian(1.0)), ("lorentzian", F.lorentzian(1.0))):
        for a in (0.3, 0.7):
            for x in (0.0, 1.3):
                dp = _val(lw_plus(f, x, a, full_output=True))
                dm = _val(lw_minus(f, x, a, full_output=True))
                r = _val(riesz(f, x, a, full_output=True))
                c2 = _val(central_fractional(2, a, f, x, full_output=True))
                c1 = _val(central_fractional(1, a, f, x, full_output=True))
                tag = f"{name} alpha={a:g} x={x:g}"
                _rel(rep, f"central k=2 vs riesz, {tag}", r, c2, "family")
                _rel(rep, f"riesz vs -(D+ + D-)/(2cos), {tag}",
                     -(dp + dm) / (2 * math.cos(a * math.pi / 2)), r, "family")
                _rel(rep, f"central k=1 vs (D+ - D-)/(2sin), {tag}",
                     (dp - dm) / (2 * math.sin(a * math.pi / 2)), c1, "family")
    # Feller forms
    for name, f, x in (("gaussian", F.gaussian(1.0), 0.4),
                       ("shifted gaussian derivative", F.gaussian(1.0).derivative(1).shifted(0.3),
                        -0.2)):
        for a in (0.3, 0.7):
            for th in (0.0, 0.25, 0.5, 1.0):
                fe = _val(feller(f, x, a, th, TIGHT, unsafe_theta=True, full_output=True))
                fr = _val(feller_rotation(f, x, a, th, TIGHT, full_output=True))
                _rel(rep, f"feller vs rotation form theta={th:g} alpha={a:g} {name}",
                     fr, fe, "feller_forms")
            _rel(rep, f"feller theta=0 vs riesz alpha={a:g} {name}",
                 _val(riesz(f, x, a, TIGHT, full_output=True)),
                 _val(feller(f, x, a, 0.0, TIGHT, full_output=True)), "feller_forms")
    # plane-wave symbols
    for w in (1.0, -2.0):
        for a in (0.3, 0.7):
            for th in (0.0, 0.25, 0.5, 1.0):
                want = closed_form_reference("feller_plane_wave",
                                             dict(omega=w, alpha=a, theta=th, x=0.0))
                c = _feller_c(a, th)
                brute = -(c[0] * _brute_plane(w, a, -1) + c[1] * _brute_plane(w, a, +1))
                _rel(rep, f"feller symbol omega={w:g} alpha={a:g} theta={th:g} (brute force)",
                     want, brute, "symbol")
                got = _val(feller(F.plane_wave(w), 0.0, a, th, unsafe_theta=True,
                                  full_output=True))
                _rel(rep, f"feller symbol omega={w:g} alpha={a:g} theta={th:g}", want, got,
                     "symbol")
        want = closed_form_reference("d1_plane_wave", dict(omega=w, alpha=0.5, x=0.3))
        _rel(rep, f"antisymmetric symbol omega={w:g}", want,
             _val(antisymmetric(F.plane_wave(w), 0.3, 0.5, full_output=True)), "symbol")
        want = closed_form_reference("riesz_plane_wave", dict(omega=w, alpha=1.4, x=0.3))
        _rel(rep, f"riesz symbol omega={w:g} alpha=1.4", want,
             _val(riesz(F.plane_wave(w), 0.3, 1.4, full_output=True)), "symbol")
    rep.extend(suite_quadrature())
    return rep


def _feller_c(a, th):
    s = math.sin(a * math.pi)
    return (math.sin((a - th) * math.pi / 2) / s, math.sin((a + th) * math.pi / 2) / s)


def suite_quadrature() -> VerificationReport:
    rep = VerificationReport("quadrature")
    cases = (
        ("1 - exp(-xi)", lambda t: 1 - np.exp(-t), 2.0 * math.sqrt(math.pi),
         QuadratureConfig(), TailModel(limit=1.0)),
        ("1 - cos(xi)", lambda t: 1 - np.cos(t), math.sqrt(2.0 * math.pi),
         QuadratureConfig(near_zero_order=2, near_zero_step=2),
         TailModel(limit=1.0, amplitudes=(-0.5, -0.5), frequencies=(-1.0, 1.0))),
    )
    for name, psi, exact, cfg, tail in cases:
        est = singular_integral(psi, 0.5, cfg, tail)
        err = abs(est.value - exact)
        rep.add(f"{name}: |error| <= 3 x estimate", 0.0, err,
                TOLERANCES["honesty_factor"] * est.error_estimate)
        _rel(rep, f"{name}: closed form", exact, complex(est.value), "closed_form_quadrature")
    rep.extend(_brute_vs_adaptive())
    return rep


def _catalog_cases():
    """``(label, f, weights, offsets, order)`` for every catalog entry."""
    lwp = ([1.0, -1.0], [0.0, -1.0], 1)
    lwm = ([1.0, -1.0], [0.0, 1.0], 1)
    rz = ([1.0, -2.0, 1.0], [1.0, 0.0, -1.0], 2)
    d1 = ([1.0, -1.0], [1.0, -1.0], 1)
    entries = [
        ("gaussian", F.gaussian(1.0), (lwp, rz, d1)),
        ("lorentzian", F.lorentzian(1.0), (lwp, rz, d1)),
        ("plane_wave", F.plane_wave(1.5), (lwp, rz, d1)),
        ("cosine", F.cosine(1.0), (lwm, rz)),
        ("sine", F.sine(2.0), (lwp, d1)),
        ("exp_growth", F.exp_growth(1.0), (lwp,)),
        ("exp_decay", F.exp_decay(2.0), (lwm,)),
        ("constant", F.constant(3.0), (rz,)),
    ]
    for name, f, stencils in entries:
        for w, o, order in stencils:
            yield name, f, w, o, order


def _brute_tail(f, x, w, o):
    limit, osc = 0j, []
    fx = complex(f(np.array([x]))[0])
    for wn, on in zip(w, o):
        if on == 0:
            limit += wn * fx
            continue
        for c, om in f.spectrum:
            amp = wn * c * np.exp(1j * om * x)
            if om * on == 0:
                limit += amp
            else:
                osc.append((amp, om * on))
    return limit, osc


def _brute_vs_adaptive() -> VerificationReport:
    from .engine import shift_integral

    rep = VerificationReport("brute force")
    x, alpha = 0.3, 0.5
    for name, f, w, o, order in _catalog_cases():
        def psi(t, f=f, w=w, o=o):
            return sum(wn * f(x + on * t) for wn, on in zip(w, o))

        limit, osc = _brute_tail(f, x, w, o)
        brute = brute_force_integral(psi, alpha, order=order, limit=limit, oscillation=osc)
        adaptive = complex(shift_integral(f, x, w, o, alpha, order).value)
        scale = max(abs(brute), 1.0)
        rep.add(f"adaptive vs brute force: {name} stencil {w}@{o}", brute, adaptive,
                TOLERANCES["brute_vs_adaptive"] * scale)
    return rep


def suite_symmetry(k_max: int = 4) -> VerificationReport:
    rep = VerificationReport("symmetry")
    g1 = F.gaussian(1.0)
    pairs = (
        (g1, g1.shifted(0.5)),
        (F.gaussian(0.8).shifted(-0.3), F.gaussian(1.2).shifted(0.4)),
        (g1.derivative(1), g1.shifted(0.7) * 0.5),
    )
    sigmas = {}
    for k in range(1, k_max + 1):
        alpha = 0.6 * k
        seen = []
        for f, g in pairs:
            sub = symmetry_check(k, alpha, f, g, tolerance=TOLERANCES["symmetry"])
            rep.extend(sub)
            seen.append(sub.details["sigma"])
        rep.add(f"sigma constant across pairs for k={k}", 0, len(set(seen)) - 1, 0)
        sigmas[k] = seen[0]
    rep.details["sigma"] = sigmas
    return rep


def suite_scaling(k_max: int = 4) -> VerificationReport:
    rep = VerificationReport("scaling")
    g = F.gaussian(1.0)
    x = 0.4
    ops = [("riesz alpha=0.7", lambda f, t: riesz(f, t, 0.7, full_output=True), 0.7),
           ("riesz alpha=1.5", lambda f, t: riesz(f, t, 1.5, full_output=True), 1.5)]
    if k_max >= 3:
        ops.append(("central k=3 alpha=1.8",
                    lambda f, t: central_fractional(3, 1.8, f, t, full_output=True), 1.8))
    for name, op, alpha in ops:
        for c in (0.5, 2.0):
            lhs = _val(op(g.rescaled(c), x))
            rhs = c**alpha * _val(op(g, c * x))
            _rel(rep, f"{name}: homogeneity c={c:g}", rhs, lhs, "scaling")
        for a in (-1.0, 2.5):
            lhs = _val(op(g.shifted(a), x + a))
            rhs = _val(op(g, x))
            _rel(rep, f"{name}: shift a={a:g}", rhs, lhs, "scaling")
    return rep


_RUNNERS = {
    "stencil": suite_stencil,
    "norm": suite_norm,
    "limits": suite_limits,
    "equivalence": suite_equivalence,
    "symmetry": suite_symmetry,
    "scaling": suite_scaling,
}


def run_suite(name: str = "all", k_max: int = 4) -> list[VerificationReport]:
    """Run one suite (or ``"all"``) and return the reports in declaration order."""
    names = SUITES if name == "all" else (name,)
    out = []
    for n in names:
        if n not in _RUNNERS:
            raise ValueError(f"unknown suite {n!r}; choose from all, {', '.join(SUITES)}")
        out.append(_RUNNERS[n](k_max))
    return out
