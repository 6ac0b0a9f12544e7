# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled core: singular integrals of shifted catalog functions.

Mirrors the adaptive scheme of :mod:`fracops.quadrature` step for step, with
``psi(xi) = sum_n w_n f(x + o_n xi)`` evaluated in C for catalog ``f``.
"""

from libc.math cimport exp, cos, sin, fabs, pow, M_PI
from libc.stdlib cimport malloc, free

import numpy as np

from .quadrature import (GK_NODES, GK_KRONROD_WEIGHTS, GK_GAUSS_WEIGHTS,
                         OSC_MIN_PHASE, MAX_DOUBLINGS, N_PROBES)

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)

cdef double[21] _X
cdef double[21] _WK
cdef double[21] _WG
for _i in range(21):
    _X[_i] = GK_NODES[_i]
    _WK[_i] = GK_KRONROD_WEIGHTS[_i]
    _WG[_i] = GK_GAUSS_WEIGHTS[_i]

cdef double _OSC_MIN_PHASE = OSC_MIN_PHASE
cdef int _MAX_DOUBLINGS = MAX_DOUBLINGS
cdef int _N_PROBES = N_PROBES

DEF GAUSSIAN = 0
DEF LORENTZIAN = 1
DEF PLANE_WAVE = 2
DEF COSINE = 3
DEF SINE = 4
DEF EXP_GROWTH = 5
DEF EXP_DECAY = 6
DEF CONSTANT = 7


cdef struct Func:
    int base
    double param
    double amplitude
    double scale
    double shift
    int deriv


cdef double complex base_eval(const Func* f, double u) noexcept nogil:
    cdef int j = f.deriv
    cdef double w = f.param
    cdef int n
    cdef double h0, h1, h2, s
    cdef double complex z, acc
    if f.base == GAUSSIAN:
        h0 = 1.0
        if j == 0:
            return exp(-u * u)
        h1 = 2.0 * u
        for n in range(1, j):
            h2 = 2.0 * u * h1 - 2.0 * n * h0
            h0 = h1
            h1 = h2
        s = -1.0 if j % 2 else 1.0
        return s * h1 * exp(-u * u)
    elif f.base == LORENTZIAN:
        z = 1.0 / (u - 1j)
        acc = z
        s = 1.0
        for n in range(1, j + 1):
            acc = acc * z
            s = -s * n
        return cimag(s * acc)
    elif f.base == PLANE_WAVE:
        acc = 1.0
        for n in range(j):
            acc = acc * (1j * w)
        return acc * cexp(1j * w * u)
    elif f.base == COSINE:
        return pow(w, j) * cos(w * u + j * M_PI / 2)
    elif f.base == SINE:
        return pow(w, j) * sin(w * u + j * M_PI / 2)
    elif f.base == EXP_GROWTH:
        return pow(w, j) * exp(w * u)
    elif f.base == EXP_DECAY:
        return pow(-w, j) * exp(-w * u)
    elif f.base == CONSTANT:
        return 1.0 if j == 0 else 0.0
    return 0.0


cdef inline double complex feval(const Func* f, double x) noexcept nogil:
    return f.amplitude * pow(f.scale, f.deriv) * base_eval(f, f.scale * (x - f.shift))


cdef struct Problem:
    Func f
    double x
    int nterms
    double* w
    double* o
    double alpha
    int k
    int step
    double complex limit
    int nosc
    double complex* amp
    double* nu
    long nevals


cdef inline double complex psi(Problem* p, double xi) noexcept nogil:
    cdef double complex acc = 0.0
    cdef int n
    for n in range(p.nterms):
        acc = acc + p.w[n] * feval(&p.f, p.x + p.o[n] * xi)
    p.nevals += 1
    return acc


cdef void gk_panel(Problem* p, double a, double b, double complex* val, double* err) noexcept nogil:
    cdef double c = 0.5 * (a + b)
    cdef double h = 0.5 * (b - a)
    cdef double complex k21 = 0.0
    cdef double complex g10 = 0.0
    cdef double complex v
    cdef double xi
    cdef int i
    for i in range(21):
        xi = c + h * _X[i]
        v = psi(p, xi) * pow(xi, -p.alpha - 1.0)
        k21 = k21 + _WK[i] * v
        g10 = g10 + _WG[i] * v
    val[0] = h * k21
    err[0] = cabs(h * (k21 - g10))


cdef double complex near_fit(Problem* p, double lo) noexcept nogil:
    cdef double k = p.k
    cdef double a = p.alpha
    cdef double st = p.step
    cdef double r = pow(0.5, st)
    cdef double complex y0 = psi(p, lo) / pow(lo, k)
    cdef double complex y1 = psi(p, 0.5 * lo) / pow(0.5 * lo, k)
    cdef double complex y2 = psi(p, 0.25 * lo) / pow(0.25 * lo, k)
    cdef double complex f01 = (y1 - y0) / (r - 1.0)
    cdef double complex f012 = ((y2 - y1) / (r * r - r) - f01) / (r * r - 1.0)
    cdef double complex d0 = y0 - f01 + f012 * r
    cdef double complex d1 = f01 - f012 * (1.0 + r)
    return pow(lo, k - a) * (d0 / (k - a) + d1 / (k + st - a) + f012 / (k + 2.0 * st - a))


cdef void near_piece(Problem* p, double lo, double complex* val, double* err,
                     double complex* pval, double* perr) noexcept nogil:
    gk_panel(p, 0.5 * lo, lo, pval, perr)
    val[0] = near_fit(p, 0.5 * lo) + pval[0]
    err[0] = cabs(near_fit(p, lo) - val[0]) + perr[0]


cdef void osc_tail(double nu, double beta, double xi, double complex* val,
                   double* bound) noexcept nogil:
    cdef double complex z = 1j * nu * xi
    cdef double complex term = 1.0
    cdef double complex total = 1.0
    cdef double complex nxt
    cdef double complex pref
    cdef int m = 0
    cdef double b
    while True:
        nxt = term * (beta + m) / z
        if cabs(nxt) >= cabs(term) or cabs(nxt) < 1e-17 * cabs(total) or m >= 60:
            b = 2.0 * cabs(nxt)
            break
        total = total + nxt
        term = nxt
        m += 1
    pref = -cexp(1j * nu * xi) * pow(xi, -beta) / (1j * nu)
    val[0] = pref * total
    bound[0] = cabs(pref) * b


cdef void far_piece(Problem* p, double hi, double complex* val, double* err) noexcept nogil:
    cdef double a = p.alpha
    cdef double complex v = p.limit * pow(hi, -a) / a
    cdef double e = 0.0
    cdef double complex ov, r
    cdef double oe, t, rmax = 0.0
    cdef int j, m
    for j in range(p.nosc):
        osc_tail(p.nu[j], a + 1.0, hi, &ov, &oe)
        v = v + p.amp[j] * ov
        e += cabs(p.amp[j]) * oe
    for m in range(_N_PROBES):
        t = hi * pow(2.0, m)
        r = psi(p, t) - p.limit
        for j in range(p.nosc):
            r = r - p.amp[j] * cexp(1j * p.nu[j] * t)
        if cabs(r) > rmax:
            rmax = cabs(r)
    e += rmax * pow(hi, -a) / a
    val[0] = v
    err[0] = e


cdef int run(Problem* p, double rel_tol, double abs_tol, double delta, double trunc,
             int max_sub, double floor, double min_trunc,
             double complex* out_val, double* out_err) noexcept nogil:
    cdef double lo, hi, need, hi_cap, numin, e0, e1, m, tol, best_err
    cdef double complex near_v, far_v, total, v0, v1, near_pv
    cdef double near_e, far_e, err, near_pe
    cdef int cap, n = 0, i, ibest, kind, nsub = 0, converged = 0
    cdef double* pa
    cdef double* pb
    cdef double* pe
    cdef double complex* pv

    lo = delta / 8.0
    if lo < floor:
        lo = floor if floor < delta else delta
    hi = trunc if trunc > 0 else 8.0 * delta
    need = min_trunc if min_trunc > 8.0 * delta else 8.0 * delta
    if p.nosc > 0:
        numin = fabs(p.nu[0])
        for i in range(1, p.nosc):
            if fabs(p.nu[i]) < numin:
                numin = fabs(p.nu[i])
        if _OSC_MIN_PHASE / numin > need:
            need = _OSC_MIN_PHASE / numin
    while hi < need:
        hi *= 2.0
    hi_cap = delta * pow(2.0, _MAX_DOUBLINGS)

    cap = 2 * max_sub + 4 * _MAX_DOUBLINGS + 256
    pa = <double*> malloc(cap * sizeof(double))
    pb = <double*> malloc(cap * sizeof(double))
    pe = <double*> malloc(cap * sizeof(double))
    pv = <double complex*> malloc(cap * sizeof(double complex))
    if pa == NULL or pb == NULL or pe == NULL or pv == NULL:
        free(pa); free(pb); free(pe); free(pv)
        return -1

    # initial geometric panels
    m = lo
    while m < delta and n < cap:
        pa[n] = m
        pb[n] = 2.0 * m if 2.0 * m < delta else delta
        m = pb[n]
        n += 1
    while m < hi and n < cap:
        pa[n] = m
        pb[n] = 2.0 * m if 2.0 * m < hi else hi
        m = pb[n]
        n += 1
    for i in range(n):
        gk_panel(p, pa[i], pb[i], &pv[i], &pe[i])
    near_piece(p, lo, &near_v, &near_e, &near_pv, &near_pe)
    far_piece(p, hi, &far_v, &far_e)

    while True:
        total = near_v + far_v
        err = near_e + far_e
        ibest = -1
        best_err = -1.0
        for i in range(n):
            total = total + pv[i]
            err += pe[i]
            if pe[i] > best_err:
                best_err = pe[i]
                ibest = i
        tol = rel_tol * cabs(total)
        if abs_tol > tol:
            tol = abs_tol
        if err <= tol:
            converged = 1
            break
        kind = -1
        if ibest >= 0 and nsub < max_sub and n + 2 <= cap:
            kind = 0
        else:
            best_err = -1.0
        if 0.5 * lo >= floor and n + 1 <= cap and (kind < 0 or near_e > best_err):
            kind = 1
            best_err = near_e
        if 2.0 * hi <= hi_cap and n + 1 <= cap and (kind < 0 or far_e > best_err):
            kind = 2
            best_err = far_e
        if kind < 0 or best_err == 0.0:
            break
        if kind == 0:
            m = 0.5 * (pa[ibest] + pb[ibest])
            pa[n] = m
            pb[n] = pb[ibest]
            pb[ibest] = m
            gk_panel(p, pa[ibest], pb[ibest], &pv[ibest], &pe[ibest])
            gk_panel(p, pa[n], pb[n], &pv[n], &pe[n])
            n += 1
            nsub += 1
        elif kind == 1:
            pa[n] = 0.5 * lo
            pb[n] = lo
            pv[n] = near_pv
            pe[n] = near_pe
            n += 1
            lo *= 0.5
            near_piece(p, lo, &near_v, &near_e, &near_pv, &near_pe)
        else:
            pa[n] = hi
            pb[n] = 2.0 * hi
            gk_panel(p, pa[n], pb[n], &pv[n], &pe[n])
            n += 1
            hi *= 2.0
            far_piece(p, hi, &far_v, &far_e)

    free(pa); free(pb); free(pe); free(pv)
    out_val[0] = total
    out_err[0] = err
    return converged


def shifted_integral(int base, double param, double amplitude, double scale, double shift,
                     int deriv, double x, double[::1] weights, double[::1] offsets,
                     double alpha, int k, double complex limit,
                     double complex[::1] amplitudes, double[::1] frequencies,
                     double min_truncation, double rel_tol, double abs_tol,
                     double split_point, double truncation, int max_subdivisions,
                     double floor, int near_step=1):
    """Integral of ``sum_n w_n f(x + o_n xi) / xi**(alpha+1)`` over ``(0, inf)``.

    ``truncation <= 0`` selects the automatic initial cut.  Returns
    ``(value, error_estimate, evaluations, converged)``.
    """
    cdef Problem p
    cdef double complex val = 0.0
    cdef double err = 0.0
    cdef int rc
    if weights.shape[0] != offsets.shape[0]:
        raise ValueError("weights and offsets differ in length")
    if amplitudes.shape[0] != frequencies.shape[0]:
        raise ValueError("amplitudes and frequencies differ in length")
    p.f.base = base
    p.f.param = param
    p.f.amplitude = amplitude
    p.f.scale = scale
    p.f.shift = shift
    p.f.deriv = deriv
    p.x = x
    p.nterms = weights.shape[0]
    p.w = &weights[0] if p.nterms else NULL
    p.o = &offsets[0] if p.nterms else NULL
    p.alpha = alpha
    p.k = k
    p.step = near_step
    p.limit = limit
    p.nosc = amplitudes.shape[0]
    p.amp = &amplitudes[0] if p.nosc else NULL
    p.nu = &frequencies[0] if p.nosc else NULL
    p.nevals = 0
    with nogil:
        rc = run(&p, rel_tol, abs_tol, split_point, truncation, max_subdivisions,
                 floor, min_truncation, &val, &err)
    if rc < 0:
        raise MemoryError()
    return complex(val), float(err), int(p.nevals), bool(rc)


def catalog_values(int base, double param, double amplitude, double scale, double shift,
                   int deriv, double[::1] x):
    """Vectorized catalog evaluation (used to cross-check the Python catalog)."""
    cdef Func f
    cdef Py_ssize_t i, n = x.shape[0]
    out = np.empty(n, dtype=complex)
    cdef double complex[::1] ov = out
    f.base = base
    f.param = param
    f.amplitude = amplitude
    f.scale = scale
    f.shift = shift
    f.deriv = deriv
    for i in range(n):
        ov[i] = feval(&f, x[i])
    return out
