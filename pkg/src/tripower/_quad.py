"""Nested adaptive Gauss-Kronrod quadrature for the limit integrals.

Every axis integrates a factor x**(2-tau) * (bounded function) over (0, inf).
The substitution x = s**(1/(3-tau)) turns x**(2-tau) dx into ds/(3-tau),
removing the corner singularity exactly; s = t/(1-t) then maps the domain to
(0, 1). What remains is nested 1-D globally-adaptive GK15 on the unit
interval per axis, with per-axis relative tolerance rel_tol/3 and
deterministic worst-interval-first refinement.

Integrand codes: 0 = triangle integrand for the uniform model,
1 = triangle integrand for the erased configuration model,
2 = the constrained-triangle double integrand with parameters (B, mu).
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Gauss-Kronrod 15/7 nodes and weights on [-1, 1]
_XGK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])

_MAX_INTERVALS = 1024
_EDGE = 1.0 - 1e-14  # the folded integrand vanishes at t -> 1


@njit(cache=True, inline="always")
def _xmap(t, beta):
    u = 1.0 - t
    if u < 1e-14:
        u = 1e-14
    return (t / u) ** beta


@njit(cache=True, inline="always")
def _phi(code, x, y, z, big_b, mu):
    if code == 0:
        return 1.0 / ((1.0 + x * y) * (1.0 + y * z) * (1.0 + x * z))
    if code == 1:
        a = x * y
        b = y * z
        c = x * z
        fa = -np.expm1(-a) / a if a > 0.0 else 1.0
        fb = -np.expm1(-b) / b if b > 0.0 else 1.0
        fc = -np.expm1(-c) / c if c > 0.0 else 1.0
        return fa * fb * fc
    # code 2: double integral over (x, z); y is unused so the same inner
    # routine (which integrates its third argument) serves both arities
    return 1.0 / ((1.0 + x * big_b) * (1.0 + z * big_b) * (1.0 / mu + x * z))


@njit(cache=True)
def _panel_inner(a, b, x1, x2, code, beta, big_b, mu):
    h = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    ik = 0.0
    ig = 0.0
    for i in range(15):
        t = mid + h * _XGK[i]
        if t > _EDGE:
            f = 0.0
        else:
            x3 = _xmap(t, beta)
            f = _phi(code, x1, x2, x3, big_b, mu) / ((1.0 - t) * (1.0 - t))
        ik += _WGK[i] * f
        if i % 2 == 1:
            ig += _WG[i // 2] * f
    return ik * h, abs(ik - ig) * h


@njit(cache=True)
def _inner(x1, x2, code, beta, big_b, mu, tol):
    lo = np.empty(_MAX_INTERVALS)
    hi = np.empty(_MAX_INTERVALS)
    val = np.empty(_MAX_INTERVALS)
    err = np.empty(_MAX_INTERVALS)
    lo[0] = 0.0
    hi[0] = 1.0
    v, e = _panel_inner(0.0, 1.0, x1, x2, code, beta, big_b, mu)
    val[0] = v
    err[0] = e
    nint = 1
    total = v
    toterr = e
    while toterr > tol * max(abs(total), 1e-300) and nint < _MAX_INTERVALS - 1:
        wi = 0
        we = err[0]
        for i in range(1, nint):
            if err[i] > we:
                we = err[i]
                wi = i
        a = lo[wi]
        b = hi[wi]
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            toterr -= err[wi]
            err[wi] = 0.0
            continue
        v1, e1 = _panel_inner(a, m, x1, x2, code, beta, big_b, mu)
        v2, e2 = _panel_inner(m, b, x1, x2, code, beta, big_b, mu)
        total += v1 + v2 - val[wi]
        toterr += e1 + e2 - err[wi]
        hi[wi] = m
        val[wi] = v1
        err[wi] = e1
        lo[nint] = m
        hi[nint] = b
        val[nint] = v2
        err[nint] = e2
        nint += 1
    return total


@njit(cache=True)
def _panel_middle(a, b, t1, code, beta, big_b, mu, itol):
    h = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x1 = _xmap(t1, beta)
    ik = 0.0
    ig = 0.0
    for i in range(15):
        t = mid + h * _XGK[i]
        if t > _EDGE:
            f = 0.0
        else:
            x2 = _xmap(t, beta)
            f = _inner(x1, x2, code, beta, big_b, mu, itol) / ((1.0 - t) * (1.0 - t))
        ik += _WGK[i] * f
        if i % 2 == 1:
            ig += _WG[i // 2] * f
    return ik * h, abs(ik - ig) * h


@njit(cache=True)
def _middle(t1, code, beta, big_b, mu, tol, itol):
    lo = np.empty(_MAX_INTERVALS)
    hi = np.empty(_MAX_INTERVALS)
    val = np.empty(_MAX_INTERVALS)
    err = np.empty(_MAX_INTERVALS)
    lo[0] = 0.0
    hi[0] = 1.0
    v, e = _panel_middle(0.0, 1.0, t1, code, beta, big_b, mu, itol)
    val[0] = v
    err[0] = e
    nint = 1
    total = v
    toterr = e
    while toterr > tol * max(abs(total), 1e-300) and nint < _MAX_INTERVALS - 1:
        wi = 0
        we = err[0]
        for i in range(1, nint):
            if err[i] > we:
                we = err[i]
                wi = i
        a = lo[wi]
        b = hi[wi]
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            toterr -= err[wi]
            err[wi] = 0.0
            continue
        v1, e1 = _panel_middle(a, m, t1, code, beta, big_b, mu, itol)
        v2, e2 = _panel_middle(m, b, t1, code, beta, big_b, mu, itol)
        total += v1 + v2 - val[wi]
        toterr += e1 + e2 - err[wi]
        hi[wi] = m
        val[wi] = v1
        err[wi] = e1
        lo[nint] = m
        hi[nint] = b
        val[nint] = v2
        err[nint] = e2
        nint += 1
    return total


@njit(cache=True)
def _panel_outer(a, b, code, beta, big_b, mu, mtol, itol, levels):
    h = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    ik = 0.0
    ig = 0.0
    for i in range(15):
        t = mid + h * _XGK[i]
        if t > _EDGE:
            f = 0.0
        elif levels == 3:
            f = _middle(t, code, beta, big_b, mu, mtol, itol) / ((1.0 - t) * (1.0 - t))
        else:
            x1 = _xmap(t, beta)
            f = _inner(x1, 0.0, code, beta, big_b, mu, itol) / ((1.0 - t) * (1.0 - t))
        ik += _WGK[i] * f
        if i % 2 == 1:
            ig += _WG[i // 2] * f
    return ik * h, abs(ik - ig) * h


@njit(cache=True)
def _nested_integral(code, tau, big_b, mu, rel_tol, levels):
    """Returns (value, error_estimate, converged)."""
    beta = 1.0 / (3.0 - tau)
    atol = rel_tol / 3.0
    mtol = atol / 3.0
    itol = mtol / 3.0
    if levels == 2:
        itol = mtol  # only two axes: outer rel_tol/3, inner a notch tighter
    lo = np.empty(_MAX_INTERVALS)
    hi = np.empty(_MAX_INTERVALS)
    val = np.empty(_MAX_INTERVALS)
    err = np.empty(_MAX_INTERVALS)
    lo[0] = 0.0
    hi[0] = 1.0
    v, e = _panel_outer(0.0, 1.0, code, beta, big_b, mu, mtol, itol, levels)
    val[0] = v
    err[0] = e
    nint = 1
    total = v
    toterr = e
    while toterr > atol * max(abs(total), 1e-300) and nint < _MAX_INTERVALS - 1:
        wi = 0
        we = err[0]
        for i in range(1, nint):
            if err[i] > we:
                we = err[i]
                wi = i
        a = lo[wi]
        b = hi[wi]
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            toterr -= err[wi]
            err[wi] = 0.0
            continue
        v1, e1 = _panel_outer(a, m, code, beta, big_b, mu, mtol, itol, levels)
        v2, e2 = _panel_outer(m, b, code, beta, big_b, mu, mtol, itol, levels)
        total += v1 + v2 - val[wi]
        toterr += e1 + e2 - err[wi]
        hi[wi] = m
        val[wi] = v1
        err[wi] = e1
        lo[nint] = m
        hi[nint] = b
        val[nint] = v2
        err[nint] = e2
        nint += 1
    scale = 1.0 / (3.0 - tau) ** levels
    converged = toterr <= atol * max(abs(total), 1e-300)
    return total * scale, toterr * scale, converged


def triangle_integral(code: int, tau: float, rel_tol: float):
    """Triple integral of the triangle integrand; code 0 = uniform, 1 = ecm."""
    return _nested_integral(code, tau, 0.0, 1.0, rel_tol, 3)


def range3_integral(tau: float, big_b: float, mu: float, rel_tol: float):
    """Double integral of the constrained-triangle integrand at B = big_b."""
    return _nested_integral(2, tau, big_b, mu, rel_tol, 2)
