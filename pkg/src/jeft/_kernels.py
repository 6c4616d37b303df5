"""Compiled inner loops.

Every reduction here runs in a fixed index order with Kahan compensation, so a
given output element is bitwise identical no matter how the caller chunks the
work across threads.  All kernels release the GIL.
"""

import math

import numba
import numpy as np

_jit = numba.njit(nogil=True, cache=True)


@_jit
def kahan_sum(v):
    """Compensated sum of a complex 1-D array, in index order."""
    sr = 0.0
    cr = 0.0
    si = 0.0
    ci = 0.0
    for i in range(v.shape[0]):
        y = v[i].real - cr
        t = sr + y
        cr = (t - sr) - y
        sr = t
        y = v[i].imag - ci
        t = si + y
        ci = (t - si) - y
        si = t
    return complex(sr, si)


@_jit
def kahan_rowsum(m):
    """Compensated sums along the last axis of a complex 2-D array."""
    out = np.empty(m.shape[0], dtype=np.complex128)
    for i in range(m.shape[0]):
        out[i] = kahan_sum(m[i])
    return out


@_jit
def _bracket(x, b):
    # log((1 - |x|^2) / |x - b|^2) for one interior point and one boundary point
    nx = 0.0
    d2 = 0.0
    for k in range(x.shape[0]):
        nx += x[k] * x[k]
        t = x[k] - b[k]
        d2 += t * t
    return math.log((1.0 - nx) / d2)


@_jit
def helgason_sum(lam, rho, y, wf, b, j0, j1, out):
    """Interior sums ``sum_y wf[y] exp((-i lam + rho) <y, b>)``.

    ``lam`` is a complex array; columns ``j0:j1`` of ``out`` (shape
    ``(len(lam), len(b))``) are filled.
    """
    nl = lam.shape[0]
    ny = y.shape[0]
    sr = np.zeros(nl)
    si = np.zeros(nl)
    cr = np.zeros(nl)
    ci = np.zeros(nl)
    for j in range(j0, j1):
        sr[:] = 0.0
        si[:] = 0.0
        cr[:] = 0.0
        ci[:] = 0.0
        for i in range(ny):
            a = _bracket(y[i], b[j])
            wr = wf[i].real
            wi = wf[i].imag
            for k in range(nl):
                mag = math.exp((rho + lam[k].imag) * a)
                ph = lam[k].real * a
                er = mag * math.cos(ph)
                ei = -mag * math.sin(ph)
                tr = wr * er - wi * ei
                ti = wr * ei + wi * er
                v = tr - cr[k]
                t = sr[k] + v
                cr[k] = (t - sr[k]) - v
                sr[k] = t
                v = ti - ci[k]
                t = si[k] + v
                ci[k] = (t - si[k]) - v
                si[k] = t
        for k in range(nl):
            out[k, j] = complex(sr[k], si[k])


@_jit
def helgason_sum_ap(lam0, dlam, nl, rho, y, wf, b, j0, j1, out):
    """Same as :func:`helgason_sum` for ``lam = lam0 + k * dlam``.

    The kernel for consecutive spectral values is advanced by one complex
    multiplication instead of a fresh exponential.
    """
    ny = y.shape[0]
    sr = np.zeros(nl)
    si = np.zeros(nl)
    cr = np.zeros(nl)
    ci = np.zeros(nl)
    for j in range(j0, j1):
        sr[:] = 0.0
        si[:] = 0.0
        cr[:] = 0.0
        ci[:] = 0.0
        for i in range(ny):
            a = _bracket(y[i], b[j])
            e = wf[i] * np.exp((-1j * lam0 + rho) * a)
            step = np.exp(-1j * dlam * a)
            for k in range(nl):
                v = e.real - cr[k]
                t = sr[k] + v
                cr[k] = (t - sr[k]) - v
                sr[k] = t
                v = e.imag - ci[k]
                t = si[k] + v
                ci[k] = (t - si[k]) - v
                si[k] = t
                e = e * step
        for k in range(nl):
            out[k, j] = complex(sr[k], si[k])


@_jit
def poisson_sum(lam, rho, b, wb, F, x, p0, p1, out):
    """Boundary sums ``sum_b wb[b] F[k, b] exp((i lam_k + rho) <x, b>)``.

    Fills columns ``p0:p1`` of ``out`` (shape ``(len(lam), len(x))``).
    """
    nl = lam.shape[0]
    nb = b.shape[0]
    sr = np.zeros(nl)
    si = np.zeros(nl)
    cr = np.zeros(nl)
    ci = np.zeros(nl)
    for p in range(p0, p1):
        sr[:] = 0.0
        si[:] = 0.0
        cr[:] = 0.0
        ci[:] = 0.0
        for j in range(nb):
            a = _bracket(x[p], b[j])
            for k in range(nl):
                mag = wb[j] * math.exp((rho - lam[k].imag) * a)
                ph = lam[k].real * a
                er = mag * math.cos(ph)
                ei = mag * math.sin(ph)
                f = F[k, j]
                tr = f.real * er - f.imag * ei
                ti = f.real * ei + f.imag * er
                v = tr - cr[k]
                t = sr[k] + v
                cr[k] = (t - sr[k]) - v
                sr[k] = t
                v = ti - ci[k]
                t = si[k] + v
                ci[k] = (t - si[k]) - v
                si[k] = t
        for k in range(nl):
            out[k, p] = complex(sr[k], si[k])


@_jit
def clenshaw(coef, t):
    """Evaluate a Chebyshev series at every entry of ``t`` (values in [-1, 1])."""
    out = np.empty(t.shape[0], dtype=coef.dtype)
    n = coef.shape[0]
    for i in range(t.shape[0]):
        x2 = 2.0 * t[i]
        b1 = coef[0] * 0.0
        b2 = coef[0] * 0.0
        for k in range(n - 1, 0, -1):
            b0 = coef[k] + x2 * b1 - b2
            b2 = b1
            b1 = b0
        out[i] = coef[0] + t[i] * b1 - b2
    return out


@_jit
def _phi_h2_nodes(lam, r, n, j0, step):
    """Sum of the reparametrised H^2 integrand over psi_j = 2 pi j / n, j = j0, j0+step, ...

    The circle is reparametrised by tan(theta/2) = exp(-r/2) tan(psi/2), the
    boundary action of the hyperbolic translation by r/2 along the axis; the
    integrand stays smooth and periodic and its peak at theta = 0 is widened.
    """
    k = math.exp(-0.5 * r)
    k2 = k * k
    er = math.exp(-r)
    sh2 = 2.0 * math.sinh(r)
    s = -(0.5 + 1j * lam)
    sr = 0.0
    si = 0.0
    cr = 0.0
    ci = 0.0
    for j in range(j0, n, step):
        psi = j * (2.0 * math.pi / n)
        c2 = math.cos(0.5 * psi) ** 2
        s2 = math.sin(0.5 * psi) ** 2
        den = c2 + k2 * s2
        jac = k / den
        # cosh r - sinh r cos(theta), written without cancellation
        base = er + sh2 * (k2 * s2 / den)
        v = jac * np.exp(s * math.log(base))
        y = v.real - cr
        t = sr + y
        cr = (t - sr) - y
        sr = t
        y = v.imag - ci
        t = si + y
        ci = (t - si) - y
        si = t
    return complex(sr, si)


@_jit
def phi_h2_trapezoid(lam, r, n):
    """Trapezoid value (n nodes) of the H^2 spherical-function boundary integral."""
    return _phi_h2_nodes(lam, r, n, 0, 1) / n


@_jit
def phi_h2(lam, r, n_min, tol):
    """Adaptive H^2 spherical function at one radius.

    Node counts double (nested, so earlier sums are reused) until successive
    values agree to ``tol``.
    """
    if r == 0.0:
        return 1.0 + 0.0j
    n = n_min
    total = _phi_h2_nodes(lam, r, n, 0, 1)
    prev = total / n
    while n < (1 << 20):
        total = total + _phi_h2_nodes(lam, r, 2 * n, 1, 2)
        n *= 2
        cur = total / n
        if abs(cur - prev) <= tol * (1.0 + abs(cur)):
            return cur
        prev = cur
    return prev


@_jit
def phi_h2_many(lam, r, n_min, tol):
    out = np.empty(r.shape[0], dtype=np.complex128)
    for i in range(r.shape[0]):
        out[i] = phi_h2(lam, r[i], n_min, tol)
    return out
