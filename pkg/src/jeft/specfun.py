"""Spherical functions and the Plancherel density on H^2 and H^3."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from . import _kernels
from .geometry import ModelParams

#: Plancherel constants kappa_n, fixed by ``scripts/calibrate_kappa.py``.  They
#: coincide with the Mehler-Fock constant (H^2) and the sine-transform constant
#: (H^3) for the measure conventions used here (db of mass 1, Riemannian dx).
KAPPA = {2: 1.0 / (2.0 * math.pi), 3: 1.0 / (2.0 * math.pi**2)}

_TAYLOR_SWITCH = 1e-4
_H2_MIN_NODES = 64
_H2_TOL = 1e-15


def _sinc(z):
    small = np.abs(z) < _TAYLOR_SWITCH
    zs = np.where(small, 1.0, z)
    z2 = z * z
    taylor = 1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0
    return np.where(small, taylor, np.sin(zs) / zs)


def _r_over_sinh(r):
    small = r < _TAYLOR_SWITCH
    rs = np.where(small, 1.0, r)
    r2 = r * r
    taylor = 1.0 - r2 / 6.0 + 7.0 * r2 * r2 / 360.0 - 31.0 * r2 * r2 * r2 / 15120.0
    return np.where(small, taylor, rs / np.sinh(rs))


def spherical_fn(lam, r, model: ModelParams | int, *, n_min: int = _H2_MIN_NODES):
    """Elementary spherical function phi_lambda at geodesic radius ``r``.

    H^3 uses sin(lam r) / (lam sinh r).  H^2 evaluates the boundary integral of
    exp((i lam + 1/2) <x_r, b>) by the trapezoid rule, doubling the node count
    (from ``n_min``) until it has converged; this is the conical function
    P_{-1/2 + i lam}(cosh r).  ``r`` may be an array; ``lam`` is a scalar.
    """
    n = model if isinstance(model, int) else model.dim
    lam = complex(lam)
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0) or not np.all(np.isfinite(r_arr)):
        raise ValueError("radius must be finite and >= 0")
    if n_min < 64:
        raise ValueError("H^2 boundary resolution must be >= 64 nodes")
    flat = r_arr.reshape(-1)
    if n == 3:
        lam_eff = lam if lam != 0 else 0.0
        out = _sinc(lam_eff * flat) * _r_over_sinh(flat)
        out = out.astype(complex)
    else:
        out = _kernels.phi_h2_many(lam, np.ascontiguousarray(flat), n_min, _H2_TOL)
    out = out.reshape(r_arr.shape)
    return complex(out) if out.ndim == 0 else out


def plancherel_density(lam, model: ModelParams | int):
    """|c(lambda)|^{-2}, including kappa_n, for real lambda >= 0."""
    n = model if isinstance(model, int) else model.dim
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr < 0) or not np.all(np.isfinite(lam_arr)):
        raise ValueError("Plancherel density needs real lambda >= 0")
    if n == 2:
        out = KAPPA[2] * lam_arr * np.tanh(np.pi * lam_arr)
    else:
        out = KAPPA[3] * lam_arr**2
    return float(out) if out.ndim == 0 else out


@dataclass
class ChebyshevTable:
    """Chebyshev interpolant of r -> phi_lambda(r) on [0, r_max]."""

    lam: complex
    r_max: float
    coef: np.ndarray

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        t = np.ascontiguousarray((2.0 * r / self.r_max - 1.0).reshape(-1))
        if t.size and (t.max() > 1.0 + 1e-12 or t.min() < -1.0 - 1e-12):
            raise ValueError("radius outside the tabulated range")
        return _kernels.clenshaw(self.coef, np.clip(t, -1.0, 1.0)).reshape(r.shape)


@dataclass
class SphericalEvaluator:
    """Spherical functions for one model, with tabulation for bulk evaluation.

    ``resolution`` is the starting node count of the H^2 boundary quadrature.
    """

    model: ModelParams
    resolution: int = _H2_MIN_NODES
    _tables: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.resolution < 64:
            raise ValueError("resolution must be >= 64 nodes")

    def __call__(self, lam, r):
        return spherical_fn(lam, r, self.model, n_min=self.resolution)

    def table(self, lam, r_max: float) -> ChebyshevTable:
        """Chebyshev interpolant of phi_lam on [0, r_max], degree chosen adaptively."""
        # one table covers every radius up to R, so callers share it
        r_max = max(math.ceil(r_max * 4.0) / 4.0, self.model.support_radius)
        key = (complex(lam), r_max)
        tab = self._tables.get(key)
        if tab is not None:
            return tab
        # the interpolant needs roughly |lam| r_max / 2 coefficients, plus slack
        m = 64
        while m < abs(lam) * r_max:
            m *= 2
        while True:
            k = np.arange(m)
            t = np.cos(np.pi * (k + 0.5) / m)
            vals = self(lam, 0.5 * r_max * (t + 1.0))
            coef = scipy.fft.dct(vals.real, type=2) / m + 1j * scipy.fft.dct(vals.imag, type=2) / m
            coef[0] /= 2.0
            # coefficients are compared with the largest value, not the largest coefficient
            scale = max(np.abs(vals).max(), np.abs(coef).max())
            if np.abs(coef[-8:]).max() <= 1e-15 * scale or m >= 4096:
                break
            m *= 2
        keep = np.nonzero(np.abs(coef) > 2e-17 * scale)[0]
        coef = coef[: keep[-1] + 1] if keep.size else coef[:1]
        tab = ChebyshevTable(complex(lam), r_max, np.ascontiguousarray(coef))
        self._tables[key] = tab
        return tab

    def radial_kernel(self, lam, r_max: float):
        """Vectorised r -> phi_lam(r) valid on [0, r_max]."""
        if self.model.dim == 3:
            return lambda r: spherical_fn(lam, r, 3)
        return self.table(lam, r_max)
