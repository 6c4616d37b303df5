"""Laplace-Beltrami operator on the ball model and eigen-equation residuals."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import DomainError, ModelParams, as_points


@dataclass(frozen=True)
class ScalarField:
    """A complex field on the ball, evaluated in batches, with its stencil step."""

    fn: Callable
    dim: int
    h: float = 1e-3

    def __post_init__(self):
        if not (1e-4 <= self.h <= 1e-1):
            raise ValueError(f"stencil step must lie in [1e-4, 1e-1], got {self.h}")
        if self.dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")

    def with_step(self, h: float) -> "ScalarField":
        return ScalarField(self.fn, self.dim, h)

    def __call__(self, x):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=complex)


def eigenvalue(lam, model: ModelParams | int) -> complex:
    """The value of Delta on the joint eigenspace with parameter lam: -(lam^2 + rho^2)."""
    n = model if isinstance(model, int) else model.dim
    rho = (n - 1) / 2
    return -(complex(lam) ** 2 + rho**2)


def _stencil(x: np.ndarray, h: float) -> np.ndarray:
    """Centre plus +-h along each axis: shape (len(x), 2n+1, n)."""
    n = x.shape[-1]
    offs = np.concatenate([np.zeros((1, n)), h * np.eye(n), -h * np.eye(n)])
    pts = x[:, None, :] + offs[None, :, :]
    if np.any(np.sum(pts * pts, axis=-1) >= 1.0):
        raise DomainError("stencil leaves the unit ball; move the point inward or reduce h")
    return pts


def laplace_beltrami(u: ScalarField, x) -> np.ndarray | complex:
    """Central-difference Delta u at ``x``.

    Delta = ((1-|x|^2)^2 / 4) Delta_E + (n-2) ((1-|x|^2)/2) x . grad for the
    metric 2|dx| / (1-|x|^2).  All stencil points are evaluated in one call.
    """
    x = as_points(x, u.dim)
    single = x.ndim == 1
    x2 = x.reshape(-1, u.dim)
    n, h = u.dim, u.h
    pts = _stencil(x2, h)
    vals = u(pts.reshape(-1, n)).reshape(len(x2), 2 * n + 1)
    c, plus, minus = vals[:, 0], vals[:, 1 : n + 1], vals[:, n + 1 :]
    lap_e = np.sum(plus - 2.0 * c[:, None] + minus, axis=1) / (h * h)
    grad = (plus - minus) / (2.0 * h)
    s = 1.0 - np.sum(x2 * x2, axis=1)
    out = 0.25 * s * s * lap_e + (n - 2) * 0.5 * s * np.sum(x2 * grad, axis=1)
    return complex(out[0]) if single else out


def eigen_residual(u: ScalarField, lam, sample) -> float:
    """max over ``sample`` of |Delta u + (lam^2 + rho^2) u| / (1 + |u|)."""
    x = as_points(sample, u.dim).reshape(-1, u.dim)
    lap = np.atleast_1d(laplace_beltrami(u, x))
    val = u(x)
    res = np.abs(lap - eigenvalue(lam, u.dim) * val) / (1.0 + np.abs(val))
    return float(res.max())
