"""Unit-ball models of the hyperbolic plane and hyperbolic 3-space.

Curvature is -1 with metric 2|dz| / (1 - |z|^2).  Interior points are arrays
with last axis of length ``n`` and Euclidean norm < 1; boundary points are unit
vectors.  The origin is the base point o.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import _kernels


class DomainError(ValueError):
    """A point lies outside the open ball (or off the unit sphere)."""


@dataclass(frozen=True)
class ModelParams:
    """Which rank-one space, plus truncation radii.

    ``support_radius`` is R (geodesic units) and ``spectral_cutoff`` is the
    upper end Lambda of the spectral interval [0, Lambda].
    """

    dim: int = 2
    support_radius: float = 4.0
    spectral_cutoff: float = 12.0

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {self.dim}")
        for name in ("support_radius", "spectral_cutoff"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and positive, got {v}")

    @property
    def rho(self) -> float:
        return (self.dim - 1) / 2

    @property
    def name(self) -> str:
        return f"h{self.dim}"

    @classmethod
    def from_name(cls, name: str, **kw) -> "ModelParams":
        try:
            dim = {"h2": 2, "h3": 3}[name.lower()]
        except KeyError:
            raise ValueError(f"unknown model {name!r} (expected h2 or h3)") from None
        return cls(dim=dim, **kw)


def sphere_area(n: int) -> float:
    """Euclidean measure of the unit sphere S^{n-1} in R^n."""
    return 2 * math.pi if n == 2 else 4 * math.pi


# -- validation -------------------------------------------------------------


def as_points(x, n: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 or (n is not None and x.shape[-1] != n):
        raise DomainError(f"expected points with last axis {n}, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DomainError("non-finite coordinates")
    if np.any(np.sum(x * x, axis=-1) >= 1.0):
        raise DomainError("point not in the open unit ball")
    return x


def as_boundary(b, n: int | None = None, atol: float = 1e-12) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if b.ndim == 0 or (n is not None and b.shape[-1] != n):
        raise DomainError(f"expected boundary points with last axis {n}, got shape {b.shape}")
    if np.any(np.abs(np.linalg.norm(b, axis=-1) - 1.0) > atol):
        raise DomainError("boundary point is not a unit vector")
    return b


# -- metric quantities ------------------------------------------------------


def geodesic_distance(x, y) -> np.ndarray | float:
    """Hyperbolic distance; broadcasts over leading axes.

    Uses sinh^2(d/2) = |x-y|^2 / ((1-|x|^2)(1-|y|^2)), which is the
    cancellation-free form of cosh d = 1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2)).
    """
    x = as_points(x)
    y = as_points(y)
    diff = np.sum((x - y) ** 2, axis=-1)
    den = (1.0 - np.sum(x * x, axis=-1)) * (1.0 - np.sum(y * y, axis=-1))
    d = 2.0 * np.arcsinh(np.sqrt(diff / den))
    return float(d) if np.ndim(d) == 0 else d


def geodesic_radius(x) -> np.ndarray | float:
    """d(o, x) = 2 artanh |x|."""
    x = as_points(x)
    d = 2.0 * np.arctanh(np.linalg.norm(x, axis=-1))
    return float(d) if np.ndim(d) == 0 else d


def point_at(direction, r) -> np.ndarray:
    """Point at geodesic distance ``r`` from o along a unit ``direction``."""
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction, axis=-1, keepdims=True)
    return np.tanh(np.asarray(r, dtype=float)[..., None] / 2.0) * direction


def horocycle_bracket(x, b) -> np.ndarray | float:
    """The horocycle bracket <x, b> = log((1 - |x|^2) / |x - b|^2).

    Signed distance from o to the horocycle through ``x`` tangent to the sphere
    at infinity at ``b``; positive towards ``b``.
    """
    x = as_points(x)
    b = as_boundary(b)
    out = np.log((1.0 - np.sum(x * x, axis=-1)) / np.sum((x - b) ** 2, axis=-1))
    return float(out) if np.ndim(out) == 0 else out


def translate(a, z) -> np.ndarray:
    """Isometry of the ball taking o to ``a``, applied to ``z``.

    Disk: (z + a) / (1 + conj(a) z).  Ball: Moebius addition a (+) z.  Also
    valid for ``|z| = 1``, where it is the induced boundary map.
    """
    a = np.asarray(a, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any(np.sum(a * a, axis=-1) >= 1.0):
        raise DomainError("translation parameter not in the open unit ball")
    if np.any(np.sum(z * z, axis=-1) > 1.0 + 1e-12):
        raise DomainError("point outside the closed unit ball")
    n = a.shape[-1]
    if n == 2:
        ac = a[..., 0] + 1j * a[..., 1]
        zc = z[..., 0] + 1j * z[..., 1]
        w = (zc + ac) / (1.0 + np.conj(ac) * zc)
        return np.stack([w.real, w.imag], axis=-1)
    az = np.sum(a * z, axis=-1)[..., None]
    a2 = np.sum(a * a, axis=-1)[..., None]
    z2 = np.sum(z * z, axis=-1)[..., None]
    return ((1 + 2 * az + z2) * a + (1 - a2) * z) / (1 + 2 * az + a2 * z2)


# -- quadrature -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SphereRule:
    """Nodes on S^{n-1} with weights normalised to total mass 1."""

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.weights)


def sphere_rule(n: int, size) -> SphereRule:
    """Uniform trapezoid on the circle, or Gauss(cos polar) x uniform(azimuth).

    For ``n = 3``, ``size`` is ``(n_polar, n_azimuth)`` or an int ``k`` meaning
    ``(k, 2k)``.
    """
    if n == 2:
        m = int(size)
        if m < 4:
            raise ValueError("boundary size must be >= 4")
        th = 2 * np.pi * np.arange(m) / m
        return SphereRule(np.stack([np.cos(th), np.sin(th)], axis=-1), np.full(m, 1.0 / m))
    nt, nphi = (int(size), 2 * int(size)) if np.isscalar(size) else map(int, size)
    if nt < 4 or nphi < 4:
        raise ValueError("boundary sizes must be >= 4")
    u, w = leggauss(nt)
    ph = 2 * np.pi * np.arange(nphi) / nphi
    s = np.sqrt(1.0 - u * u)
    nodes = np.stack(
        [
            np.outer(s, np.cos(ph)),
            np.outer(s, np.sin(ph)),
            np.outer(u, np.ones(nphi)),
        ],
        axis=-1,
    ).reshape(-1, 3)
    weights = np.outer(w / 2.0, np.full(nphi, 1.0 / nphi)).reshape(-1)
    return SphereRule(nodes, weights)


def gauss_interval(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


@dataclass(frozen=True)
class GridSizes:
    """Node counts.  ``n_angular`` (interior sphere factor) defaults to the boundary size."""

    n_radial: int = 96
    n_boundary: int | tuple[int, int] = 256
    n_spectral: int = 128
    n_angular: int | tuple[int, int] | None = None

    @classmethod
    def default(cls, dim: int) -> "GridSizes":
        return cls() if dim == 2 else cls(n_boundary=(32, 64))

    def replace(self, **kw) -> "GridSizes":
        d = dict(self.__dict__)
        d.update(kw)
        return GridSizes(**d)

    def as_dict(self) -> dict:
        def plain(v):
            return list(v) if isinstance(v, tuple) else v

        return {k: plain(v) for k, v in self.__dict__.items()}


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    params: ModelParams
    sizes: GridSizes
    radial_nodes: np.ndarray
    radial_weights: np.ndarray
    boundary: SphereRule
    angular: SphereRule
    spectral_nodes: np.ndarray
    spectral_weights: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.params.dim

    def radial_rule(self, radius: float) -> tuple[np.ndarray, np.ndarray]:
        """Radial Gauss rule on [0, radius] (the [0, R] rule rescaled)."""
        s = radius / self.params.support_radius
        return self.radial_nodes * s, self.radial_weights * s

    def interior_rule(self, center, radius: float) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights for integrating over the geodesic ball B(center, radius).

        Geodesic polar coordinates about ``center``; the weight includes the
        volume factor sinh^{n-1}(r) and the unnormalised sphere measure.
        """
        key = ("interior", tuple(np.asarray(center, dtype=float).tolist()), float(radius))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        n = self.dim
        r, wr = self.radial_rule(radius)
        t = np.tanh(r / 2.0)
        z = (t[:, None, None] * self.angular.nodes[None, :, :]).reshape(-1, n)
        w = (
            (wr * np.sinh(r) ** (n - 1))[:, None] * (sphere_area(n) * self.angular.weights)[None, :]
        ).reshape(-1)
        center = np.asarray(center, dtype=float)
        if np.any(center != 0):
            z = translate(center, z)
        z.setflags(write=False)
        w.setflags(write=False)
        self._cache[key] = (z, w)
        return z, w


def build_grids(params: ModelParams, sizes: GridSizes | None = None) -> QuadratureGrid:
    """Radial and spectral Gauss-Legendre rules plus boundary/angular sphere rules."""
    sizes = sizes or GridSizes.default(params.dim)
    if sizes.n_radial < 4 or sizes.n_spectral < 4:
        raise ValueError("radial and spectral sizes must be >= 4")
    r, wr = gauss_interval(sizes.n_radial, 0.0, params.support_radius)
    lam, wl = gauss_interval(sizes.n_spectral, 0.0, params.spectral_cutoff)
    boundary = sphere_rule(params.dim, sizes.n_boundary)
    ang = sizes.n_angular if sizes.n_angular is not None else sizes.n_boundary
    angular = sphere_rule(params.dim, ang)
    return QuadratureGrid(params, sizes, r, wr, boundary, angular, lam, wl)


def integrate(weights, values) -> complex:
    """Compensated, order-fixed quadrature sum."""
    prod = np.asarray(weights, dtype=float) * np.asarray(values, dtype=complex)
    return _kernels.kahan_sum(np.ascontiguousarray(prod.reshape(-1)))


def sample_points(n: int, count: int, max_radius: float, seed: int = 0, include_origin: bool = True):
    """Deterministic pseudo-random points with geodesic radius <= ``max_radius``."""
    rng = np.random.default_rng(seed)
    d = rng.normal(size=(count, n))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    r = max_radius * rng.random(count) ** (1.0 / n)
    pts = point_at(d, r)
    if include_origin and count:
        pts[0] = 0.0
    return pts


def unit_vector(n: int, angle: float, tilt: float = 0.0) -> np.ndarray:
    """Direction at polar ``angle`` in the first two axes, lifted by ``tilt`` in 3-D."""
    if n == 2:
        return np.array([math.cos(angle), math.sin(angle)])
    c = math.cos(tilt)
    return np.array([c * math.cos(angle), c * math.sin(angle), math.sin(tilt)])
