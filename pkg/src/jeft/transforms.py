"""Spherical, Helgason, Poisson and joint-eigenspace transforms by quadrature.

Functions on X are :class:`InteriorFunction` objects: callables on arrays of
points that also describe their support as a list of geodesic balls
(:meth:`InteriorFunction.pieces`).  Interior integrals are taken over those
balls in geodesic polar coordinates about each ball's centre, so quadrature is
truncated at the declared support rather than at R.

Every transform accepts either a scalar spectral parameter or a 1-D array of
them; array input gives an array indexed ``[lambda, point]``.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .geometry import (
    QuadratureGrid,
    SphereRule,
    as_boundary,
    as_points,
    geodesic_distance,
    horocycle_bracket,
    sphere_area,
    translate,
)
from .specfun import SphericalEvaluator, plancherel_density


class QuadratureWarning(UserWarning):
    pass


class NotRadialError(ValueError):
    pass


# -- function objects -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Piece:
    """One summand of a function, supported in the ball B(center, radius).

    ``profile`` is set when the summand is radial about ``center``; it maps a
    geodesic distance from the centre to the value.
    """

    center: np.ndarray
    radius: float
    fn: Callable
    profile: Callable | None = None


class InteriorFunction:
    """Base for compactly supported functions on the ball."""

    dim: int
    support_radius: float
    is_radial: bool = False

    def __call__(self, x):
        raise NotImplementedError

    def pieces(self) -> list[Piece]:
        return [Piece(np.zeros(self.dim), self.support_radius, self)]


class FunctionOnBall(InteriorFunction):
    """Wrap a plain callable; it must vanish outside B(o, support_radius)."""

    def __init__(self, fn, dim: int, support_radius: float, is_radial: bool = False):
        self.fn = fn
        self.dim = dim
        self.support_radius = float(support_radius)
        self.is_radial = is_radial

    def __call__(self, x):
        return self.fn(np.asarray(x, dtype=float))


class ZeroFunction(InteriorFunction):
    is_radial = True

    def __init__(self, dim: int):
        self.dim = dim
        self.support_radius = 0.0

    def __call__(self, x):
        return np.zeros(np.shape(x)[:-1])

    def pieces(self):
        return []


class BoundaryFunction:
    """A callable on boundary points, shape ``(..., n) -> (...)``."""

    def __init__(self, fn):
        self.fn = fn

    def __call__(self, b):
        return self.fn(np.asarray(b, dtype=float))


def fourier_mode(dim: int, k: int) -> BoundaryFunction:
    """exp(i k theta) on the circle; on the sphere the zonal-free analogue (b1 + i b2)^k."""
    if dim == 2:
        return BoundaryFunction(lambda b: np.exp(1j * k * np.arctan2(b[..., 1], b[..., 0])))
    return BoundaryFunction(lambda b: (b[..., 0] + 1j * b[..., 1]) ** k)


# -- helpers ----------------------------------------------------------------


def _lam_array(lam):
    arr = np.asarray(lam, dtype=complex)
    return arr.reshape(-1), arr.ndim == 0


def _progression(lam: np.ndarray):
    """(lam0, step) if ``lam`` is an arithmetic progression, else None."""
    if lam.size < 3:
        return None
    step = (lam[-1] - lam[0]) / (lam.size - 1)
    expect = lam[0] + step * np.arange(lam.size)
    scale = max(1.0, float(np.abs(lam).max()))
    if np.abs(expect - lam).max() <= 1e-13 * scale:
        return complex(lam[0]), complex(step)
    return None


def _chunks(n: int, workers: int):
    workers = max(1, int(workers))
    size = max(1, math.ceil(n / (4 * workers)))
    return [(i, min(n, i + size)) for i in range(0, n, size)]


def _run(task, n: int, workers: int):
    """Call ``task(i0, i1)`` over index chunks; each chunk writes its own slice."""
    chunks = _chunks(n, workers)
    if workers <= 1 or len(chunks) == 1:
        for i0, i1 in chunks:
            task(i0, i1)
        return
    with ThreadPoolExecutor(max_workers=workers) as ex:
        list(ex.map(lambda c: task(*c), chunks))


def _check_support(f: InteriorFunction, grid: QuadratureGrid):
    R = grid.params.support_radius
    if f.support_radius > R * (1 + 1e-12):
        raise ValueError(f"support radius {f.support_radius} exceeds R = {R}")
    spacing = R / len(grid.radial_nodes)
    if f.support_radius > R - 2 * spacing:
        warnings.warn(
            f"support radius {f.support_radius:g} within two radial nodes of R = {R:g}",
            QuadratureWarning,
            stacklevel=3,
        )


def interior_samples(f: InteriorFunction, grid: QuadratureGrid):
    """Quadrature nodes over the support of ``f`` and the products weight * f(node)."""
    ys, wfs = [], []
    for p in f.pieces():
        z, w = grid.interior_rule(p.center, p.radius)
        ys.append(z)
        wfs.append(w * np.asarray(p.fn(z), dtype=complex))
    if not ys:
        return np.zeros((0, grid.dim)), np.zeros(0, dtype=complex)
    return np.ascontiguousarray(np.concatenate(ys)), np.ascontiguousarray(np.concatenate(wfs))


def l2_norm_sq(f: InteriorFunction, grid: QuadratureGrid) -> float:
    """Integral of |f|^2 over X.

    With f = sum_k f_k and f_k supported in B_k, |f|^2 = sum_k f_k conj(f), and
    each term is integrated over its own ball; the integrands stay smooth even
    where balls overlap.
    """
    total = 0.0
    for p in f.pieces():
        z, w = grid.interior_rule(p.center, p.radius)
        vals = w * np.asarray(p.fn(z), dtype=complex) * np.conj(np.asarray(f(z), dtype=complex))
        total += _kernels.kahan_sum(np.ascontiguousarray(vals)).real
    return total


# -- spherical transform ----------------------------------------------------


def radial_transform(profile, radius: float, lam, grid: QuadratureGrid, evaluator=None):
    """omega_{n-1} * int_0^radius profile(r) phi_lam(r) sinh^{n-1}(r) dr."""
    lam_v, scalar = _lam_array(lam)
    n = grid.dim
    ev = evaluator or SphericalEvaluator(grid.params)
    r, wr = grid.radial_rule(radius)
    base = sphere_area(n) * wr * np.sinh(r) ** (n - 1) * np.asarray(profile(r), dtype=complex)
    out = np.empty(lam_v.size, dtype=complex)
    for k, lm in enumerate(lam_v):
        out[k] = _kernels.kahan_sum(np.ascontiguousarray(base * ev(lm, r)))
    return out[0] if scalar else out


def spherical_transform(f: InteriorFunction, lam, grid: QuadratureGrid, evaluator=None):
    """Harish-Chandra transform hat f(lam) = (f x phi_lam)(o) of a radial function."""
    if not f.is_radial:
        raise NotRadialError("spherical transform needs a radial function")
    _check_support(f, grid)
    if f.support_radius == 0:
        lam_v, scalar = _lam_array(lam)
        return 0j if scalar else np.zeros(lam_v.size, dtype=complex)
    e1 = np.eye(grid.dim)[0]

    def profile(r):
        return f(np.tanh(r / 2.0)[:, None] * e1)

    return radial_transform(profile, f.support_radius, lam, grid, evaluator)


# -- Helgason transform -----------------------------------------------------


def _helgason_from_samples(y, wf, lam_v, b, rho, workers):
    out = np.zeros((lam_v.size, len(b)), dtype=complex)
    if len(y) == 0 or len(b) == 0 or lam_v.size == 0:
        return out
    b = np.ascontiguousarray(b, dtype=float)
    ap = _progression(lam_v)

    if ap is not None:
        lam0, step = ap

        def task(j0, j1):
            _kernels.helgason_sum_ap(lam0, step, lam_v.size, rho, y, wf, b, j0, j1, out)

    else:
        lam_c = np.ascontiguousarray(lam_v)

        def task(j0, j1):
            _kernels.helgason_sum(lam_c, rho, y, wf, b, j0, j1, out)

    _run(task, len(b), workers)
    return out


def helgason_transform(f: InteriorFunction, lam, b, grid: QuadratureGrid, *, workers: int = 1):
    """f~(lam, b) = int_X f(x) exp((-i lam + rho) <x, b>) dx by interior quadrature.

    ``lam`` may be complex.  Returns a complex scalar for scalar ``lam`` and a
    single ``b``; otherwise an array of shape ``(len(lam), len(b))``.
    """
    lam_v, lam_scalar = _lam_array(lam)
    b = as_boundary(b, grid.dim)
    b_single = b.ndim == 1
    b2 = b.reshape(-1, grid.dim)
    _check_support(f, grid)
    y, wf = interior_samples(f, grid)
    out = _helgason_from_samples(y, wf, lam_v, b2, grid.params.rho, workers)
    if lam_scalar and b_single:
        return complex(out[0, 0])
    if b_single:
        return out[:, 0]
    if lam_scalar:
        return out[0]
    return out


def helgason_equivariant(f: InteriorFunction, lam, b, grid: QuadratureGrid, evaluator=None):
    """Helgason transform of a sum of translated radial profiles, without interior quadrature.

    For a piece radial about c with profile g, invariance of dx and the
    identity <t_c z, b> = <z, t_c^{-1} b> + <c, b> give
    f~(lam, b) = exp((-i lam + rho) <c, b>) * hat g(lam).  Only the radial
    transform hat g is computed by quadrature.
    """
    lam_v, lam_scalar = _lam_array(lam)
    b = as_boundary(b, grid.dim)
    b_single = b.ndim == 1
    b2 = b.reshape(-1, grid.dim)
    rho = grid.params.rho
    ev = evaluator or SphericalEvaluator(grid.params)
    out = np.zeros((lam_v.size, len(b2)), dtype=complex)
    for p in f.pieces():
        if p.profile is None:
            raise NotRadialError("equivariant route needs pieces radial about their centres")
        g = radial_transform(p.profile, p.radius, lam_v, grid, ev)
        if np.any(p.center != 0):
            a = horocycle_bracket(p.center, b2)
            out += np.exp(np.multiply.outer(-1j * lam_v + rho, a)) * g[:, None]
        else:
            out += g[:, None]
    if lam_scalar and b_single:
        return complex(out[0, 0])
    if b_single:
        return out[:, 0]
    if lam_scalar:
        return out[0]
    return out


@dataclass(eq=False)
class HelgasonGrid:
    """Samples f~(lam_i, b_j) with the rules needed to integrate against them."""

    values: np.ndarray
    lam: np.ndarray
    lam_weights: np.ndarray | None
    boundary: SphereRule
    grid: QuadratureGrid
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (len(self.lam), len(self.boundary)):
            raise ValueError("values do not match the spectral/boundary grids")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite Helgason samples")


def helgason_grid(
    f: InteriorFunction,
    grid: QuadratureGrid,
    *,
    method: str = "quadrature",
    lam=None,
    lam_weights=None,
    boundary: SphereRule | None = None,
    workers: int = 1,
) -> HelgasonGrid:
    """Fill f~ on (spectral nodes) x (boundary nodes).

    ``method="quadrature"`` is the defining interior integral;
    ``method="equivariant"`` uses :func:`helgason_equivariant`.
    """
    if lam is None:
        lam, lam_weights = grid.spectral_nodes, grid.spectral_weights
    lam = np.asarray(lam)
    boundary = boundary or grid.boundary
    if method == "quadrature":
        vals = helgason_transform(f, lam.reshape(-1), boundary.nodes, grid, workers=workers)
    elif method == "equivariant":
        vals = helgason_equivariant(f, lam.reshape(-1), boundary.nodes, grid)
    else:
        raise ValueError(f"unknown method {method!r}")
    vals = np.asarray(vals).reshape(lam.size, len(boundary))
    return HelgasonGrid(vals, lam.reshape(-1), lam_weights, boundary, grid, {"method": method})


# -- Poisson transform ------------------------------------------------------


def _poisson_values(F, boundary: SphereRule, nl: int) -> np.ndarray:
    if callable(F):
        vals = np.asarray(F(boundary.nodes), dtype=complex)
    else:
        vals = np.asarray(F, dtype=complex)
    if vals.ndim == 1:
        vals = np.broadcast_to(vals, (nl, vals.size))
    if vals.shape != (nl, len(boundary)):
        raise ValueError("boundary values do not match the boundary rule")
    return np.ascontiguousarray(vals)


def poisson_transform(F, lam, x, grid: QuadratureGrid, *, boundary: SphereRule | None = None, workers: int = 1):
    """(P_lam F)(x) = int_B exp((i lam + rho) <x, b>) F(b) db.

    ``F`` is a callable on boundary points or its values on the boundary rule,
    either one row or one row per spectral value.
    """
    lam_v, lam_scalar = _lam_array(lam)
    x = as_points(x, grid.dim)
    x_single = x.ndim == 1
    x2 = np.ascontiguousarray(x.reshape(-1, grid.dim))
    boundary = boundary or grid.boundary
    vals = _poisson_values(F, boundary, lam_v.size)
    out = np.zeros((lam_v.size, len(x2)), dtype=complex)
    b = np.ascontiguousarray(boundary.nodes)
    wb = np.ascontiguousarray(boundary.weights)
    lam_c = np.ascontiguousarray(lam_v)
    rho = grid.params.rho

    def task(p0, p1):
        _kernels.poisson_sum(lam_c, rho, b, wb, vals, x2, p0, p1, out)

    _run(task, len(x2), workers)
    if lam_scalar and x_single:
        return complex(out[0, 0])
    if x_single:
        return out[:, 0]
    if lam_scalar:
        return out[0]
    return out


# -- joint-eigenspace Fourier transform -------------------------------------


def _radial_kernel_sum(y, wf, lam_v, x2, evaluator, kernel_of=None):
    """sum_y wf[y] K_lam(d(x, y)) for each lam and x; K defaults to phi_lam."""
    out = np.zeros((lam_v.size, len(x2)), dtype=complex)
    if len(y) == 0:
        return out
    block = max(1, 2_000_000 // len(y))
    for p0 in range(0, len(x2), block):
        xs = x2[p0 : p0 + block]
        d = geodesic_distance(xs[:, None, :], y[None, :, :])
        r_max = float(d.max())
        for k, lm in enumerate(lam_v):
            kern = kernel_of(lm, r_max) if kernel_of else evaluator.radial_kernel(lm, r_max)
            vals = np.asarray(kern(d.reshape(-1)), dtype=complex).reshape(d.shape) * wf[None, :]
            out[k, p0 : p0 + block] = _kernels.kahan_rowsum(np.ascontiguousarray(vals))
    return out


def _shape_out(out, lam_scalar, x_single):
    if lam_scalar and x_single:
        return complex(out[0, 0])
    if x_single:
        return out[:, 0]
    if lam_scalar:
        return out[0]
    return out


def jeft_direct(f: InteriorFunction, lam, x, grid: QuadratureGrid, *, evaluator=None):
    """f^(lam, x) = (f x phi_lam)(x) = int_X f(y) phi_lam(d(x, y)) dy."""
    lam_v, lam_scalar = _lam_array(lam)
    x = as_points(x, grid.dim)
    x_single = x.ndim == 1
    x2 = x.reshape(-1, grid.dim)
    _check_support(f, grid)
    y, wf = interior_samples(f, grid)
    ev = evaluator or SphericalEvaluator(grid.params)
    return _shape_out(_radial_kernel_sum(y, wf, lam_v, x2, ev), lam_scalar, x_single)


def jeft_composed(f: InteriorFunction, lam, x, grid: QuadratureGrid, *, workers: int = 1, helgason=None):
    """P_lam applied to b -> f~(lam, b): the JEFT through the Helgason transform.

    ``helgason`` may carry precomputed f~ values on ``grid.boundary`` (shape
    ``(len(lam), n_boundary)``) to reuse across calls.
    """
    lam_v, lam_scalar = _lam_array(lam)
    x = as_points(x, grid.dim)
    x_single = x.ndim == 1
    if helgason is None:
        helgason = helgason_transform(f, lam_v, grid.boundary.nodes, grid, workers=workers)
    vals = np.asarray(helgason).reshape(lam_v.size, len(grid.boundary))
    out = poisson_transform(vals, lam_v, x.reshape(-1, grid.dim), grid, workers=workers)
    return _shape_out(np.asarray(out).reshape(lam_v.size, -1), lam_scalar, x_single)


def jeft_equivariant(f: InteriorFunction, lam, x, grid: QuadratureGrid, *, evaluator=None):
    """JEFT of a sum of translated radial profiles: sum_k hat g_k(lam) phi_lam(d(x, c_k))."""
    lam_v, lam_scalar = _lam_array(lam)
    x = as_points(x, grid.dim)
    x_single = x.ndim == 1
    x2 = x.reshape(-1, grid.dim)
    ev = evaluator or SphericalEvaluator(grid.params)
    out = np.zeros((lam_v.size, len(x2)), dtype=complex)
    for p in f.pieces():
        if p.profile is None:
            raise NotRadialError("equivariant route needs pieces radial about their centres")
        g = radial_transform(p.profile, p.radius, lam_v, grid, ev)
        d = geodesic_distance(x2, np.broadcast_to(p.center, x2.shape))
        r_max = float(np.max(d)) if d.size else 0.0
        for k, lm in enumerate(lam_v):
            out[k] += g[k] * ev.radial_kernel(lm, r_max)(d)
    return _shape_out(out, lam_scalar, x_single)


@dataclass(eq=False)
class JeftGrid:
    values: np.ndarray
    lam: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        if self.values.shape != (len(self.lam), len(self.points)):
            raise ValueError("values do not match (lambda, x) grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite JEFT samples")


def jeft_grid(f, grid: QuadratureGrid, points, lam=None, *, route: str = "direct", workers: int = 1) -> JeftGrid:
    lam = grid.spectral_nodes if lam is None else np.asarray(lam).reshape(-1)
    points = as_points(points, grid.dim).reshape(-1, grid.dim)
    if route == "direct":
        vals = jeft_direct(f, lam, points, grid)
    elif route == "composed":
        vals = jeft_composed(f, lam, points, grid, workers=workers)
    else:
        raise ValueError(f"unknown route {route!r}")
    return JeftGrid(np.asarray(vals).reshape(len(lam), len(points)), np.asarray(lam), points)


# -- inversion --------------------------------------------------------------


def inverse_helgason(F: HelgasonGrid, x, *, density=None, workers: int = 1, tail_tol: float = 1e-8):
    """int_0^Lambda int_B F(lam, b) exp((i lam + rho) <x, b>) |c(lam)|^{-2} db dlam.

    ``density`` overrides the Plancherel density (a callable of lam).
    """
    lam = np.asarray(F.lam)
    if np.any(np.abs(np.imag(lam)) > 0) or F.lam_weights is None:
        raise ValueError("inverse needs real spectral nodes with weights")
    lam = np.real(lam)
    grid = F.grid
    peak = np.abs(F.values).max() if F.values.size else 0.0
    if peak > 0:
        tail = np.abs(F.values[np.argmax(lam)]).max() / peak
        if tail > tail_tol:
            warnings.warn(
                f"spectral cutoff {lam.max():.3g} too small: tail/peak = {tail:.2e}",
                QuadratureWarning,
                stacklevel=2,
            )
    dens = plancherel_density(lam, grid.params) if density is None else np.asarray(density(lam), dtype=float)
    x = as_points(x, grid.dim)
    x_single = x.ndim == 1
    x2 = x.reshape(-1, grid.dim)
    per_lam = np.asarray(poisson_transform(F.values, lam, x2, grid, boundary=F.boundary, workers=workers))
    per_lam = per_lam.reshape(lam.size, len(x2))
    coef = (np.asarray(F.lam_weights) * dens)[:, None] * per_lam
    out = _kernels.kahan_rowsum(np.ascontiguousarray(coef.T))
    return complex(out[0]) if x_single else out


def inverse_equivariant(f: InteriorFunction, x, grid: QuadratureGrid, lam, lam_weights, *, density=None, evaluator=None):
    """Truncated inversion of f~ for translated radial profiles.

    The boundary integral of exp((-i lam + rho)<c, b>) exp((i lam + rho)<x, b>)
    is phi_lam(d(x, c)), so the inversion reduces to
    int_0^Lambda f^(lam, x) |c(lam)|^{-2} dlam with f^ as in :func:`jeft_equivariant`.
    Spectral nodes are accumulated one at a time (compensated) to bound memory.
    """
    lam = np.asarray(lam, dtype=float).reshape(-1)
    dens = plancherel_density(lam, grid.params) if density is None else np.asarray(density(lam), dtype=float)
    coef = np.asarray(lam_weights, dtype=float) * dens
    x = as_points(x, grid.dim)
    x_single = x.ndim == 1
    x2 = x.reshape(-1, grid.dim)
    ev = evaluator or SphericalEvaluator(grid.params)
    pieces = f.pieces()
    if any(p.profile is None for p in pieces):
        raise NotRadialError("equivariant route needs pieces radial about their centres")
    hats = [radial_transform(p.profile, p.radius, lam, grid, ev) for p in pieces]
    dists = [geodesic_distance(x2, np.broadcast_to(p.center, x2.shape)) for p in pieces]
    total = np.zeros(len(x2), dtype=complex)
    comp = np.zeros(len(x2), dtype=complex)
    for k, lm in enumerate(lam):
        term = np.zeros(len(x2), dtype=complex)
        for g, d in zip(hats, dists):
            r_max = float(d.max()) if d.size else 0.0
            term += (coef[k] * g[k]) * ev.radial_kernel(lm, r_max)(d)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return complex(total[0]) if x_single else total


# -- convolution ------------------------------------------------------------


def convolve_radial(f, g: InteriorFunction, x, grid: QuadratureGrid):
    """(f x g)(x) = int_X f(y) g(d(x, y)) dy for radial ``g``.

    Integrates in polar coordinates about ``x``: the integral equals
    int g(z) f(t_x z) dz over B(o, supp g), which keeps the nodes on the
    (possibly narrow) support of g.
    """
    if not getattr(g, "is_radial", False):
        raise NotRadialError("convolver must be radial")
    x = as_points(x, grid.dim)
    x_single = x.ndim == 1
    x2 = x.reshape(-1, grid.dim)
    out = np.zeros(len(x2), dtype=complex)
    if g.support_radius == 0:
        return complex(out[0]) if x_single else out
    z, w = grid.interior_rule(np.zeros(grid.dim), g.support_radius)
    wg = w * np.asarray(g(z), dtype=complex)
    block = max(1, 1_000_000 // len(z))
    for p0 in range(0, len(x2), block):
        xs = x2[p0 : p0 + block]
        pts = translate(xs[:, None, :], z[None, :, :])
        vals = np.asarray(f(pts), dtype=complex) * wg[None, :]
        out[p0 : p0 + block] = _kernels.kahan_rowsum(np.ascontiguousarray(vals))
    return complex(out[0]) if x_single else out


class Convolution(InteriorFunction):
    """f x g as an interior function; pieces follow those of f, widened by supp g."""

    def __init__(self, f: InteriorFunction, g: InteriorFunction, grid: QuadratureGrid):
        if not g.is_radial:
            raise NotRadialError("convolver must be radial")
        self.f, self.g, self.grid = f, g, grid
        self.dim = f.dim
        self.support_radius = f.support_radius + g.support_radius
        self.is_radial = f.is_radial

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, self.dim)
        return convolve_radial(self.f, self.g, flat, self.grid).reshape(x.shape[:-1])

    def pieces(self):
        out = []
        for p in self.f.pieces():
            fn = _ConvPiece(p.fn, self.g, self.grid, self.dim)
            out.append(Piece(p.center, p.radius + self.g.support_radius, fn))
        return out


@dataclass(frozen=True, eq=False)
class _ConvPiece:
    fn: Callable
    g: InteriorFunction
    grid: QuadratureGrid
    dim: int

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, self.dim)
        return convolve_radial(self.fn, self.g, flat, self.grid).reshape(x.shape[:-1])
