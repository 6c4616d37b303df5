"""Smooth compactly supported test functions on the ball."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import ModelParams, as_points, geodesic_distance, geodesic_radius, point_at, unit_vector
from .transforms import InteriorFunction, Piece


@dataclass(frozen=True, eq=False)
class BumpSpec:
    """amplitude * exp(-1 / (1 - (d(center, x) / support)^2)) on B(center, support)."""

    support: float
    center: np.ndarray
    amplitude: float = 1.0
    max_radius: float | None = None

    def __post_init__(self):
        c = as_points(np.asarray(self.center, dtype=float))
        if c.ndim != 1:
            raise ValueError("center must be a single point")
        object.__setattr__(self, "center", c)
        if not (math.isfinite(self.support) and self.support > 0):
            raise ValueError("support must be finite and positive")
        if not math.isfinite(self.amplitude):
            raise ValueError("amplitude must be finite")
        if self.max_radius is not None and self.reach > self.max_radius * (1 + 1e-12):
            raise ValueError(
                f"bump reaches radius {self.reach:g} beyond R = {self.max_radius:g}"
            )

    @property
    def reach(self) -> float:
        """d(o, center) + support: the radius of the smallest o-centred ball holding the bump."""
        return float(geodesic_radius(self.center)) + self.support

    @property
    def dim(self) -> int:
        return len(self.center)


def bump_profile(d, support: float, amplitude: float = 1.0):
    """Radial profile as a function of distance from the centre; exactly 0 for d >= support."""
    d = np.asarray(d, dtype=float)
    s = d / support
    inside = s < 1.0
    q = np.where(inside, 1.0 - s * s, 1.0)
    return np.where(inside, amplitude * np.exp(-1.0 / q), 0.0)


class Bump(InteriorFunction):
    def __init__(self, spec: BumpSpec):
        self.spec = spec
        self.dim = spec.dim
        self.support_radius = spec.reach
        self.is_radial = not np.any(spec.center)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.is_radial:
            d = geodesic_radius(x)
        else:
            d = geodesic_distance(x, np.broadcast_to(self.spec.center, x.shape))
        return bump_profile(d, self.spec.support, self.spec.amplitude)

    def profile(self, r):
        return bump_profile(r, self.spec.support, self.spec.amplitude)

    def pieces(self):
        return [Piece(self.spec.center, self.spec.support, self, self.profile)]

    def __repr__(self):
        return f"Bump(support={self.spec.support:g}, center_r={self.spec.reach - self.spec.support:g})"


def bump(spec: BumpSpec) -> Bump:
    return Bump(spec)


class BumpSum(InteriorFunction):
    """Finite linear combination of bumps (coefficients live in the amplitudes)."""

    def __init__(self, terms: list[Bump]):
        if not terms:
            raise ValueError("need at least one term")
        self.terms = list(terms)
        self.dim = terms[0].dim
        self.support_radius = max(t.support_radius for t in terms)
        self.is_radial = all(t.is_radial for t in terms)

    def __call__(self, x):
        out = self.terms[0](x)
        for t in self.terms[1:]:
            out = out + t(x)
        return out

    def pieces(self):
        # each piece integrates its own term only, so overlapping supports are not double counted
        return [Piece(t.spec.center, t.spec.support, t, t.profile) for t in self.terms]


def make_bump(params: ModelParams, support: float, center_r: float = 0.0, amplitude: float = 1.0, direction=None) -> Bump:
    n = params.dim
    direction = unit_vector(n, 0.7, 0.3) if direction is None else np.asarray(direction, dtype=float)
    center = point_at(direction, center_r) if center_r > 0 else np.zeros(n)
    return Bump(BumpSpec(support, center, amplitude, params.support_radius))


SUITE_NAMES = ("radial_half", "radial_quarter", "off_center", "two_bumps", "sign_changing")


def suite(params: ModelParams) -> list[InteriorFunction]:
    """Five fixed test functions, each supported in B(o, R/2)."""
    R = params.support_radius
    n = params.dim
    u1 = unit_vector(n, 0.7, 0.3)
    u2 = unit_vector(n, 2.9, -0.5)
    return [
        make_bump(params, R / 2),
        make_bump(params, R / 4),
        make_bump(params, R / 4, center_r=R / 4, direction=u1),
        BumpSum(
            [
                make_bump(params, 3 * R / 16, center_r=R / 4, direction=u1),
                make_bump(params, R / 8, center_r=R / 4, direction=u2, amplitude=0.5),
            ]
        ),
        BumpSum(
            [
                make_bump(params, 3 * R / 8),
                make_bump(params, R / 8, center_r=R / 8, direction=u2, amplitude=-1.5),
            ]
        ),
    ]
