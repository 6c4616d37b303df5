"""Verification harness: each identity becomes a report with measured errors.

A report carries one or more :class:`Criterion` objects.  The first is the
headline (its value and tolerance are the report's ``max_rel_error`` and
``tolerance``); the report passes only if every criterion holds.  Negative
controls appear as lower-bound criteria: the corrupted computation must miss
by at least the stated amount.

Relative errors use the denominator 1 + |reference| throughout.
"""

from __future__ import annotations

import dataclasses
import json
import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import (
    GridSizes,
    ModelParams,
    QuadratureGrid,
    build_grids,
    gauss_interval,
    geodesic_distance,
    horocycle_bracket,
    sample_points,
    sphere_rule,
)
from .operators import ScalarField, eigen_residual
from .specfun import SphericalEvaluator, plancherel_density, spherical_fn
from .testfns import SUITE_NAMES, make_bump, suite
from .transforms import (
    Convolution,
    HelgasonGrid,
    InteriorFunction,
    QuadratureWarning,
    helgason_equivariant,
    helgason_transform,
    inverse_equivariant,
    inverse_helgason,
    jeft_composed,
    jeft_direct,
    l2_norm_sq,
    poisson_transform,
    spherical_transform,
)

CHECKS = (
    "lemma2",
    "lemma1",
    "kernel_factorization",
    "convolution",
    "plancherel",
    "paley_wiener",
    "eigenproperty",
)


def rel_err(value, reference) -> float:
    value = np.asarray(value)
    reference = np.asarray(reference)
    if value.size == 0:
        return 0.0
    return float(np.max(np.abs(value - reference) / (1.0 + np.abs(reference))))


# -- reports ----------------------------------------------------------------


@dataclass(frozen=True)
class Criterion:
    """``value <= tolerance`` (bound "max") or ``value >= tolerance`` (bound "min")."""

    name: str
    value: float
    tolerance: float
    bound: str = "max"

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        return self.value <= self.tolerance if self.bound == "max" else self.value >= self.tolerance

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "tolerance": self.tolerance,
            "bound": self.bound,
            "passed": self.passed,
        }


@dataclass
class VerificationReport:
    name: str
    criteria: list[Criterion]
    metadata: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def max_rel_error(self) -> float:
        return self.criteria[0].value

    @property
    def tolerance(self) -> float:
        return self.criteria[0].tolerance

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)

    def failed(self) -> list[Criterion]:
        return [c for c in self.criteria if not c.passed]

    def as_dict(self, timings: bool = False) -> dict:
        out = {
            "name": self.name,
            "passed": self.passed,
            "max_rel_error": self.max_rel_error,
            "tolerance": self.tolerance,
            "criteria": [c.as_dict() for c in self.criteria],
            "metadata": self.metadata,
        }
        if timings:
            out["wall_time"] = self.wall_time
        return out


# -- configuration ----------------------------------------------------------


def _h3(dim, h2_value, h3_value):
    return h3_value if dim == 3 else h2_value


@dataclass(frozen=True)
class VerifyConfig:
    """Every knob of the harness.  Build with :meth:`for_model` for model-aware defaults.

    Sizes given as tuples are (polar, azimuth) sphere rules for H^3.
    """

    model: ModelParams = ModelParams()
    sizes: GridSizes = GridSizes()
    workers: int = 1
    seed: int = 0
    # lemma2: direct vs composed JEFT
    lemma2_lambdas: int = 16
    lemma2_points: int = 40
    lemma2_point_radius: float = 1.5
    lemma2_boundary: int | tuple = 256
    lemma2_radial: int = 96
    lemma2_angular: int | tuple = 256
    lemma2_tol: float = 1e-6
    # lemma1: radial restriction
    lemma1_lambdas: int = 16
    lemma1_boundary_sample: int | tuple = 16
    lemma1_angular: int | tuple = 256
    lemma1_tol: float = 1e-8
    # kernel factorization
    kernel_triples: int = 100
    kernel_boundary: int | tuple = 256
    kernel_tol: float = 1e-8
    # convolution
    conv_lambdas: int = 9
    conv_boundary_sample: int | tuple = 8
    conv_outer: tuple = (48, 64)
    conv_inner: tuple = (32, 64)
    conv_tol: float = 1e-4
    # Plancherel
    plancherel_cutoff: float = 100.0
    plancherel_nodes: int = 240
    plancherel_boundary: int | tuple = 256
    plancherel_error_grid: tuple = (48, 64)
    plancherel_generic_boundary: int | tuple = 1024
    plancherel_generic_points: int = 6
    plancherel_tol: float = 1e-3
    plancherel_control_min: float = 0.1
    # Paley-Wiener
    pw_eta_max: float = 2.0
    pw_etas: int = 9
    pw_sigmas: int = 49
    pw_boundary_sample: int | tuple = 8
    pw_tol: float = 0.1
    # eigenproperty
    eig_lambdas: tuple = (0.5, 1.0, 2.0)
    eig_step: float = 1e-3
    eig_points: int = 12
    eig_point_radius: float = 1.5
    eig_tol: float = 1e-4
    eig_ratio: tuple = (3.5, 4.5)
    eig_control_min: float = 0.1

    @classmethod
    def for_model(cls, model: ModelParams, sizes: GridSizes | None = None, **overrides) -> "VerifyConfig":
        n = model.dim
        R = model.support_radius
        defaults = dict(
            model=model,
            sizes=sizes or GridSizes.default(n),
            lemma2_boundary=_h3(n, 256, (64, 128)),
            lemma2_radial=_h3(n, 96, 24),
            lemma2_angular=_h3(n, 256, (12, 24)),
            lemma1_boundary_sample=_h3(n, 16, (4, 8)),
            lemma1_angular=_h3(n, 256, (48, 96)),
            kernel_boundary=_h3(n, 256, (96, 192)),
            conv_boundary_sample=_h3(n, 8, (4, 8)),
            conv_outer=_h3(n, (48, 64), (32, (12, 24))),
            conv_inner=_h3(n, (32, 64), (24, (10, 20))),
            plancherel_boundary=_h3(n, 256, (64, 128)),
            plancherel_error_grid=_h3(n, (48, 64), (32, (16, 32))),
            plancherel_generic_boundary=_h3(n, 1024, (128, 256)),
            pw_boundary_sample=_h3(n, 8, (4, 8)),
            lemma2_point_radius=min(1.5, 3 * R / 8),
            eig_point_radius=min(1.5, 3 * R / 8),
        )
        defaults.update(overrides)
        return cls(**defaults)

    def with_changes(self, **kw) -> "VerifyConfig":
        return dataclasses.replace(self, **kw)

    def as_dict(self) -> dict:
        """Every numerical setting.  ``workers`` is left out: it must not change any result."""
        out = {}
        for f in dataclasses.fields(self):
            if f.name == "workers":
                continue
            v = getattr(self, f.name)
            if f.name == "model":
                v = {"dim": v.dim, "support_radius": v.support_radius, "spectral_cutoff": v.spectral_cutoff}
            elif f.name == "sizes":
                v = v.as_dict()
            out[f.name] = _plain(v)
        return out


def _plain(v):
    if isinstance(v, tuple):
        return [_plain(x) for x in v]
    return v


# -- shared context ---------------------------------------------------------


class Context:
    """Grids, evaluator and suite for one configuration, built lazily and shared by checks."""

    def __init__(self, cfg: VerifyConfig):
        self.cfg = cfg
        self.model = cfg.model
        self.dim = cfg.model.dim
        self.grid = build_grids(cfg.model, cfg.sizes)
        self.evaluator = SphericalEvaluator(cfg.model)
        self.suite = suite(cfg.model)
        self._grids: dict = {}

    def grid_with(self, **kw) -> QuadratureGrid:
        key = repr(sorted(kw.items()))
        g = self._grids.get(key)
        if g is None:
            g = build_grids(self.model, self.cfg.sizes.replace(**kw))
            self._grids[key] = g
        return g

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.cfg.seed, salt])

    def boundary_sample(self, size):
        return sphere_rule(self.dim, size).nodes


def _timed(fn):
    def wrapper(ctx: Context, *a, **kw):
        t0 = time.perf_counter()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", QuadratureWarning)
            rep = fn(ctx, *a, **kw)
        rep.wall_time = time.perf_counter() - t0
        msgs = sorted({str(w.message) for w in caught if issubclass(w.category, QuadratureWarning)})
        if msgs:
            rep.metadata["warnings"] = msgs
        rep.metadata.setdefault("model", ctx.model.name)
        return rep

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# -- checks -----------------------------------------------------------------


def lemma2_error(f: InteriorFunction, grid: QuadratureGrid, lam, x, *, workers=1, corrupt=False):
    """max |direct - composed| / (1 + |direct|) over the (lam, x) grid."""
    d = np.asarray(jeft_direct(f, lam, x, grid)).reshape(len(lam), -1)
    c = np.asarray(jeft_composed(f, lam, x, grid, workers=workers)).reshape(len(lam), -1)
    if corrupt:
        c = c * plancherel_density(np.asarray(lam).real, grid.params)[:, None]
    return rel_err(c, d)


@_timed
def verify_lemma2(ctx: Context, functions=None) -> VerificationReport:
    """JEFT by convolution with phi_lam agrees with the Poisson transform of f~."""
    cfg = ctx.cfg
    g = ctx.grid_with(n_boundary=cfg.lemma2_boundary, n_radial=cfg.lemma2_radial, n_angular=cfg.lemma2_angular)
    lam = np.linspace(0.0, ctx.model.spectral_cutoff, cfg.lemma2_lambdas)
    x = sample_points(ctx.dim, cfg.lemma2_points, cfg.lemma2_point_radius, seed=cfg.seed + 1)
    functions = functions if functions is not None else list(zip(SUITE_NAMES, ctx.suite))
    errs = {name: lemma2_error(f, g, lam, x, workers=cfg.workers) for name, f in functions}
    ctrl = lemma2_error(ctx.suite[0], g, lam, x, workers=cfg.workers, corrupt=True)
    worst = max(errs.values()) if errs else 0.0
    return VerificationReport(
        "lemma2",
        [
            Criterion("direct_vs_composed", worst, cfg.lemma2_tol),
            Criterion("control_density_inserted", ctrl, cfg.lemma2_tol, "min"),
        ],
        {"per_function": errs, "grid": {"lambdas": len(lam), "points": len(x)}},
    )


def lemma1_errors(f: InteriorFunction, grid: QuadratureGrid, lam, b, evaluator, workers=1) -> dict:
    """b-variation of f~, f~ against hat f, and f^(lam, o) against hat f.

    The composed JEFT at o is covered by the lemma2 check, whose sample includes o.
    """
    H = np.asarray(helgason_transform(f, lam, b, grid, workers=workers)).reshape(len(lam), len(b))
    s = np.asarray(spherical_transform(f, lam, grid, evaluator))
    o = np.zeros(grid.dim)
    jd = np.asarray(jeft_direct(f, lam, o, grid, evaluator=evaluator))
    spread = float(np.max(np.abs(H - H[:, :1]) / (1.0 + np.abs(H[:, :1])))) if H.size else 0.0
    return {
        "b_variation": spread,
        "helgason_vs_spherical": rel_err(H, s[:, None]),
        "jeft_direct_origin": rel_err(jd, s),
    }


@_timed
def verify_lemma1(ctx: Context) -> VerificationReport:
    """For radial f, f~ is b-independent, equals hat f, and f^(lam, o) = hat f(lam)."""
    cfg = ctx.cfg
    g = ctx.grid_with(n_angular=cfg.lemma1_angular)
    lam = np.linspace(0.0, ctx.model.spectral_cutoff, cfg.lemma1_lambdas)
    b = ctx.boundary_sample(cfg.lemma1_boundary_sample)
    per = {}
    for name, f in zip(SUITE_NAMES, ctx.suite):
        if f.is_radial:
            per[name] = lemma1_errors(f, g, lam, b, ctx.evaluator, cfg.workers)
    worst = max((max(v.values()) for v in per.values()), default=0.0)
    off = ctx.suite[SUITE_NAMES.index("off_center")]
    H = np.asarray(helgason_transform(off, lam, b, g, workers=cfg.workers))
    ctrl = float(np.max(np.abs(H - H[:, :1]) / (1.0 + np.abs(H[:, :1]))))
    return VerificationReport(
        "lemma1",
        [
            Criterion("radial_restriction", worst, cfg.lemma1_tol),
            Criterion("control_off_center_b_variation", ctrl, cfg.lemma1_tol, "min"),
        ],
        {"per_function": per},
    )


def kernel_factorization_error(dim, rule, x, y, lam) -> float:
    """Boundary integral of the two exponential kernels against phi_lam(d(x, y))."""
    rho = (dim - 1) / 2
    ax = horocycle_bracket(x[:, None, :], rule.nodes[None, :, :])
    ay = horocycle_bracket(y[:, None, :], rule.nodes[None, :, :])
    lam = np.asarray(lam)[:, None]
    integrand = np.exp((1j * lam + rho) * ax) * np.exp((-1j * lam + rho) * ay)
    lhs = integrand @ rule.weights
    d = np.atleast_1d(geodesic_distance(x, y))
    # independent right side: closed form on H^3, a differently parametrised quadrature on H^2
    rhs = np.array([spherical_fn(l, r, dim) for l, r in zip(lam[:, 0], d)])
    return rel_err(lhs, rhs)


@_timed
def verify_kernel_factorization(ctx: Context) -> VerificationReport:
    """int_B e^{(i lam + rho)<x,b>} e^{(-i lam + rho)<y,b>} db = phi_lam(d(x, y))."""
    cfg = ctx.cfg
    R = ctx.model.support_radius
    rng = ctx.rng(3)
    n = cfg.kernel_triples
    x = sample_points(ctx.dim, n, R / 2, seed=cfg.seed + 31, include_origin=False)
    y = sample_points(ctx.dim, n, R / 2, seed=cfg.seed + 32, include_origin=False)
    lam = rng.uniform(0.0, ctx.model.spectral_cutoff, n)
    rule = sphere_rule(ctx.dim, cfg.kernel_boundary)
    err = kernel_factorization_error(ctx.dim, rule, x, y, lam)
    o = np.zeros((1, ctx.dim))
    err_o = kernel_factorization_error(ctx.dim, rule, o, o, np.array([ctx.model.spectral_cutoff]))
    return VerificationReport(
        "kernel_factorization",
        [Criterion("boundary_integral_vs_phi", max(err, err_o), cfg.kernel_tol)],
        {"triples": n, "radius": R / 2, "origin_error": err_o},
    )


@_timed
def verify_convolution(ctx: Context) -> VerificationReport:
    """(f x g)~(lam, b) = f~(lam, b) hat g(lam) for radial compactly supported g."""
    cfg = ctx.cfg
    R = ctx.model.support_radius
    gfun = make_bump(ctx.model, R / 8)
    outer = ctx.grid_with(n_radial=cfg.conv_outer[0], n_angular=cfg.conv_outer[1])
    inner = ctx.grid_with(n_radial=cfg.conv_inner[0], n_angular=cfg.conv_inner[1])
    lam = np.linspace(0.0, ctx.model.spectral_cutoff, cfg.conv_lambdas)
    b = ctx.boundary_sample(cfg.conv_boundary_sample)
    ghat = np.asarray(spherical_transform(gfun, lam, ctx.grid, ctx.evaluator))
    per = {}
    for name in ("off_center", "radial_quarter"):
        f = ctx.suite[SUITE_NAMES.index(name)]
        fg = Convolution(f, gfun, inner)
        lhs = np.asarray(helgason_transform(fg, lam, b, outer, workers=cfg.workers))
        ftil = np.asarray(helgason_transform(f, lam, b, ctx.grid, workers=cfg.workers))
        per[name] = rel_err(lhs, ftil * ghat[:, None])
    return VerificationReport(
        "convolution",
        [Criterion("factorization", max(per.values()), cfg.conv_tol)],
        {"per_function": per, "convolver_support": R / 8},
    )


def _plancherel_member(ctx: Context, f, lam, wl, boundary, density) -> tuple[float, float]:
    cfg = ctx.cfg
    g = ctx.grid
    norm2 = l2_norm_sq(f, g)
    H = np.asarray(helgason_equivariant(f, lam, boundary.nodes, g, evaluator=ctx.evaluator))
    spec = float(np.sum(wl * density(lam) * (np.abs(H) ** 2 @ boundary.weights)))
    eg = ctx.grid_with(n_radial=cfg.plancherel_error_grid[0], n_angular=cfg.plancherel_error_grid[1])
    z, w = eg.interior_rule(np.zeros(ctx.dim), f.support_radius)
    fz = f(z)
    back = inverse_equivariant(f, z, g, lam, wl, evaluator=ctx.evaluator)
    l2 = math.sqrt(float(np.sum(w * np.abs(back - fz) ** 2)) / float(np.sum(w * np.abs(fz) ** 2)))
    return spec / norm2, l2


@_timed
def verify_plancherel(ctx: Context) -> VerificationReport:
    """Parseval with density |c(lam)|^{-2} and the L^2 round trip, for every suite member.

    f~ is filled through :func:`helgason_equivariant`; two cross-checks tie that
    route to the defining quadrature and to :func:`inverse_helgason`.
    """
    cfg = ctx.cfg
    lam, wl = gauss_interval(cfg.plancherel_nodes, 0.0, cfg.plancherel_cutoff)
    boundary = sphere_rule(ctx.dim, cfg.plancherel_boundary)
    dens = lambda l: plancherel_density(l, ctx.model)  # noqa: E731
    per = {}
    for name, f in zip(SUITE_NAMES, ctx.suite):
        ratio, l2 = _plancherel_member(ctx, f, lam, wl, boundary, dens)
        per[name] = {"parseval_ratio": ratio, "roundtrip_l2": l2}
    parseval = max(abs(v["parseval_ratio"] - 1.0) for v in per.values())
    roundtrip = max(v["roundtrip_l2"] for v in per.values())

    f0 = ctx.suite[0]
    H0 = np.asarray(helgason_equivariant(f0, lam, boundary.nodes, ctx.grid, evaluator=ctx.evaluator))
    spec_flat = float(np.sum(wl * (np.abs(H0) ** 2 @ boundary.weights)))
    control = abs(spec_flat / l2_norm_sq(f0, ctx.grid) - 1.0)

    route, inv = _plancherel_routes(ctx, lam, wl)
    return VerificationReport(
        "plancherel",
        [
            Criterion("parseval", parseval, cfg.plancherel_tol),
            Criterion("roundtrip_l2", roundtrip, cfg.plancherel_tol),
            Criterion("equivariant_vs_quadrature", route, 1e-6),
            Criterion("inverse_generic_vs_structured", inv, 1e-6),
            Criterion("control_flat_density", control, cfg.plancherel_control_min, "min"),
        ],
        {
            "per_function": per,
            "cutoff": cfg.plancherel_cutoff,
            "nodes": cfg.plancherel_nodes,
            "tail_over_peak": _tail(ctx, lam, boundary),
        },
    )


def _tail(ctx, lam, boundary):
    out = {}
    for name, f in zip(SUITE_NAMES, ctx.suite):
        H = np.abs(helgason_equivariant(f, lam[[0, -1]], boundary.nodes[:4], ctx.grid, evaluator=ctx.evaluator))
        out[name] = float(H[-1].max() / H[0].max())
    return out


def _plancherel_routes(ctx: Context, lam, wl) -> tuple[float, float]:
    """Cross-check the equivariant fill against interior quadrature, and the
    structured inversion against :func:`inverse_helgason`, on the off-centre member."""
    cfg = ctx.cfg
    f = ctx.suite[SUITE_NAMES.index("off_center")]
    # the interior rules are sized for [0, Lambda]; beyond it the quadrature, not the
    # equivariance, would be under test
    sub = np.linspace(0.0, ctx.model.spectral_cutoff, 16)
    b = ctx.boundary_sample(cfg.lemma1_boundary_sample)
    g = ctx.grid_with(n_angular=cfg.lemma1_angular)
    quad = np.asarray(helgason_transform(f, sub, b, g, workers=cfg.workers))
    equi = np.asarray(helgason_equivariant(f, sub, b, g, evaluator=ctx.evaluator))
    route = rel_err(quad, equi)

    rule = sphere_rule(ctx.dim, cfg.plancherel_generic_boundary)
    gg = ctx.grid_with(n_boundary=cfg.plancherel_generic_boundary)
    H = np.asarray(helgason_equivariant(f, lam, rule.nodes, gg, evaluator=ctx.evaluator))
    Fg = HelgasonGrid(H, lam, wl, rule, gg)
    x = sample_points(ctx.dim, cfg.plancherel_generic_points, 0.5, seed=cfg.seed + 7)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", QuadratureWarning)
        generic = inverse_helgason(Fg, x, workers=cfg.workers)
    structured = inverse_equivariant(f, x, ctx.grid, lam, wl, evaluator=ctx.evaluator)
    return route, rel_err(generic, structured)


def pw_growth(f, grid, sigmas, etas, b, workers=1) -> np.ndarray:
    """m(eta) = log max_{sigma, b} |f~(sigma + i eta, b)|."""
    out = []
    for e in etas:
        H = np.asarray(helgason_transform(f, sigmas + 1j * e, b, grid, workers=workers))
        out.append(math.log(float(np.abs(H).max())))
    return np.array(out)


def fit_slope(etas, m) -> float:
    A = np.vstack([np.abs(etas), np.ones_like(etas)]).T
    return float(np.linalg.lstsq(A, m, rcond=None)[0][0])


@_timed
def verify_paley_wiener(ctx: Context) -> VerificationReport:
    """Exponential type of f~ in Im(lam) against the support radius.

    The slope of m(eta) over |eta| <= eta_max is compared with the true radius.
    """
    cfg = ctx.cfg
    R = ctx.model.support_radius
    etas = np.linspace(-cfg.pw_eta_max, cfg.pw_eta_max, cfg.pw_etas)
    sigmas = np.linspace(0.0, ctx.model.spectral_cutoff, cfg.pw_sigmas)
    b = ctx.boundary_sample(cfg.pw_boundary_sample)
    slopes, errs, curves = {}, {}, {}
    for name, true_r in (("radial_half", R / 2), ("radial_quarter", R / 4)):
        f = ctx.suite[SUITE_NAMES.index(name)]
        m = pw_growth(f, ctx.grid, sigmas, etas, b, cfg.workers)
        slopes[name] = fit_slope(etas, m)
        errs[name] = abs(slopes[name] - true_r) / true_r
        curves[name] = m.tolist()
        _pw_resolution_warning(ctx, f, sigmas, etas[-1], b)
    order = slopes["radial_half"] - slopes["radial_quarter"]
    ga = np.asarray(helgason_transform(ctx.suite[0], ctx.grid.spectral_nodes[::8], b, ctx.grid))
    gb = np.asarray(helgason_transform(ctx.suite[1], ctx.grid.spectral_nodes[::8], b, ctx.grid))
    inj = float(np.abs(ga - gb).max())
    return VerificationReport(
        "paley_wiener",
        [
            Criterion("slope_vs_support", max(errs.values()), cfg.pw_tol),
            Criterion("slope_ordering", order, 0.0, "min"),
            Criterion("injectivity_proxy", inj, 1e-6, "min"),
        ],
        {"slopes": slopes, "relative_errors": errs, "etas": etas.tolist(), "m": curves},
    )


def _pw_resolution_warning(ctx, f, sigmas, eta, b):
    """Compare the largest-|eta| row against a grid with 1.5x the radial nodes."""
    fine = ctx.grid_with(n_radial=int(1.5 * ctx.cfg.sizes.n_radial))
    lam = sigmas + 1j * eta
    a = np.asarray(helgason_transform(f, lam, b, ctx.grid))
    c = np.asarray(helgason_transform(f, lam, b, fine))
    err = float(np.abs(a - c).max() / np.abs(c).max())
    if err > 1e-8:
        warnings.warn(f"Paley-Wiener quadrature error {err:.1e} at eta = {eta:g}", QuadratureWarning)


def _eig_fields(ctx: Context, grid: QuadratureGrid):
    """Yield (name, lam, field): JEFT fields of every suite member by both routes, and Poisson fields."""
    lams = np.asarray(ctx.cfg.eig_lambdas, dtype=float)
    nodes = grid.boundary.nodes
    for name, f in zip(SUITE_NAMES, ctx.suite):
        H = np.asarray(helgason_transform(f, lams, nodes, grid, workers=ctx.cfg.workers))
        for k, lam in enumerate(lams):
            yield f"jeft_composed/{name}", lam, lambda x, h=H[k], lam=lam: poisson_transform(h, lam, x, grid)
            yield f"jeft_direct/{name}", lam, lambda x, f=f, lam=lam: jeft_direct(f, lam, x, grid, evaluator=ctx.evaluator)
    ones = np.ones(len(nodes))
    mode = nodes[:, 0] + 1j * nodes[:, 1]
    for lam in lams:
        yield "poisson/one", lam, lambda x, lam=lam: poisson_transform(ones, lam, x, grid)
        yield "poisson/first_mode", lam, lambda x, lam=lam: poisson_transform(mode, lam, x, grid)


@_timed
def verify_eigenproperty(ctx: Context) -> VerificationReport:
    """Delta u = -(lam^2 + rho^2) u for JEFT and Poisson fields; O(h^2) stencil error.

    Every field here is an exact eigenfunction whatever the interior weights, so
    the lighter lemma2 grid is used.
    """
    cfg = ctx.cfg
    grid = ctx.grid_with(n_boundary=cfg.lemma2_boundary, n_radial=cfg.lemma2_radial, n_angular=cfg.lemma2_angular)
    x = sample_points(ctx.dim, cfg.eig_points, cfg.eig_point_radius, seed=cfg.seed + 5)
    worst, ratios, per = 0.0, [], {}
    for name, lam, fn in _eig_fields(ctx, grid):
        u = ScalarField(fn, ctx.dim, cfg.eig_step)
        r1 = eigen_residual(u, lam, x)
        r2 = eigen_residual(u.with_step(cfg.eig_step / 2), lam, x)
        worst = max(worst, r1)
        ratios.append(r1 / r2 if r2 > 0 else math.inf)
        per[f"{name}@{lam:g}"] = {"residual": r1, "ratio": ratios[-1]}
    # negative control: a Helgason value times a bump is not an eigenfunction
    f = ctx.suite[SUITE_NAMES.index("off_center")]
    control = math.inf
    for lam in cfg.eig_lambdas:
        h0 = complex(helgason_transform(f, lam, grid.boundary.nodes[0], grid))
        bad = ScalarField(lambda z, h0=h0: h0 * f(z), ctx.dim, cfg.eig_step)
        control = min(control, eigen_residual(bad, lam, x))
    lo, hi = cfg.eig_ratio
    ratio_dev = max(max(lo - r, r - hi, 0.0) for r in ratios)
    return VerificationReport(
        "eigenproperty",
        [
            Criterion("residual", worst, cfg.eig_tol),
            Criterion("convergence_ratio_outside_band", ratio_dev, 0.0),
            Criterion("control_non_eigen_field", control, cfg.eig_control_min, "min"),
        ],
        {"per_field": per, "ratio_min": min(ratios), "ratio_max": max(ratios), "step": cfg.eig_step},
    )


CHECK_FUNCS: dict[str, Callable[[Context], VerificationReport]] = {
    "lemma2": verify_lemma2,
    "lemma1": verify_lemma1,
    "kernel_factorization": verify_kernel_factorization,
    "convolution": verify_convolution,
    "plancherel": verify_plancherel,
    "paley_wiener": verify_paley_wiener,
    "eigenproperty": verify_eigenproperty,
}


def run_checks(cfg: VerifyConfig, names=None, context: Context | None = None) -> list[VerificationReport]:
    names = list(names) if names else list(CHECKS)
    unknown = [n for n in names if n not in CHECK_FUNCS]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}")
    ctx = context or Context(cfg)
    return [CHECK_FUNCS[n](ctx) for n in names]


def manifest(cfg: VerifyConfig, reports: list[VerificationReport], timings: bool = False) -> str:
    """JSON text with the effective config and every report (sorted keys, stable floats)."""
    doc = {
        "config": cfg.as_dict(),
        "all_passed": all(r.passed for r in reports),
        "reports": [r.as_dict(timings) for r in reports],
    }
    return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")
