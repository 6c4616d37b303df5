import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jeft.geometry import GridSizes, ModelParams, build_grids, geodesic_radius, point_at, sample_points, sphere_rule
from jeft.specfun import spherical_fn
from jeft.testfns import make_bump, suite
from jeft.transforms import (
    Convolution,
    FunctionOnBall,
    HelgasonGrid,
    NotRadialError,
    QuadratureWarning,
    ZeroFunction,
    convolve_radial,
    helgason_equivariant,
    helgason_grid,
    helgason_transform,
    inverse_equivariant,
    inverse_helgason,
    jeft_composed,
    jeft_direct,
    jeft_equivariant,
    poisson_transform,
    spherical_transform,
)


def rel(a, b):
    return np.max(np.abs(np.asarray(a) - np.asarray(b)) / (1 + np.abs(np.asarray(b))))


class TestSpherical:
    def test_zero(self, model, small_grid):
        assert spherical_transform(ZeroFunction(model.dim), 2.0, small_grid) == 0

    def test_even_in_lambda(self, model, small_grid):
        f = make_bump(model, 2.0)
        lam = np.array([0.3, 1.0, 4.0, 11.0])
        assert np.max(np.abs(spherical_transform(f, lam, small_grid) - spherical_transform(f, -lam, small_grid))) <= 1e-12

    def test_requires_radial(self, model, small_grid):
        with pytest.raises(NotRadialError):
            spherical_transform(make_bump(model, 1.0, center_r=0.5), 1.0, small_grid)

    def test_volume_integral_at_i_rho(self, model):
        """phi_{i rho} = 1, so hat f(i rho) is the volume integral; scipy quad is the oracle."""
        from scipy.integrate import quad

        g = build_grids(model)
        f = make_bump(model, 2.0)
        area = 2 * np.pi if model.dim == 2 else 4 * np.pi
        ref, _ = quad(lambda r: area * f.profile(r) * np.sinh(r) ** (model.dim - 1), 0, 2, epsabs=1e-14, limit=200)
        rho = (model.dim - 1) / 2
        assert spherical_transform(f, 1j * rho, g) == pytest.approx(ref, rel=1e-10)


class TestHelgason:
    def test_zero(self, model, small_grid):
        b = small_grid.boundary.nodes[:5]
        assert np.all(helgason_transform(ZeroFunction(model.dim), [0.0, 3.0], b, small_grid) == 0)

    def test_radial_is_b_independent_and_spherical(self, h2):
        g = build_grids(h2)
        f = make_bump(h2, 2.0)
        lam = np.linspace(0, 12, 7)
        H = helgason_transform(f, lam, g.boundary.nodes[::16], g)
        s = spherical_transform(f, lam, g)
        assert rel(H, s[:, None]) <= 1e-10

    @pytest.mark.parametrize("dim", [2, 3])
    def test_off_center_against_refined_quadrature(self, dim):
        model = ModelParams(dim=dim)
        f = make_bump(model, 1.0, center_r=1.0)
        base = GridSizes.default(dim) if dim == 2 else GridSizes(n_radial=48, n_angular=(24, 48))
        g = build_grids(model, base)
        ang = base.n_angular or base.n_boundary
        fine_ang = 2 * ang if dim == 2 else (2 * ang[0], 2 * ang[1])
        fine = build_grids(model, base.replace(n_radial=2 * base.n_radial, n_angular=fine_ang))
        b = sphere_rule(dim, 8 if dim == 2 else (4, 8)).nodes
        lam = np.array([0.0, 3.0, 12.0])
        coarse, ref = helgason_transform(f, lam, b, g), helgason_transform(f, lam, b, fine)
        assert rel(coarse, ref) <= 1e-6
        # and it genuinely depends on b
        assert np.max(np.abs(coarse - coarse[:, :1])) > 1e-3

    def test_scalar_shapes(self, h2, small_grid):
        f = make_bump(h2, 1.0)
        b = small_grid.boundary.nodes
        assert isinstance(helgason_transform(f, 1.0, b[0], small_grid), complex)
        assert np.shape(helgason_transform(f, [1.0, 2.0], b[0], small_grid)) == (2,)
        assert np.shape(helgason_transform(f, 1.0, b[:3], small_grid)) == (3,)
        assert np.shape(helgason_transform(f, [1.0, 2.0], b[:3], small_grid)) == (2, 3)

    def test_support_checks(self, h2):
        g = build_grids(h2, GridSizes(n_radial=16))
        over = FunctionOnBall(lambda x: np.ones(x.shape[:-1]), 2, 4.5)
        with pytest.raises(ValueError):
            helgason_transform(over, 1.0, [1.0, 0.0], g)
        edge = make_bump(h2, 3.8)
        with pytest.warns(QuadratureWarning):
            helgason_transform(edge, 1.0, [1.0, 0.0], g)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            helgason_transform(make_bump(h2, 2.0), 1.0, [1.0, 0.0], g)

    def test_progression_kernel_matches_general_kernel(self, model, small_grid):
        f = suite(model)[2]
        b = small_grid.boundary.nodes[:6]
        lam = np.linspace(0.5, 12, 9)
        ap = helgason_transform(f, lam, b, small_grid)
        general = np.stack([helgason_transform(f, l, b, small_grid) for l in lam])
        assert rel(ap, general) <= 1e-12

    def test_entire_in_lambda(self, model, small_grid):
        """Cauchy-Riemann: the x- and y-derivatives of F(lam) agree up to the factor i."""
        f = suite(model)[2]
        b = small_grid.boundary.nodes[1]
        h = 1e-4
        for lam in (0.7 + 0.3j, 4.0 - 1.0j):
            dx = (helgason_transform(f, lam + h, b, small_grid) - helgason_transform(f, lam - h, b, small_grid)) / (2 * h)
            dy = (helgason_transform(f, lam + 1j * h, b, small_grid) - helgason_transform(f, lam - 1j * h, b, small_grid)) / (2 * h)
            assert abs(dy - 1j * dx) <= 1e-6 * (1 + abs(dx))

    def test_workers_bitwise(self, model, small_grid):
        f = suite(model)[3]
        lam = np.linspace(0, 12, 5)
        one = helgason_transform(f, lam, small_grid.boundary.nodes, small_grid, workers=1)
        three = helgason_transform(f, lam, small_grid.boundary.nodes, small_grid, workers=3)
        assert np.array_equal(one, three)

    def test_equivariant_route(self, model):
        # the interior quadrature needs (48, 96) angular nodes on H^3 to resolve lam = 8
        sizes = GridSizes(n_radial=48, n_boundary=128) if model.dim == 2 else GridSizes(n_radial=48, n_boundary=(24, 48), n_angular=(48, 96))
        grid = build_grids(model, sizes)
        lam = np.linspace(0, 8, 5)
        b = grid.boundary.nodes[::7]
        for f in suite(model):
            assert rel(helgason_equivariant(f, lam, b, grid), helgason_transform(f, lam, b, grid)) <= 1e-6

    def test_grid_container(self, model, small_grid):
        f = suite(model)[1]
        F = helgason_grid(f, small_grid)
        assert F.values.shape == (len(small_grid.spectral_nodes), len(small_grid.boundary))
        with pytest.raises(ValueError):
            HelgasonGrid(F.values[:, :-1], F.lam, F.lam_weights, F.boundary, small_grid)
        bad = F.values.copy()
        bad[0, 0] = np.nan
        with pytest.raises(ValueError):
            HelgasonGrid(bad, F.lam, F.lam_weights, F.boundary, small_grid)
        with pytest.raises(ValueError):
            helgason_grid(f, small_grid, method="fast")


class TestPoisson:
    def test_constant_gives_spherical_function(self, model, small_grid):
        x = sample_points(model.dim, 6, 1.0, seed=3)
        ones = np.ones(len(small_grid.boundary))
        lam = 2.5
        got = poisson_transform(ones, lam, x, small_grid)
        ref = spherical_fn(lam, geodesic_radius(x), model)
        assert rel(got, ref) <= 1e-9

    def test_zero(self, model, small_grid):
        x = sample_points(model.dim, 4, 1.0, seed=3)
        assert np.all(poisson_transform(lambda b: np.zeros(len(b)), 1.0, x, small_grid) == 0)

    def test_callable_and_array_agree(self, model, small_grid):
        x = sample_points(model.dim, 4, 1.0, seed=3)
        fn = lambda b: b[:, 0] + 1j * b[:, 1]  # noqa: E731
        a = poisson_transform(fn, [1.0, 2.0], x, small_grid)
        b = poisson_transform(fn(small_grid.boundary.nodes), [1.0, 2.0], x, small_grid)
        assert np.array_equal(a, b)

    def test_workers_bitwise(self, model, small_grid):
        x = sample_points(model.dim, 17, 1.0, seed=3)
        F = np.cos(np.arange(len(small_grid.boundary)))
        assert np.array_equal(poisson_transform(F, 3.0, x, small_grid, workers=1), poisson_transform(F, 3.0, x, small_grid, workers=4))


class TestJeft:
    def test_radial_at_origin(self, model, small_grid):
        f = make_bump(model, 1.5)
        lam = np.array([0.0, 1.0, 6.0])
        o = np.zeros(model.dim)
        s = spherical_transform(f, lam, small_grid)
        assert rel(jeft_direct(f, lam, o, small_grid), s) <= 1e-12

    def test_zero(self, model, small_grid):
        x = sample_points(model.dim, 3, 1.0, seed=3)
        assert np.all(jeft_direct(ZeroFunction(model.dim), 1.0, x, small_grid) == 0)
        assert np.all(jeft_composed(ZeroFunction(model.dim), 1.0, x, small_grid) == 0)

    def test_weyl_even(self, model, small_grid):
        f = suite(model)[2]
        x = sample_points(model.dim, 5, 1.5, seed=4)
        lam = np.array([0.5, 3.0, 9.0])
        assert np.max(np.abs(jeft_direct(f, lam, x, small_grid) - jeft_direct(f, -lam, x, small_grid))) <= 1e-10

    def test_direct_equals_composed_small(self, model, small_grid):
        f = suite(model)[3]
        x = sample_points(model.dim, 8, 1.0, seed=4)
        lam = np.array([0.0, 2.0, 5.0])
        assert rel(jeft_composed(f, lam, x, small_grid), jeft_direct(f, lam, x, small_grid)) <= 1e-6

    def test_equivariant_matches_direct(self, model):
        g = build_grids(model)
        f = suite(model)[2]
        x = sample_points(model.dim, 6, 1.5, seed=4)
        lam = np.array([0.0, 2.0, 7.0])
        assert rel(jeft_equivariant(f, lam, x, g), jeft_direct(f, lam, x, g)) <= 1e-9


class TestLinearity:
    @settings(max_examples=10)
    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 12))
    def test_all_transforms_linear(self, a, c, lam):
        model = ModelParams(dim=2)
        g = build_grids(model, GridSizes(n_radial=24, n_boundary=64))
        f1, f2 = make_bump(model, 1.0, center_r=0.5), make_bump(model, 1.5)
        combo = FunctionOnBall(lambda x: a * f1(x) + c * f2(x), 2, 1.5)

        class Combo(FunctionOnBall):
            def pieces(self):
                return f1.pieces()[:0] + [type(p)(p.center, p.radius, lambda z, fn=p.fn, k=k: k * fn(z)) for p, k in ((f1.pieces()[0], a), (f2.pieces()[0], c))]

        combo = Combo(combo.fn, 2, 1.5)
        b = g.boundary.nodes[::5]
        x = sample_points(2, 4, 1.0, seed=9)
        lhs = helgason_transform(combo, lam, b, g)
        rhs = a * helgason_transform(f1, lam, b, g) + c * helgason_transform(f2, lam, b, g)
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * (1 + np.max(np.abs(rhs)))
        lhs = jeft_direct(combo, lam, x, g)
        rhs = a * jeft_direct(f1, lam, x, g) + c * jeft_direct(f2, lam, x, g)
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * (1 + np.max(np.abs(rhs)))
        F1, F2 = np.cos(np.arange(64)), np.sin(3 * np.arange(64))
        lhs = poisson_transform(a * F1 + c * F2, lam, x, g)
        rhs = a * poisson_transform(F1, lam, x, g) + c * poisson_transform(F2, lam, x, g)
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * (1 + np.max(np.abs(rhs)))


class TestInverse:
    def test_zero_grid(self, model, small_grid):
        F = HelgasonGrid(
            np.zeros((len(small_grid.spectral_nodes), len(small_grid.boundary)), dtype=complex),
            small_grid.spectral_nodes,
            small_grid.spectral_weights,
            small_grid.boundary,
            small_grid,
        )
        x = sample_points(model.dim, 3, 1.0, seed=1)
        assert np.all(inverse_helgason(F, x) == 0)

    def test_warns_when_cutoff_too_small(self, model, small_grid):
        F = helgason_grid(make_bump(model, 0.5), small_grid)
        with pytest.warns(QuadratureWarning):
            inverse_helgason(F, np.zeros(model.dim))

    def test_rejects_complex_nodes(self, model, small_grid):
        F = helgason_grid(make_bump(model, 1.0), small_grid, lam=small_grid.spectral_nodes + 0.1j, lam_weights=small_grid.spectral_weights)
        with pytest.raises(ValueError):
            inverse_helgason(F, np.zeros(model.dim))

    def test_generic_equals_structured(self, h2):
        g = build_grids(h2)
        f = suite(h2)[2]
        F = helgason_grid(f, g)
        x = sample_points(2, 5, 1.0, seed=2)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", QuadratureWarning)
            generic = inverse_helgason(F, x)
        structured = inverse_equivariant(f, x, g, g.spectral_nodes, g.spectral_weights)
        assert rel(generic, structured) <= 1e-8

    def test_round_trip_radial(self, model):
        g = build_grids(model)
        f = make_bump(model, 2.0)
        from jeft.geometry import gauss_interval

        lam, w = gauss_interval(240, 0.0, 100.0)
        x = sample_points(model.dim, 10, 1.9, seed=5)
        assert np.max(np.abs(inverse_equivariant(f, x, g, lam, w) - f(x))) <= 1e-5


class TestConvolution:
    def test_requires_radial_convolver(self, model, small_grid):
        with pytest.raises(NotRadialError):
            convolve_radial(make_bump(model, 1.0), make_bump(model, 0.5, center_r=0.3), np.zeros(model.dim), small_grid)

    def test_radial_inputs_give_radial_output(self, model, small_grid):
        f, g = make_bump(model, 1.0), make_bump(model, 0.5)
        r = 0.8
        dirs = sphere_rule(model.dim, 7 if model.dim == 2 else 4).nodes
        vals = convolve_radial(f, g, point_at(dirs, np.full(len(dirs), r)), small_grid)
        # exact invariance holds up to the angular quadrature of the coarse grid
        assert np.max(np.abs(vals - vals[0])) <= 1e-8

    def test_mollifier_limit(self, h2):
        grid = build_grids(h2, GridSizes(n_radial=48, n_boundary=64))
        f = make_bump(h2, 1.5, center_r=0.4)
        x = sample_points(2, 8, 1.2, seed=6)
        errs = []
        for width in (0.4, 0.2, 0.1):
            g = make_bump(h2, width)
            mass = spherical_transform(g, 0.0, grid).real
            approx = convolve_radial(f, g, x, grid).real / mass
            errs.append(np.max(np.abs(approx - f(x))))
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] <= 5e-3

    def test_convolution_object(self, model, small_grid):
        f, g = make_bump(model, 1.0, center_r=0.5), make_bump(model, 0.5)
        fg = Convolution(f, g, small_grid)
        assert fg.support_radius == pytest.approx(f.support_radius + 0.5)
        x = sample_points(model.dim, 3, 1.0, seed=1)
        np.testing.assert_array_equal(fg(x), convolve_radial(f, g, x, small_grid))
