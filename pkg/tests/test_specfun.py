import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jeft.geometry import ModelParams, horocycle_bracket, point_at, sphere_rule
from jeft.specfun import KAPPA, SphericalEvaluator, plancherel_density, spherical_fn


def conical(lam, r):
    """Independent oracle: P_{-1/2 + i lam}(cosh r) from mpmath."""
    val = mpmath.legenp(-0.5 + 1j * lam, 0, mpmath.cosh(r), type=3)
    return complex(val)


def boundary_average(lam, r, dim, size):
    """phi_lam(r) as the boundary average of exp((i lam + rho) <x_r, b>) with a plain product rule."""
    rule = sphere_rule(dim, size)
    x = point_at(np.eye(dim)[0], r)
    a = horocycle_bracket(np.broadcast_to(x, rule.nodes.shape), rule.nodes)
    return complex(np.sum(rule.weights * np.exp((1j * lam + (dim - 1) / 2) * a)))


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("lam", [0.0, 1.0, 7.5, 2 + 0.5j])
def test_value_at_origin_is_one(dim, lam):
    assert spherical_fn(lam, 0.0, dim) == 1.0


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0, 5.0, 12.0])
@pytest.mark.parametrize("r", [1e-3, 0.5, 2.0, 4.0])
def test_h2_matches_conical_function(lam, r):
    ref = conical(lam, r)
    assert abs(spherical_fn(lam, r, 2) - ref) <= 1e-12 * (1 + abs(ref))


def test_h2_complex_parameter():
    lam = 1.5 + 0.75j
    ref = conical(lam, 1.2)
    assert abs(spherical_fn(lam, 1.2, 2) - ref) <= 1e-12 * (1 + abs(ref))


def test_h3_example_value():
    # closed form sin(1)/sinh(1) = 0.71602291536...
    val = spherical_fn(1.0, 1.0, 3)
    assert val.real == pytest.approx(math.sin(1) / math.sinh(1), rel=1e-15)
    assert val.real == pytest.approx(0.7160229154, abs=1e-10)
    brute = boundary_average(1.0, 1.0, 3, (64, 128))
    assert abs(brute - val) <= 1e-10


def test_h3_removable_limits():
    r = np.array([0.0, 1e-9, 1e-6, 5e-5, 2e-4, 1.0])
    for lam in (0.0, 1e-8, 3.0):
        v = spherical_fn(lam, r, 3).real
        with mpmath.workdps(40):
            ref = [
                1.0 if rr == 0 else float(mpmath.sin(lam * rr) / (lam * mpmath.sinh(rr)) if lam else rr / mpmath.sinh(rr))
                for rr in r
            ]
        np.testing.assert_allclose(v, ref, rtol=2e-15)


@pytest.mark.parametrize("dim", [2, 3])
def test_weyl_symmetry(dim):
    assert abs(spherical_fn(2.0, 1.3, dim) - spherical_fn(-2.0, 1.3, dim)) <= 1e-12


@pytest.mark.parametrize("dim", [2, 3])
def test_real_for_real_lambda(dim):
    v = spherical_fn(4.0, np.linspace(0, 4, 9), dim)
    assert np.max(np.abs(v.imag)) <= 1e-14


@pytest.mark.parametrize("dim", [2, 3])
def test_bounded_by_phi0(dim):
    lam = np.linspace(0, 12, 50)
    r = np.linspace(0, 4, 50)
    phi0 = spherical_fn(0.0, r, dim).real
    assert np.all(phi0 <= 1 + 1e-15)
    for lm in lam:
        assert np.all(np.abs(spherical_fn(lm, r, dim)) <= phi0 + 1e-13)


@pytest.mark.parametrize("lam", [0.0, 6.0, 12.0])
def test_h2_converges_under_node_doubling(lam):
    from jeft import _kernels

    for r in (0.5, 2.0, 4.0):
        a = spherical_fn(lam, r, 2)
        n = 64
        while True:
            b = _kernels.phi_h2_trapezoid(lam, r, 2 * n)
            if abs(b - _kernels.phi_h2_trapezoid(lam, r, n)) < 1e-14:
                break
            n *= 2
        assert abs(a - b) <= 1e-11


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_radial_eigen_equation(dim, lam):
    """u'' + (n-1) coth(r) u' = -(lam^2 + rho^2) u by central differences."""
    rho = (dim - 1) / 2
    r = np.linspace(0.5, 3.5, 7)
    errs = []
    for h in (1e-2, 5e-3):
        u = lambda s: spherical_fn(lam, s, dim).real  # noqa: E731
        d2 = (u(r + h) - 2 * u(r) + u(r - h)) / h**2
        d1 = (u(r + h) - u(r - h)) / (2 * h)
        errs.append(np.max(np.abs(d2 + (dim - 1) / np.tanh(r) * d1 + (lam**2 + rho**2) * u(r))))
    assert errs[0] <= 1e-3
    assert 3.5 <= errs[0] / errs[1] <= 4.5


@given(st.floats(0, 12), st.floats(0, 4))
def test_table_matches_direct_evaluation(lam, r):
    ev = SphericalEvaluator(ModelParams(dim=2))
    tab = ev.table(lam, 4.0)
    assert abs(tab(np.array([r]))[0] - spherical_fn(lam, r, 2)) <= 1e-13


def test_evaluator_resolution_guard():
    with pytest.raises(ValueError):
        SphericalEvaluator(ModelParams(dim=2), resolution=32)


class TestDensity:
    def test_zero_at_origin(self):
        assert plancherel_density(0.0, 2) == 0.0
        assert plancherel_density(0.0, 3) == 0.0

    def test_h2_value(self):
        assert plancherel_density(1.0, 2) == pytest.approx(KAPPA[2] * 0.99627207622, rel=1e-10)

    def test_h3_ratio(self):
        assert plancherel_density(2.0, 3) / plancherel_density(1.0, 3) == pytest.approx(4.0, rel=1e-15)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            plancherel_density(-0.1, 2)

    def test_calibrated_constants_regression(self):
        # fixed by scripts/calibrate_kappa.py; changing them must be deliberate
        assert KAPPA[2] == pytest.approx(0.15915494309189535, rel=1e-15)
        assert KAPPA[3] == pytest.approx(0.05066059182116889, rel=1e-15)
