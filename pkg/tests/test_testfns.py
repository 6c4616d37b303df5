import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jeft.geometry import build_grids, geodesic_distance, sample_points
from jeft.testfns import SUITE_NAMES, BumpSpec, BumpSum, bump_profile, make_bump, suite
from jeft.transforms import helgason_transform, spherical_transform


def test_value_at_centre(model):
    f = make_bump(model, 1.0, amplitude=2.5)
    assert f(np.zeros(model.dim)) == pytest.approx(2.5 * np.exp(-1.0), rel=1e-15)


@settings(max_examples=30)
@given(st.floats(0.0, 3.0))
def test_exact_zero_outside_support(d):
    prof = bump_profile(np.array([1.0 + d]), 1.0)
    assert prof[0] == 0.0


def test_off_centre_support(model):
    f = make_bump(model, 0.5, center_r=1.0)
    c = f.spec.center
    x = sample_points(model.dim, 200, 2.0, seed=3)
    d = geodesic_distance(x, np.broadcast_to(c, x.shape))
    vals = f(x)
    assert np.all(vals[d >= 0.5] == 0.0)
    assert np.all(vals[d < 0.5 - 1e-9] > 0.0)
    assert f.support_radius == pytest.approx(1.5)
    assert not f.is_radial


def test_spec_validation(h2):
    with pytest.raises(ValueError):
        BumpSpec(-1.0, np.zeros(2))
    with pytest.raises(ValueError):
        BumpSpec(np.inf, np.zeros(2))
    with pytest.raises(ValueError):
        BumpSpec(1.0, np.zeros(2), amplitude=np.nan)
    with pytest.raises(ValueError):
        make_bump(h2, 3.0, center_r=1.5)  # reaches 4.5 > R
    make_bump(h2, 2.0, center_r=2.0)  # reaches exactly R


def test_suite_shape_and_determinism(model):
    a, b = suite(model), suite(model)
    assert len(a) == len(SUITE_NAMES) == 5
    x = sample_points(model.dim, 50, 2.0, seed=8)
    for f, g in zip(a, b):
        assert np.array_equal(f(x), g(x))
        assert f.support_radius <= model.support_radius / 2 + 1e-12
    assert [f.is_radial for f in a] == [True, True, False, False, False]


def test_sign_changing_member(model):
    f = suite(model)[4]
    x = sample_points(model.dim, 400, 2.0, seed=1)
    v = f(x)
    assert v.min() < 0 < v.max()


def test_bump_sum_pieces(h2):
    t1, t2 = make_bump(h2, 0.5, center_r=0.5), make_bump(h2, 0.3, amplitude=-1.0)
    s = BumpSum([t1, t2])
    x = sample_points(2, 20, 1.0, seed=0)
    assert np.array_equal(s(x), t1(x) + t2(x))
    assert len(s.pieces()) == 2
    with pytest.raises(ValueError):
        BumpSum([])


def test_off_centre_member_varies_in_b(model):
    g = build_grids(model, None)
    f = suite(model)[2]
    F = helgason_transform(f, 1.0, g.boundary.nodes[:: max(1, len(g.boundary) // 16)], g)
    assert np.max(np.abs(F - F[0])) > 1e-2


def test_spherical_transform_decays_fast(h2):
    """Smooth compact support: |hat f(lam)| falls faster than any power; the local log-log slope steepens."""
    g = build_grids(h2)
    f = make_bump(h2, 1.0)
    lam = np.array([4.0, 8.0, 16.0])
    v = np.abs(spherical_transform(f, lam, g))
    slopes = np.diff(np.log(v)) / np.diff(np.log(lam))
    assert slopes[1] < slopes[0] < -2
