"""Grid-refinement study behind the harness defaults.

Prints, for each model, observed errors under successive refinement of:
  * the boundary rule (kernel factorization at radius R/2, direct vs composed JEFT on one member),
  * the interior angular rule (b-variation of f~ for the R/2 radial bump),
  * the Plancherel cutoff (round-trip L^2 error and Parseval defect).
Errors should fall monotonically until they reach round-off.

    python scripts/refinement_study.py [--model h2|h3]
"""

import argparse

import numpy as np

from jeft.geometry import GridSizes, ModelParams, build_grids, gauss_interval, sample_points, sphere_rule
from jeft.specfun import SphericalEvaluator, plancherel_density
from jeft.testfns import SUITE_NAMES, suite
from jeft.transforms import helgason_equivariant, helgason_transform, inverse_equivariant, l2_norm_sq
from jeft.verify import kernel_factorization_error, lemma2_error

BOUNDARY = {2: [32, 64, 128, 256], 3: [(16, 32), (32, 64), (48, 96), (64, 128), (96, 192)]}
ANGULAR = {2: [32, 64, 128, 256], 3: [(16, 32), (32, 64), (48, 96), (64, 128)]}


def boundary_study(model):
    n, R = model.dim, model.support_radius
    rng = np.random.default_rng(0)
    x = sample_points(n, 100, R / 2, seed=31, include_origin=False)
    y = sample_points(n, 100, R / 2, seed=32, include_origin=False)
    lam = rng.uniform(0, model.spectral_cutoff, 100)
    f = suite(model)[0]
    lam16 = np.linspace(0, model.spectral_cutoff, 16)
    xs = sample_points(n, 40, 1.5, seed=1)
    print("  boundary size    kernel factorization    lemma2 (radial_half)")
    for nb in BOUNDARY[n]:
        kf = kernel_factorization_error(n, sphere_rule(n, nb), x, y, lam)
        g = build_grids(model, GridSizes.default(n).replace(n_boundary=nb, n_radial=24, n_angular=(12, 24) if n == 3 else 64))
        l2 = lemma2_error(f, g, lam16, xs)
        print(f"  {str(nb):>13}    {kf:20.2e}    {l2:20.2e}")


def angular_study(model):
    n = model.dim
    f = suite(model)[0]
    lam = np.linspace(0, model.spectral_cutoff, 16)
    b = sphere_rule(n, 8 if n == 2 else (4, 8)).nodes
    print("  angular size     b-variation of f~ (radial bump)")
    for na in ANGULAR[n]:
        g = build_grids(model, GridSizes.default(n).replace(n_angular=na))
        H = np.asarray(helgason_transform(f, lam, b, g))
        var = float(np.max(np.abs(H - H[:, :1]) / (1 + np.abs(H[:, :1]))))
        print(f"  {str(na):>13}    {var:.2e}")


def cutoff_study(model):
    n = model.dim
    g = build_grids(model, GridSizes.default(n).replace(n_boundary=256 if n == 2 else (64, 128)))
    ge = build_grids(model, GridSizes(n_radial=48, n_boundary=64 if n == 2 else (16, 32)))
    ev = SphericalEvaluator(model)
    print("  cutoff  nodes   worst Parseval defect   worst round-trip L2   (over the suite)")
    for cut, nodes in ((25, 60), (50, 120), (75, 180), (100, 240)):
        lam, wl = gauss_interval(nodes, 0.0, cut)
        dens = plancherel_density(lam, model)
        worst_p = worst_r = 0.0
        for f in suite(model):
            H = helgason_equivariant(f, lam, g.boundary.nodes, g, evaluator=ev)
            spec = np.sum(wl * dens * (np.abs(H) ** 2 @ g.boundary.weights))
            worst_p = max(worst_p, abs(spec / l2_norm_sq(f, g) - 1))
            z, w = ge.interior_rule(np.zeros(n), f.support_radius)
            fz = f(z)
            back = inverse_equivariant(f, z, g, lam, wl, evaluator=ev)
            worst_r = max(worst_r, float(np.sqrt(np.sum(w * np.abs(back - fz) ** 2) / np.sum(w * fz**2))))
        print(f"  {cut:6g}  {nodes:5d}   {worst_p:21.2e}   {worst_r:19.2e}")


def main():
    ap = argparse.ArgumentParser(description="grid-refinement study")
    ap.add_argument("--model", choices=("h2", "h3"), action="append")
    args = ap.parse_args()
    for name in args.model or ["h2", "h3"]:
        model = ModelParams.from_name(name)
        print(f"== {name} (R = {model.support_radius:g}, Lambda = {model.spectral_cutoff:g}); suite = {', '.join(SUITE_NAMES)}")
        boundary_study(model)
        angular_study(model)
        cutoff_study(model)


if __name__ == "__main__":
    main()
