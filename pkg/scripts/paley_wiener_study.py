"""How the fitted exponential type depends on the imaginary-part window.

For radial bumps of support s the harness fits the slope of
m(eta) = log max_{sigma, b} |f~(sigma + i eta, b)| against |eta| on |eta| <= eta_max.
This script repeats the fit for growing eta_max, and prints the same fit for
log cosh(s eta), the transform of a unit point mass on the sphere of radius s
(the most favourable profile with that support, in the Euclidean analogue).

    python scripts/paley_wiener_study.py [--model h2|h3]
"""

import argparse

import numpy as np

from jeft.geometry import GridSizes, ModelParams, build_grids
from jeft.testfns import make_bump
from jeft.transforms import radial_transform
from jeft.verify import fit_slope


def main():
    ap = argparse.ArgumentParser(description="Paley-Wiener slope study")
    ap.add_argument("--model", choices=("h2", "h3"), default="h2")
    args = ap.parse_args()
    model = ModelParams.from_name(args.model)
    grid = build_grids(model, GridSizes.default(model.dim).replace(n_radial=192))
    R = model.support_radius
    sigmas = np.linspace(0.0, model.spectral_cutoff, 49)
    print("  support  eta_max   fitted slope  slope/support   log-cosh slope/support")
    for s in (R / 2, R / 4):
        f = make_bump(model, s)
        for eta_max in (2.0, 5.0, 10.0, 20.0, 40.0):
            etas = np.linspace(-eta_max, eta_max, 9)
            m = np.array([np.log(np.abs(radial_transform(f.profile, s, sigmas + 1j * e, grid)).max()) for e in etas])
            slope = fit_slope(etas, m)
            ideal = fit_slope(etas, np.log(np.cosh(s * etas)))
            print(f"  {s:7g}  {eta_max:7g}   {slope:12.4f}  {slope / s:13.3f}   {ideal / s:22.3f}")


if __name__ == "__main__":
    main()
