"""Fix the Plancherel constants kappa_n by a round trip at the origin.

For a radial bump f, inversion at o reads
    f(o) = kappa_n * int_0^Lambda hat f(lam) w_n(lam) dlam,
with w_2 = lam tanh(pi lam) and w_3 = lam^2.  Solving for kappa_n and comparing
with the constants hard-coded in ``jeft.specfun.KAPPA`` is the one-time
calibration; the script exits non-zero if they differ by more than 1e-6.
The cutoff must stay within what the radial rule resolves: with 96 radial
nodes on [0, R/2] the transform is aliased beyond lambda of about 180.

    python scripts/calibrate_kappa.py [--cutoff 150] [--nodes 360]
"""

import argparse
import math
import sys

import numpy as np

from jeft.geometry import GridSizes, ModelParams, build_grids, gauss_interval
from jeft.specfun import KAPPA, SphericalEvaluator
from jeft.testfns import make_bump
from jeft.transforms import spherical_transform

LAWS = {2: lambda lam: lam * np.tanh(np.pi * lam), 3: lambda lam: lam**2}


def calibrate(dim: int, cutoff: float, nodes: int) -> float:
    model = ModelParams(dim=dim)
    grid = build_grids(model, GridSizes.default(dim))
    f = make_bump(model, model.support_radius / 2)
    lam, w = gauss_interval(nodes, 0.0, cutoff)
    fhat = np.real(spherical_transform(f, lam, grid, SphericalEvaluator(model)))
    integral = float(np.sum(w * fhat * LAWS[dim](lam)))
    return float(f(np.zeros(dim))) / integral


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cutoff", type=float, default=150.0)
    ap.add_argument("--nodes", type=int, default=360)
    args = ap.parse_args()
    ok = True
    for dim in (2, 3):
        kappa = calibrate(dim, args.cutoff, args.nodes)
        rel = abs(kappa - KAPPA[dim]) / KAPPA[dim]
        ok &= rel <= 1e-6
        print(f"H^{dim}: calibrated kappa = {kappa:.12g}   hard-coded = {KAPPA[dim]:.12g}   rel diff = {rel:.2e}")
    print(f"1/(2 pi) = {1 / (2 * math.pi):.12g}, 1/(2 pi^2) = {1 / (2 * math.pi**2):.12g}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
