"""Fourier analysis on the hyperbolic plane and hyperbolic 3-space.

Quadrature implementations of the spherical, Helgason, Poisson and
joint-eigenspace Fourier transforms on the unit-ball models, plus a harness
that checks the identities relating them.
"""

from .geometry import (
    DomainError,
    GridSizes,
    ModelParams,
    QuadratureGrid,
    build_grids,
    geodesic_distance,
    horocycle_bracket,
    translate,
)
from .specfun import SphericalEvaluator, plancherel_density, spherical_fn
from .testfns import BumpSpec, make_bump, suite
from .transforms import (
    BoundaryFunction,
    FunctionOnBall,
    HelgasonGrid,
    InteriorFunction,
    JeftGrid,
    ZeroFunction,
    convolve_radial,
    helgason_transform,
    inverse_helgason,
    jeft_composed,
    jeft_direct,
    poisson_transform,
    spherical_transform,
)
from .verify import VerificationReport, VerifyConfig, run_checks

__all__ = [
    "BoundaryFunction",
    "BumpSpec",
    "DomainError",
    "FunctionOnBall",
    "GridSizes",
    "HelgasonGrid",
    "InteriorFunction",
    "JeftGrid",
    "ModelParams",
    "QuadratureGrid",
    "SphericalEvaluator",
    "VerificationReport",
    "VerifyConfig",
    "ZeroFunction",
    "build_grids",
    "convolve_radial",
    "geodesic_distance",
    "helgason_transform",
    "horocycle_bracket",
    "inverse_helgason",
    "jeft_composed",
    "jeft_direct",
    "make_bump",
    "plancherel_density",
    "poisson_transform",
    "run_checks",
    "spherical_fn",
    "spherical_transform",
    "suite",
    "translate",
]
