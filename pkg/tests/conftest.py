import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from jeft.geometry import GridSizes, ModelParams, build_grids
from jeft.verify import VerifyConfig

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# acceptance lines collected by tests/test_acceptance.py, printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])


@pytest.fixture(scope="session")
def h2():
    return ModelParams(dim=2)


@pytest.fixture(scope="session")
def h3():
    return ModelParams(dim=3)


@pytest.fixture(scope="session", params=[2, 3], ids=["h2", "h3"])
def model(request):
    return ModelParams(dim=request.param)


@pytest.fixture(scope="session")
def small_grid(model):
    """Coarse grids that keep unit tests fast; accuracy claims use larger ones."""
    if model.dim == 2:
        sizes = GridSizes(n_radial=48, n_boundary=128, n_spectral=32)
    else:
        sizes = GridSizes(n_radial=32, n_boundary=(24, 48), n_spectral=32, n_angular=(16, 32))
    return build_grids(model, sizes)


@pytest.fixture(scope="session")
def default_grid(model):
    return build_grids(model)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def reduced_config(model: ModelParams, workers: int = 1) -> VerifyConfig:
    """A cheap harness configuration: too coarse to pass, fine for determinism and plumbing tests."""
    if model.dim == 2:
        sizes = GridSizes(n_radial=32, n_boundary=128, n_spectral=24)
        extra = dict(
            lemma2_boundary=128, lemma2_radial=32, lemma2_angular=64, lemma1_angular=64,
            kernel_boundary=128, conv_outer=(24, 32), conv_inner=(16, 32), plancherel_boundary=128,
            plancherel_error_grid=(24, 32), plancherel_generic_boundary=256,
        )
    else:
        sizes = GridSizes(n_radial=24, n_boundary=(16, 32), n_spectral=24, n_angular=(12, 24))
        extra = dict(
            lemma2_boundary=(32, 64), lemma2_radial=16, lemma2_angular=(8, 16), lemma1_angular=(16, 32),
            kernel_boundary=(32, 64), conv_outer=(16, (8, 16)), conv_inner=(12, (6, 12)),
            plancherel_boundary=(32, 64), plancherel_error_grid=(16, (8, 16)), plancherel_generic_boundary=(32, 64),
        )
    return VerifyConfig.for_model(
        model, sizes, workers=workers, lemma2_lambdas=4, lemma2_points=6, lemma1_lambdas=4,
        kernel_triples=10, conv_lambdas=3, plancherel_cutoff=25.0, plancherel_nodes=40,
        plancherel_generic_points=3, pw_etas=5, pw_sigmas=13, eig_points=4, **extra,
    )
