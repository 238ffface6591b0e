import pytest

from stirapcz.dynamics import IntegratorOptions
from stirapcz.pulses import PulseParams


@pytest.fixture(scope="session")
def fast_opts():
    """Loose-tolerance integrator options for tests that only need a few
    significant digits."""
    return IntegratorOptions(rel_tol=1e-7, abs_tol=1e-9)


@pytest.fixture(scope="session")
def p_to():
    return PulseParams.preset("to")


@pytest.fixture(scope="session")
def p_der():
    return PulseParams.preset("der")
