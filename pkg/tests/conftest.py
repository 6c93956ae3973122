import pytest
from hypothesis import HealthCheck, settings

from inarlim import (
    Bernoulli,
    ExplicitOffspring,
    FiniteSupport,
    GeometricDecay,
    InarModel,
    Poisson,
    PoissonOffspring,
)

settings.register_profile(
    "ci", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def bernoulli_ar1():
    """Single-lag model: Bernoulli(0.5) immigration, Bernoulli(0.4) offspring."""
    return InarModel(Bernoulli(0.5), ExplicitOffspring((Bernoulli(0.4),)))


@pytest.fixture(scope="session")
def hawkes():
    """Discrete Hawkes model: Poisson(1) immigration, geometric Poisson offspring, mass 0.5."""
    return InarModel(Poisson(1.0), PoissonOffspring(GeometricDecay(c=0.25, r=0.5)))


@pytest.fixture(scope="session")
def two_lag():
    """Two active lags with Bernoulli offspring, total mean 0.6."""
    return InarModel(Bernoulli(0.5), ExplicitOffspring((Bernoulli(0.35), Bernoulli(0.25))))


@pytest.fixture(scope="session")
def finite_mix():
    """Bounded three-point immigration with a single finite-support lag."""
    return InarModel(
        FiniteSupport((0.3, 0.5, 0.2)),
        ExplicitOffspring((FiniteSupport((0.7, 0.2, 0.1)),)),
    )


@pytest.fixture(scope="session")
def pure_immigration():
    """No offspring at all: i.i.d. Poisson(1) counts."""
    return InarModel(Poisson(1.0), ExplicitOffspring(()))
