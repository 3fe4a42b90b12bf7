import functools

import numpy as np
import pytest

from gsorlab.config.settings import get_settings
from gsorlab.problem.generators import generate_structured, generate_synthetic
from gsorlab.problem.model import DoubleSaddleProblem


@pytest.fixture
def settings_env(monkeypatch):
    """Sets GSORLAB_* variables for one test with a fresh settings cache."""

    def _set(**values):
        for key, value in values.items():
            monkeypatch.setenv(f"GSORLAB_{key.upper()}", str(value))
        get_settings.cache_clear()
        return get_settings()

    get_settings.cache_clear()
    yield _set
    monkeypatch.undo()
    get_settings.cache_clear()


@pytest.fixture
def scalar_problem():
    """A=2, B=C=D=P=1, f=2, g=h=0; exact solution (0, 2, 0)."""
    return DoubleSaddleProblem(
        A=[[2.0]],
        B=[[1.0]],
        C=[[1.0]],
        D=[[1.0]],
        f=[2.0],
        g=[0.0],
        h=[0.0],
        P=[[1.0]],
    )


@pytest.fixture(scope="session")
def synthetic_problem():
    return generate_synthetic(seed=1, n=30, m=10, p=8)


@pytest.fixture(scope="session")
def diagonal_p_problem():
    return generate_synthetic(seed=2, n=24, m=8, p=6, shape="clustered", p_mode="diagonal")


@pytest.fixture(scope="session")
def lc_problem():
    return generate_structured(seed=0, N=4, family="lc-like")


@pytest.fixture(scope="session")
def darcy_problem():
    return generate_structured(seed=0, N=2, family="darcy-like")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


NU_REGIMES = (0.05, 0.3, 0.7, 0.95, 1.3, 2.0)


@pytest.fixture(scope="session")
def suite_problem():
    """Seeded random problems of order 30 to 200 with coupling strength cycling through NU_REGIMES."""

    @functools.lru_cache(maxsize=None)
    def _make(index, p_mode="diagonal"):
        rng = np.random.default_rng(7000 + index)
        n = int(rng.integers(22, 101))
        m = int(rng.integers(max(2, n // 4), n // 2 + 1))
        p = int(rng.integers(max(2, n // 5), n // 2 + 1))
        return generate_synthetic(
            seed=index,
            n=n,
            m=m,
            p=p,
            shape=("uniform", "clustered")[(index // len(NU_REGIMES)) % 2],
            p_mode=p_mode,
            nu_target=NU_REGIMES[index % len(NU_REGIMES)],
        )

    return _make
