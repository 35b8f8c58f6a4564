import numpy as np
import pytest

from ideofactor.solver import FactorSet, SolverConfig
from ideofactor.synthetic import SyntheticSpec, generate


def planted_exact_instance(n=30, m=12, seed=42):
    """A and C generated exactly from a planted rank-2 factor set.

    The planted factors are block-orthogonal (disjoint supports), so an
    exact zero-residual solution exists inside the feasible set.
    """
    rng = np.random.default_rng(seed)
    k = 2
    U = np.zeros((n, k))
    U[: n // 2, 0] = rng.uniform(0.5, 1.5, n // 2)
    U[n // 2:, 1] = rng.uniform(0.5, 1.5, n - n // 2)
    V = np.zeros((m, k))
    V[: m // 2, 0] = rng.uniform(0.5, 1.5, m // 2)
    V[m // 2:, 1] = rng.uniform(0.5, 1.5, m - m // 2)
    Hu = np.diag([1.0, 2.0])
    Hs = np.diag([1.5, 0.8])
    planted = FactorSet(U=U, V=V, Hu=Hu, Hs=Hs)
    A = U @ Hu @ U.T
    C = U @ Hs @ V.T
    return A, C, planted


@pytest.fixture
def small_instance():
    return generate(SyntheticSpec(n_users=60, m_sources=20, seed=5))


@pytest.fixture
def default_config():
    return SolverConfig(k=2, alpha=1.0, beta=1.0, seed=7)
