import numpy as np
import pytest

from cpswf.expansion import CpswfBasis, make_grid
from cpswf.hankel import cpswf_radial_system
from cpswf.special import gauss_legendre


@pytest.fixture(scope="session")
def rule256():
    return gauss_legendre(256, 0.0, 1.0)


@pytest.fixture(scope="session")
def sys_c1_k0_even():
    return cpswf_radial_system(1.0, k=0, m=2, parity="even", q=256)


@pytest.fixture(scope="session")
def sys_c1_k1_even():
    return cpswf_radial_system(1.0, k=1, m=2, parity="even", q=256)


@pytest.fixture(scope="session")
def grid_small():
    return make_grid(128, 256)


@pytest.fixture(scope="session")
def basis_c1_small(grid_small):
    return CpswfBasis(1.0, 4, 9, grid_small)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
