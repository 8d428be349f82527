"""Shared fixtures: the parabolic diagram and an asymmetric cubic one."""

import numpy as np
import pytest

from mergeflow import FundamentalDiagram, lwr_diagram


@pytest.fixture(scope="session")
def lwr():
    return lwr_diagram()


@pytest.fixture(scope="session")
def skewed():
    # F(rho) = rho (1 - rho) (2 - rho) / 2: concave, F'(0) = 1, F'(1) = -1/2,
    # critical density 1 - 1/sqrt(3).  Guards against tests that only pass
    # because the parabola is symmetric.
    rho_star = 1.0 - 3.0 ** -0.5
    return FundamentalDiagram(
        flux=lambda r: 0.5 * r * (1.0 - r) * (2.0 - r),
        derivative=lambda r: 0.5 * (2.0 - 6.0 * r + 3.0 * r * r),
        rho_star=rho_star,
        sigma=0.5 * rho_star * (1.0 - rho_star) * (2.0 - rho_star),
    )


@pytest.fixture()
def rng():
    return np.random.default_rng(20260815)
