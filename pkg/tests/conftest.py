"""Shared fixtures: the reference parameter sets used throughout."""

import pytest

from turing4 import GMConstants, reaction_params


@pytest.fixture(scope="session")
def gm_reference():
    """Activator-inhibitor constants of the reference experiments."""
    return GMConstants(k1=0.0, k2=0.4, k3=1.0, k4=1.0, k5=1.0)


@pytest.fixture(scope="session")
def p_star(gm_reference):
    """Reference Jacobian (0.4, -0.16, 5, -1) with diffusion ratio 30."""
    return reaction_params(gm_reference, 30.0)
