import math

import pytest

from lzwalk import make_boundary_coin, make_bulk_coin

# reference parameter point used throughout: p = 0.2, theta = pi/4
P_REF = 0.2
THETA_REF = math.pi / 4


@pytest.fixture
def ref_coins():
    """Bulk and boundary coins at the reference point (gauge: gamma = theta)."""
    return make_bulk_coin(P_REF, 0.0, THETA_REF), make_boundary_coin(0.0)


@pytest.fixture
def phased_coins():
    """A coin pair with all three phases nonzero (theta = gamma - gamma_tilde)."""
    return make_bulk_coin(P_REF, 0.3, THETA_REF + 0.1), make_boundary_coin(0.1)
