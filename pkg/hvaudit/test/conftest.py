"""
Test configuration and fixtures
"""
import math
import os
import sys

import numpy as np
import pytest

# Add the repository root to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..'))

from hvaudit import create_app
from hvaudit.hv_models import make_disjoint_model, make_overlap_model
from hvaudit.settings import Settings


@pytest.fixture
def client():
    """Create test client"""
    app = create_app(Settings(log_level='WARNING'))
    app.config['TESTING'] = True

    with app.test_client() as client:
        yield client


@pytest.fixture
def disjoint():
    return make_disjoint_model()


@pytest.fixture
def overlap():
    return make_overlap_model()


@pytest.fixture(params=['disjoint', 'overlap'])
def any_model(request):
    return make_disjoint_model() if request.param == 'disjoint' else make_overlap_model()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def angle_grid():
    """20 x 20 settings grid on [0, pi)^2"""
    angles = [k * math.pi / 20 for k in range(20)]
    return [(theta, phi) for theta in angles for phi in angles]
