import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from spherecount.condition import sample_gaussian_system


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_unit_system(n, degrees, seed):
    """A random system rescaled to unit Weyl norm."""
    return sample_gaussian_system(n, degrees, seed).normalized()


def random_sphere_point(rng, dim):
    x = rng.standard_normal(dim)
    return x / np.linalg.norm(x)
