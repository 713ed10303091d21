import numpy as np
import pytest
from hypothesis import strategies as st

from sphere_energy.sphere_core import UnitVector


def unit_vectors(dim):
    coords = st.lists(st.floats(-1.0, 1.0, allow_nan=False), min_size=dim,
                      max_size=dim)
    return coords.filter(lambda c: np.linalg.norm(c) > 1e-3).map(UnitVector)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_rotation(dim, rng):
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))
