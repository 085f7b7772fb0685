import numpy as np
import pytest
from hypothesis import strategies as st

from wentangle.qstate import ProductState, PureState


def random_state(rng, n):
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return PureState.from_vector(v / np.linalg.norm(v))


def random_product(rng, n):
    z = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
    return ProductState.from_array(z / np.linalg.norm(z, axis=1, keepdims=True))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


seeds = st.integers(min_value=0, max_value=2**32 - 1)
