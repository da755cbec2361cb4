import numpy as np
import pytest

from wavefield import WavePattern, random_pattern


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_pattern(dim, rng, kind="phasor"):
    return random_pattern(dim, rng, kind)


def assert_patterns_close(a: WavePattern, b: WavePattern, tol=1e-9):
    """Compare in the complex plane so 0-vs-2*pi phase wrapping of tiny
    components cannot produce spurious mismatches."""
    assert a.dim == b.dim
    np.testing.assert_allclose(a.to_complex(), b.to_complex(), atol=tol, rtol=0)
