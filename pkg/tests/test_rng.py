import numpy as np
import pytest

from nrange.rng import stream


def test_same_path_same_draws():
    a = stream(7, 1, 2).standard_normal(16)
    b = stream(7, 1, 2).standard_normal(16)
    assert np.array_equal(a, b)


def test_distinct_paths_decorrelate():
    a = stream(7, 1, 2).standard_normal(16)
    b = stream(7, 1, 3).standard_normal(16)
    c = stream(8, 1, 2).standard_normal(16)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_seed_required():
    with pytest.raises(ValueError):
        stream(None, 1)
