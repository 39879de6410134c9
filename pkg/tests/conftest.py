"""Shared helpers for the test suite."""

import numpy as np
import pytest

from gaplab.netgen import (PaParams, CopyParams, AlphaPaParams,
                           generate_graph)

GAMMA3_PARAM_SETS = {
    "pa": PaParams(1, 1),
    "copy": CopyParams(1, 1, 0.5, 0.5),
    "alpha_pa": AlphaPaParams(0.25, 0.25, 1.0),
}


def small_random_graph(seed, n=None):
    """A quick mixed-model graph for property tests."""
    rng = np.random.default_rng(seed)
    if n is None:
        n = int(rng.integers(8, 65))
    params = list(GAMMA3_PARAM_SETS.values())[seed % 3]
    return generate_graph(params, n, rng)


@pytest.fixture
def rng():
    return np.random.default_rng(20230817)
