import numpy as np
import pytest

from mrsc.complexes import ComplexD
from mrsc.generate import GenParams, sample
from mrsc.seeds import Seed


def random_lm(n, lam, seed, d=2):
    return sample(GenParams.lm(n, d, lam), Seed(seed, 0))


def random_small_complex(rng, n_max=7, d=2):
    """A random downward-closed complex on few vertices (not a model draw)."""
    n = int(rng.integers(d + 1, n_max + 1))
    tops = []
    from itertools import combinations

    pool = list(combinations(range(n), d + 1))
    for t in pool:
        if rng.random() < rng.uniform(0.05, 0.6):
            tops.append(t)
    edge_pool = list(combinations(range(n), 2))
    extra = [e for e in edge_pool if rng.random() < 0.3]
    return ComplexD.from_simplices(n, d, tops + extra + [(0,)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
