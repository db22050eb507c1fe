"""Shared builders for desk-scale random instances."""

import numpy as np
import pytest

from divproj.families import FamilyKind, FamilySpec, is_admissible
from divproj.measures import Alphabet, Distribution, SampleData, empirical


def rng_of(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_distribution(rng, m, floor=0.05) -> Distribution:
    """Strictly positive random point, bounded away from the boundary."""
    raw = rng.dirichlet(np.ones(m))
    probs = (1.0 - m * floor) * raw + floor
    return Distribution(Alphabet.of_size(m), probs, strict=True)


def random_statistics(rng, k, m, scale=1.0) -> np.ndarray:
    """k statistic rows with independent rows (a.s.) and bounded entries."""
    return scale * rng.uniform(-1.0, 1.0, size=(k, m))


def random_family(rng, kind, m=3, k=1, alpha=2.0, f_scale=1.0, max_tries=50) -> FamilySpec:
    kind = FamilyKind(kind)
    for _ in range(max_tries):
        q = random_distribution(rng, m)
        f = random_statistics(rng, k, m, scale=f_scale)
        try:
            return FamilySpec(kind, q, f, alpha=alpha)
        except Exception:
            continue
    raise RuntimeError("could not build a random family")


def random_admissible_theta(rng, spec, scale=0.3, max_tries=200) -> np.ndarray:
    for _ in range(max_tries):
        theta = rng.uniform(-scale, scale, size=spec.theta_dim)
        if is_admissible(spec, theta):
            return theta
    raise RuntimeError("could not find an admissible parameter")


def sample_from(spec, theta, n, rng) -> SampleData:
    from divproj.families import eval_member

    p = eval_member(spec, theta)
    idx = rng.choice(spec.alphabet.size, size=n, p=p.probs)
    return empirical([spec.alphabet.symbols[i] for i in idx], spec.alphabet)


@pytest.fixture
def rng():
    return rng_of(20260810)
