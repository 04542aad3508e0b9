import numpy as np
import pytest

from tfuncertainty.core import GaussianMixture, GeneralizedGaussian, PhasePoint


def random_term(rng, lam_range=(0.2, 2.0), loc=1.0, chirp=0.0, d=1):
    lam = rng.uniform(*lam_range)
    a = lam * lam + 1j * rng.uniform(-chirp, chirp)
    c = rng.normal() + 1j * rng.normal()
    return GeneralizedGaussian(c, a, rng.uniform(-loc, loc, d), rng.uniform(-loc, loc, d))


def random_mixture(rng, max_terms=4, **kw) -> GaussianMixture:
    """Random mixture from the shared test distribution.

    Spreads a = lam^2 with lam in [0.2, 2], centres and frequencies near the
    origin, complex Gaussian amplitudes.  ``chirp`` adds an imaginary part to a.
    """
    n = int(rng.integers(1, max_terms + 1))
    d = kw.get("d", 1)
    return GaussianMixture([random_term(rng, **kw) for _ in range(n)], d)


def random_point(rng, box=3.0, d=1) -> PhasePoint:
    return PhasePoint(rng.uniform(-box, box, d), rng.uniform(-box, box, d))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
