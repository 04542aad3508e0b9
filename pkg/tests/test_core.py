import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfuncertainty.core import (
    DimensionError,
    GaussianMixture,
    GeneralizedGaussian,
    PhasePoint,
    SampledSignal,
    conjugate,
    dilated_gaussian,
    evaluate,
    gaussian_integral,
    inner_product,
    l2_norm,
    standard_window,
    time_frequency_shift,
    zero_signal,
)
from tfuncertainty.quadrature import integrate

from conftest import random_mixture, random_point

g = standard_window()


def test_evaluate_examples():
    assert evaluate(g, 0.0) == pytest.approx(1.0, abs=0)
    assert evaluate(dilated_gaussian(2.0), 1.0) == pytest.approx(math.exp(-4 * math.pi), rel=1e-14)
    assert evaluate(time_frequency_shift(g, PhasePoint(1.0, 0.0)), 1.0) == pytest.approx(1.0)


def test_evaluate_dimension_mismatch():
    f = standard_window(2)
    with pytest.raises(DimensionError):
        evaluate(f, np.zeros(3))


def test_shift_examples():
    t = np.linspace(-4, 4, 81)
    shifted = time_frequency_shift(g, PhasePoint(0.0, 0.0))
    assert np.allclose(evaluate(shifted, t), evaluate(g, t), rtol=0, atol=0)
    assert np.allclose(evaluate(time_frequency_shift(g, PhasePoint(1.0, 0.0)), t),
                       evaluate(g, t - 1), atol=1e-15)
    mod = evaluate(time_frequency_shift(g, PhasePoint(0.0, 3.0)), t)
    assert np.allclose(np.abs(mod), evaluate(g, t).real, atol=1e-15)


def test_inner_product_examples():
    assert inner_product(g, g) == pytest.approx(2 ** -0.5, abs=1e-15)
    for lam in (0.25, 0.5, 1.0, 2.0):
        assert inner_product(dilated_gaussian(lam), g) == pytest.approx(
            (1 + lam * lam) ** -0.5, abs=1e-15)
    mg = time_frequency_shift(g, PhasePoint(0.0, 1.0))
    assert abs(inner_product(mg, g)) == pytest.approx(2 ** -0.5 * math.exp(-math.pi / 2), rel=1e-14)


def test_l2_norm_examples():
    assert l2_norm(g) == pytest.approx(2 ** -0.25, rel=1e-15)
    assert l2_norm(zero_signal()) == 0.0
    # frozen from the quadrature oracle on int exp(-2 pi lam^2 t^2) dt, lam = 2
    oracle = integrate(lambda t: np.exp(-8 * math.pi * t * t), 0.0, 0.5, 1e-14).value.real
    assert oracle == pytest.approx(8 ** -0.5, rel=1e-12)
    assert l2_norm(dilated_gaussian(2.0)) == pytest.approx(math.sqrt(oracle), rel=1e-12)


def test_zero_signal_propagates():
    z = zero_signal()
    assert inner_product(z, g) == 0
    assert evaluate(z, 1.3) == 0
    assert (z + GaussianMixture([g])).terms == (g,)


def test_phase_point_flat_vector():
    p = PhasePoint([1.0, 2.0, 3.0, 4.0])
    assert p.x == (1.0, 2.0) and p.omega == (3.0, 4.0) and p.d == 2
    assert (p - p).norm() == 0
    with pytest.raises(ValueError):
        PhasePoint([1.0, 2.0, 3.0])


def test_spread_validation():
    with pytest.raises(ValueError):
        GeneralizedGaussian(1.0, -0.5)
    with pytest.raises(ValueError):
        GeneralizedGaussian(1.0, 1j)


def test_from_canonical_round_trip(rng):
    for _ in range(50):
        f = random_mixture(rng, max_terms=1, chirp=1.0).terms[0]
        A, B, C = f.canonical()
        back = GeneralizedGaussian.from_canonical(f.c, A, B, C)
        t = rng.uniform(-2, 2, 7)
        assert np.allclose(evaluate(back, t), evaluate(f, t), rtol=1e-12, atol=1e-14)


def test_gaussian_integral_against_quadrature(rng):
    for _ in range(20):
        A = rng.uniform(0.3, 3) + 1j * rng.uniform(-2, 2)
        B = complex(rng.uniform(-1, 1), rng.uniform(-2, 2))
        exact = gaussian_integral(A, np.array([B]), 0.0, 1)
        # |integrand| = exp(-pi Re(A) t^2 + 2 pi Re(B) t) peaks at Re(B)/Re(A)
        peak = B.real / A.real
        amp = math.exp(math.pi * B.real ** 2 / A.real)
        res = integrate(lambda t: np.exp(-math.pi * A * t * t + 2 * math.pi * B * t),
                        peak, A.real ** -0.5, 1e-12, amplitude=amp,
                        omega_max=abs(A.imag) * 6 / A.real ** 0.5 + abs(B.imag))
        assert abs(res.value - exact) <= 1e-12 * max(1.0, abs(exact))


def test_sampled_signal():
    s = SampledSignal.from_signal(g, -8.0, 1 / 64, 1024)
    assert s.n == 1024 and s.d == 1
    assert l2_norm(s) == pytest.approx(2 ** -0.25, rel=1e-12)
    with pytest.raises(ValueError):
        SampledSignal(np.zeros(4), 0.0, -1.0)


def test_conjugate_values(rng):
    f = random_mixture(rng, chirp=1.0)
    t = rng.uniform(-2, 2, 11)
    assert np.allclose(evaluate(conjugate(f), t), np.conj(evaluate(f, t)), atol=1e-14)


# ---------------------------------------------------------------- invariants

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_conjugate_symmetry(seed):
    rng = np.random.default_rng(seed)
    f, h = random_mixture(rng, chirp=1.0), random_mixture(rng, chirp=1.0)
    assert abs(inner_product(f, h) - np.conj(inner_product(h, f))) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_shift_unitarity(seed):
    rng = np.random.default_rng(seed)
    f, h = random_mixture(rng), random_mixture(rng)
    z = random_point(rng)
    lhs = inner_product(time_frequency_shift(f, z), time_frequency_shift(h, z))
    assert abs(lhs - inner_product(f, h)) <= 1e-12 * max(1.0, abs(inner_product(f, h)))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_shift_pointwise(seed):
    rng = np.random.default_rng(seed)
    f = random_mixture(rng, chirp=1.0)
    z = random_point(rng)
    t = rng.uniform(-4, 4, 25)
    lhs = evaluate(time_frequency_shift(f, z), t)
    rhs = np.exp(2j * math.pi * t * z.omega[0]) * evaluate(f, t - z.x[0])
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(rhs)))


def test_inner_product_matches_quadrature(rng):
    worst = 0.0
    for _ in range(100):
        f, h = random_mixture(rng), random_mixture(rng)
        exact = inner_product(f, h)
        amp = sum(abs(p.c) for p in f.terms) * sum(abs(q.c) for q in h.terms)
        freq = max(abs(p.nu[0]) for p in f.terms) + max(abs(q.nu[0]) for q in h.terms)
        rate = min(p.a.real for p in f.terms) + min(q.a.real for q in h.terms)
        res = integrate(lambda t: evaluate(f, t) * np.conj(evaluate(h, t)), 0.0, rate ** -0.5, 1e-11,
                        amplitude=amp, spread=1.0, omega_max=freq)
        worst = max(worst, abs(res.value - exact) - res.error_estimate)
    assert worst <= 1e-13


def test_higher_dimension_closed_forms():
    g2 = standard_window(2)
    assert inner_product(g2, g2) == pytest.approx(0.5, abs=1e-15)
    f = dilated_gaussian(0.5, d=2)
    assert inner_product(f, g2) == pytest.approx(1 / 1.25, abs=1e-15)
