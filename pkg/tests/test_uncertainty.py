import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfuncertainty.core import (
    GeneralizedGaussian,
    PhasePoint,
    UnsupportedDimensionError,
    dilated_gaussian,
    standard_window,
    zero_signal,
)
from tfuncertainty.stft import stft_values
from tfuncertainty.uncertainty import (
    bound_cylinder,
    bound_sphere,
    cylinder_sup,
    golden_max,
    min_cylinder_radius,
    sharpness_sweep,
    sphere_sup,
    verify_theorem,
)

from conftest import random_mixture

PI = math.pi
g = standard_window()


def dilated_abs(lam, x, w):
    return (1 + lam * lam) ** -0.5 * np.exp(-PI * (lam * lam * x * x + w * w) / (1 + lam * lam))


def test_bound_examples():
    assert bound_cylinder(math.exp(PI)) == pytest.approx(1.0, abs=1e-15)
    assert bound_sphere(math.exp(PI / 2)) == pytest.approx(1.0, abs=1e-15)
    for bad in (1.0, 0.5, -2.0):
        with pytest.raises(ValueError):
            bound_cylinder(bad)
        with pytest.raises(ValueError):
            bound_sphere(bad)


@given(st.floats(1.0 + 1e-9, 1e12))
def test_bound_ratio(N):
    assert bound_sphere(N) == pytest.approx(math.sqrt(2) * bound_cylinder(N), rel=1e-14)


def test_golden_max():
    x, v = golden_max(lambda t: -(t - 0.3) ** 2, -1.0, 2.0, 1e-12)
    assert x == pytest.approx(0.3, abs=1e-9) and v == pytest.approx(0.0, abs=1e-15)


def test_cylinder_sup_dilated():
    for lam in (0.3, 1.0, 1.7):
        for R in (0.4, 1.0, 2.2):
            rep = cylinder_sup(dilated_gaussian(lam), R)
            expected = (1 + lam * lam) ** -0.5 * math.exp(-PI * R * R / (1 + lam * lam))
            assert rep.sup_value == pytest.approx(expected, rel=1e-12)
            assert abs(rep.argmax.x[0]) <= 1e-5 and abs(rep.argmax.omega[0]) == R
    rep = cylinder_sup(g, 1.0)
    assert rep.sup_value == pytest.approx(2 ** -0.5 * math.exp(-PI / 2), rel=1e-13)


def test_cylinder_sup_matches_dense_scan(rng):
    for _ in range(10):
        f = random_mixture(rng, max_terms=1)
        while len(f) != 2:
            f = random_mixture(rng, max_terms=2)
        R = rng.uniform(0.1, 3.0)
        rep = cylinder_sup(f, R)
        x = np.arange(-rep.x_truncation, rep.x_truncation + 1e-3, 1e-3)
        dense = max(np.abs(stft_values(f, g, x, w)).max() for w in (R, -R))
        assert rep.sup_value >= dense - 1e-14
        assert rep.sup_value - dense <= 1e-6


def test_sphere_sup_gaussian_is_radial():
    for R in (0.3, 1.0, 2.5):
        rep = sphere_sup(g, R)
        assert rep.sup_value == pytest.approx(2 ** -0.5 * math.exp(-PI * R * R / 2), rel=1e-13)


def test_sphere_sup_dilated_pole():
    # frequency pole for lam > 1, time pole for lam < 1
    R = 1.2
    for lam, pole in ((2.0, "omega"), (1.5, "omega"), (0.5, "x"), (0.25, "x")):
        rep = sphere_sup(dilated_gaussian(lam), R)
        expected = (1 + lam * lam) ** -0.5 * math.exp(-PI * min(lam * lam, 1) * R * R / (1 + lam * lam))
        assert rep.sup_value == pytest.approx(expected, rel=1e-12)
        other = rep.argmax.x[0] if pole == "omega" else rep.argmax.omega[0]
        assert abs(other) <= 1e-5
        phi = np.linspace(0, 2 * PI, 100001)
        scan = dilated_abs(lam, R * np.cos(phi), R * np.sin(phi)).max()
        assert rep.sup_value == pytest.approx(scan, rel=1e-10)


def test_sphere_sup_matches_dense_scan(rng):
    for _ in range(10):
        f = random_mixture(rng, chirp=0.5)
        R = rng.uniform(0.1, 3.0)
        rep = sphere_sup(f, R)
        phi = 2 * PI * np.arange(100000) / 100000
        dense = np.abs(stft_values(f, g, R * np.cos(phi), R * np.sin(phi))).max()
        assert rep.sup_value >= dense - 1e-14
        assert rep.sup_value - dense <= 1e-8


def test_higher_dimension_radial_closed_form():
    lam, R = 0.6, 0.9
    f = dilated_gaussian(lam, d=2)
    cyl = cylinder_sup(f, R)
    assert cyl.sup_value == pytest.approx((1 + lam * lam) ** -1 * math.exp(-PI * R * R / (1 + lam * lam)))
    sph = sphere_sup(f, R)
    assert sph.sup_value == pytest.approx(
        (1 + lam * lam) ** -1 * math.exp(-PI * lam * lam * R * R / (1 + lam * lam)))
    with pytest.raises(UnsupportedDimensionError):
        cylinder_sup(GeneralizedGaussian(1.0, 1.0, [0.5, 0.0], [0.0, 0.0]), R)


def test_zero_signal_rejected():
    with pytest.raises(ValueError):
        cylinder_sup(zero_signal(), 1.0)
    with pytest.raises(ValueError):
        sphere_sup(g, 0.0)


def test_sphere_equality_case():
    for N in (2.0, 10.0, 100.0):
        R = bound_sphere(N)
        rep = verify_theorem(g, R, "sphere")
        assert rep.N_effective == pytest.approx(N, rel=1e-9)
        assert abs(rep.margin) <= 1e-9 and rep.holds and rep.applicable


def test_not_applicable_reports_nan():
    far = GeneralizedGaussian(1.0, 1.0, [2.5], [0.0])
    rep = verify_theorem(far, 0.5, "cylinder")
    assert not rep.applicable and rep.holds
    assert math.isnan(rep.margin) and math.isnan(rep.bound)
    d = rep.to_dict()
    assert d["tol"] == rep.tol and "x_truncation" in d["search"]
    with pytest.raises(ValueError):
        verify_theorem(g, 1.0, "torus")


def test_dilated_cylinder_condition():
    N = 10.0
    for lam in (0.5, 1.0, 2.0):
        r_min = math.sqrt((1 + lam * lam) * math.log(N) / PI)
        assert min_cylinder_radius(dilated_gaussian(lam), N) == pytest.approx(r_min, abs=1e-9)


def test_sharpness_examples():
    rows = sharpness_sweep(10.0, [1.0, 0.01])
    assert rows[0].R_min_numeric == pytest.approx(1.2107, abs=5e-5)
    assert rows[1].R_min_numeric == pytest.approx(0.8561594, abs=5e-7)
    assert all(r.residual <= 1e-6 for r in rows)
    with pytest.raises(ValueError):
        sharpness_sweep(0.5, [1.0])
    with pytest.raises(ValueError):
        sharpness_sweep(10.0, [0.0])


def test_sharpness_monotone_in_lambda():
    rows = sharpness_sweep(5.0, [0.2, 0.6, 1.0, 1.4])
    values = [r.R_min_numeric for r in rows]
    assert all(a < b for a, b in zip(values, values[1:]))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_theorems_hold(seed):
    rng = np.random.default_rng(seed)
    f = random_mixture(rng, chirp=0.5)
    R = rng.uniform(0.1, 3.0)
    for geometry in ("cylinder", "sphere"):
        assert verify_theorem(f, R, geometry).holds


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_scaling(seed):
    rng = np.random.default_rng(seed)
    f = random_mixture(rng)
    c = complex(rng.normal(), rng.normal())
    R = rng.uniform(0.2, 2.5)
    for sup in (cylinder_sup, sphere_sup):
        assert sup(f * c, R).sup_value == pytest.approx(abs(c) * sup(f, R).sup_value, rel=1e-12)
    a = verify_theorem(f, R, "sphere").N_effective
    b = verify_theorem(f * c, R, "sphere").N_effective
    assert a == pytest.approx(b, rel=1e-12)


def test_cylinder_dominates_sphere_poles(rng):
    for _ in range(20):
        f = random_mixture(rng)
        R = rng.uniform(0.2, 2.5)
        poles = np.abs(stft_values(f, g, [0.0, 0.0], [R, -R])).max()
        assert cylinder_sup(f, R).sup_value >= poles - 1e-15


def test_report_argmax_is_on_the_set(rng):
    f = random_mixture(rng)
    rep = sphere_sup(f, 1.3)
    assert rep.argmax.norm() == pytest.approx(1.3, rel=1e-12)
    assert isinstance(rep.argmax, PhasePoint)
