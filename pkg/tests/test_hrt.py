import math

import numpy as np
import pytest

from tfuncertainty.core import (
    GeneralizedGaussian,
    PhasePoint,
    dilated_gaussian,
    evaluate,
    standard_window,
    time_frequency_shift,
    zero_signal,
)
from tfuncertainty.hrt import (
    DuplicatePointError,
    ShiftSystem,
    certify_independence,
    fat_tail_scan,
    gram_matrix,
)
from tfuncertainty.quadrature import integrate
from tfuncertainty.uncertainty import bound_sphere

from conftest import random_mixture

PI = math.pi
g = standard_window()


def two_point_eigenvalues(dist):
    off = math.exp(-PI * dist * dist / 2)
    return 2 ** -0.5 * (1 - off), 2 ** -0.5 * (1 + off)


def test_single_point():
    G = gram_matrix(ShiftSystem([PhasePoint(0.4, -1.0)]))
    assert G.shape == (1, 1) and G[0, 0] == pytest.approx(2 ** -0.5, abs=1e-15)


def test_two_points(rng):
    for dist in (0.25, 0.5, 1.0, 2.0):
        phi = rng.uniform(0, 2 * PI)
        z = PhasePoint(dist * math.cos(phi), dist * math.sin(phi))
        lam = np.linalg.eigvalsh(gram_matrix(ShiftSystem([PhasePoint(0.0, 0.0), z])))
        assert np.allclose(lam, two_point_eigenvalues(dist), atol=1e-12)


def test_two_points_at_unit_distance_certified():
    cert = certify_independence(ShiftSystem([PhasePoint(0.0, 0.0), PhasePoint(1.0, 0.0)]))
    assert cert.min_eigenvalue == pytest.approx(0.5601137230787371, abs=1e-12)
    assert cert.certified_independent
    assert cert.threshold == pytest.approx(1e-8 * 2 ** -0.5)
    d = cert.to_dict()
    assert d["tolerance"] == 1e-8 and len(d["gram"]) == 2


def test_gram_matches_quadrature(rng):
    pts = [PhasePoint(*rng.uniform(-2, 2, 2)) for _ in range(4)]
    G = gram_matrix(ShiftSystem(pts))
    shifted = [time_frequency_shift(g, z) for z in pts]
    for j in range(4):
        for k in range(4):
            xs = (pts[j].x[0], pts[k].x[0])
            freq = abs(pts[j].omega[0]) + abs(pts[k].omega[0])
            res = integrate(
                lambda t: evaluate(shifted[j], t) * np.conj(evaluate(shifted[k], t)),
                0.5 * sum(xs), 2 ** -0.5, 1e-12, spread=0.5 * abs(xs[0] - xs[1]),
                omega_max=freq)
            assert abs(res.value - G[j, k]) <= 1e-9


def test_duplicates_rejected():
    with pytest.raises(DuplicatePointError):
        ShiftSystem([PhasePoint(1.0, 1.0), PhasePoint(0.0, 0.0), PhasePoint(1.0, 1.0)])
    with pytest.raises(ValueError):
        ShiftSystem([])


def test_translation_invariant_spectrum(rng):
    for _ in range(20):
        pts = rng.uniform(-2, 2, (5, 2))
        w = rng.uniform(-3, 3, 2)
        a = np.linalg.eigvalsh(gram_matrix(ShiftSystem(pts)))
        b = np.linalg.eigvalsh(gram_matrix(ShiftSystem(pts + w)))
        assert np.allclose(a, b, atol=1e-10, rtol=0)


def test_min_distance():
    s = ShiftSystem([[0.0, 0.0], [3.0, 4.0], [0.0, 1.0]])
    assert s.min_distance == pytest.approx(1.0)


def test_gaussian_equality_case():
    N = 2.0
    R = bound_sphere(N)
    assert R == pytest.approx(0.6643, abs=5e-5)
    sphere = fat_tail_scan(g, R, N, "sphere")
    assert sphere.holds and sphere.worst_ratio == pytest.approx(1.0, abs=1e-12)
    outside = fat_tail_scan(g, R + 1e-6, N, "exterior")
    assert outside.holds and outside.comparison == "<"
    assert outside.outer_radius > R + 1


def test_gaussian_below_bound_fails():
    rep = fat_tail_scan(g, 0.5, 2.0, "sphere")
    assert not rep.holds
    assert rep.worst_point.norm() == pytest.approx(0.5, rel=1e-12)
    ext = fat_tail_scan(g, 0.5, 2.0, "exterior")
    assert not ext.holds and ext.worst_point.norm() >= 0.5 - 1e-12


def test_dilated_cylinder_at_formula_radius():
    N = 10.0
    for lam in (0.5, 1.0, 2.0):
        R = math.sqrt((1 + lam * lam) * math.log(N) / PI)
        rep = fat_tail_scan(dilated_gaussian(lam), R, N, "cylinder")
        assert rep.holds and rep.worst_ratio == pytest.approx(1.0, abs=1e-9)
        assert abs(rep.worst_point.x[0]) <= 1e-5 and abs(rep.worst_point.omega[0]) == R


def test_no_fat_tail_below_sphere_bound(rng):
    for _ in range(30):
        f = random_mixture(rng, chirp=0.5)
        N = 1 + rng.exponential(5.0)
        R = rng.uniform(0.05, 1.0) * bound_sphere(N)
        rep = fat_tail_scan(f, R, N, "sphere")
        assert not rep.holds
        assert rep.worst_point.norm() == pytest.approx(R, rel=1e-12)


def test_errors():
    with pytest.raises(ValueError):
        fat_tail_scan(zero_signal(), 1.0, 2.0)
    with pytest.raises(ValueError):
        fat_tail_scan(g, 1.0, 2.0, "annulus")
    with pytest.raises(ValueError):
        fat_tail_scan(g, -1.0, 2.0)


def test_report_records_parameters():
    rep = fat_tail_scan(GeneralizedGaussian(1.0, 0.5, [0.3], [0.2]), 1.5, 3.0, "exterior", tol=1e-8)
    d = rep.to_dict()
    assert d["tol"] == 1e-8 and d["outer_radius"] == rep.outer_radius and d["region"] == "exterior"
