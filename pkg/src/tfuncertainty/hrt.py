"""Finite Gabor systems and the "bump with fat tail" condition.

``gram_matrix``/``certify_independence`` decide linear independence of
``{pi(z_k) g}`` from the smallest Gram eigenvalue; a positive certificate
is a proof of independence, a negative one is only inconclusive.

``fat_tail_scan`` measures ``max |V_g f(z)| * N / |<f, g>|`` over one of
three regions: the sphere ``|z| = R`` or cylinder ``|w| = R`` (boundary
conditions, compared with ``<=``), or the open exterior ``|z| > R``
(compared strictly with ``<``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    PI,
    GeneralizedGaussian,
    PhasePoint,
    Signal,
    UnsupportedDimensionError,
    as_mixture,
    inner_product,
    standard_window,
    time_frequency_shift,
)
from .stft import decay_radius, stft_values
from .uncertainty import DEFAULT_TOL, cylinder_sup, golden_max, sphere_sup

# boundary conditions use <= and tolerate this much excess in the ratio
RATIO_SLACK = 1e-9


class DuplicatePointError(ValueError):
    pass


@dataclass(frozen=True)
class ShiftSystem:
    window: GeneralizedGaussian
    points: tuple

    def __init__(self, points: Sequence, window: GeneralizedGaussian | None = None):
        pts = tuple(p if isinstance(p, PhasePoint) else PhasePoint(p) for p in points)
        if not pts:
            raise ValueError("a shift system needs at least one point")
        if window is None:
            window = standard_window(pts[0].d)
        if any(p.d != window.d for p in pts):
            raise ValueError("points and window must share the dimension")
        object.__setattr__(self, "window", window)
        object.__setattr__(self, "points", pts)
        if len(pts) > 1 and self.min_distance == 0:
            raise DuplicatePointError("time-frequency points must be distinct")

    @property
    def min_distance(self) -> float:
        if len(self.points) < 2:
            return math.inf
        arr = np.array([p.as_array() for p in self.points])
        dist = np.linalg.norm(arr[:, None, :] - arr[None, :, :], axis=-1)
        return float(dist[np.triu_indices(len(arr), 1)].min())


@dataclass(frozen=True)
class GramCertificate:
    gram: np.ndarray
    min_eigenvalue: float
    certified_independent: bool
    tolerance: float

    @property
    def threshold(self) -> float:
        n = self.gram.shape[0]
        return self.tolerance * float(np.trace(self.gram).real) / n

    def to_dict(self) -> dict:
        return {
            "gram": [[[v.real, v.imag] for v in row] for row in self.gram],
            "min_eigenvalue": self.min_eigenvalue,
            "tolerance": self.tolerance,
            "threshold": self.threshold,
            "certified": self.certified_independent,
        }


def gram_matrix(system: ShiftSystem) -> np.ndarray:
    """``G[j, k] = <pi(z_j) g, pi(z_k) g>``."""
    shifted = [time_frequency_shift(system.window, z) for z in system.points]
    n = len(shifted)
    G = np.empty((n, n), dtype=complex)
    for j in range(n):
        G[j, j] = inner_product(shifted[j], shifted[j]).real
        for k in range(j + 1, n):
            G[j, k] = inner_product(shifted[j], shifted[k])
            G[k, j] = np.conj(G[j, k])
    return G


def certify_independence(system: ShiftSystem, tolerance: float = 1e-8) -> GramCertificate:
    G = gram_matrix(system)
    try:
        lam_min = float(np.linalg.eigvalsh(G)[0])
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"Hermitian eigensolver failed: {exc}") from exc
    n = G.shape[0]
    certified = lam_min > tolerance * float(np.trace(G).real) / n
    return GramCertificate(G, lam_min, bool(certified), tolerance)


@dataclass(frozen=True)
class FatTailReport:
    R: float
    N: float
    region: str
    comparison: str
    holds: bool
    worst_point: PhasePoint
    worst_ratio: float
    outer_radius: float | None
    tol: float

    def to_dict(self) -> dict:
        return {
            "R": self.R, "N": self.N, "region": self.region, "comparison": self.comparison,
            "holds": self.holds, "worst_ratio": self.worst_ratio,
            "worst_point": {"x": list(self.worst_point.x), "omega": list(self.worst_point.omega)},
            "outer_radius": self.outer_radius, "tol": self.tol,
            "ratio_slack": RATIO_SLACK,
        }


def _exterior_max(f, R: float, R_out: float, step: float):
    """Maximise ``|V_g f|`` over the annulus ``R <= |z| <= R_out`` (d = 1)."""
    g = standard_window(1)
    n_r = max(8, int(math.ceil((R_out - R) / step)) + 1)
    n_a = max(256, int(math.ceil(2 * PI * R_out / step)))
    r = np.linspace(R, R_out, n_r)
    phi = 2 * PI * np.arange(n_a) / n_a
    rr, pp = np.meshgrid(r, phi, indexing="ij")
    vals = np.abs(stft_values(f, g, rr * np.cos(pp), rr * np.sin(pp)))
    i, j = np.unravel_index(np.argmax(vals), vals.shape)
    best_r, best_p, best_v = float(r[i]), float(phi[j]), float(vals[i, j])

    def at(rad, ang):
        return float(abs(stft_values(f, g, rad * math.cos(ang), rad * math.sin(ang))))

    # alternate one-dimensional golden searches in radius and angle
    dr, dp = r[1] - r[0], phi[1] - phi[0]
    for _ in range(4):
        best_p, _ = golden_max(lambda a: at(best_r, a), best_p - dp, best_p + dp, 1e-12)
        lo, hi = max(R, best_r - dr), min(R_out, best_r + dr)
        best_r, best_v = golden_max(lambda rad: at(rad, best_p), lo, hi, 1e-12)
        if at(lo, best_p) >= best_v:
            best_r, best_v = lo, at(lo, best_p)
        dr, dp = dr / 4, dp / 4
    return PhasePoint(best_r * math.cos(best_p), best_r * math.sin(best_p)), best_v


def fat_tail_scan(f: Signal, R: float, N: float, region: str = "exterior",
                  tol: float = DEFAULT_TOL) -> FatTailReport:
    """Check ``|V_g f(z)| (<, <=) |<f, g>| / N`` over the chosen region."""
    f = as_mixture(f)
    if not f.terms or f.is_zero:
        raise ValueError("the signal must be nonzero")
    if not (R > 0 and N > 0):
        raise ValueError("R and N must be positive")
    g = standard_window(f.d)
    ip = abs(inner_product(f, g))
    if region == "sphere":
        rep = sphere_sup(f, R, tol)
        point, sup, outer = rep.argmax, rep.sup_value, None
    elif region == "cylinder":
        rep = cylinder_sup(f, R, tol)
        point, sup, outer = rep.argmax, rep.sup_value, rep.x_truncation
    elif region == "exterior":
        if f.d != 1:
            raise UnsupportedDimensionError("exterior scans are implemented for d = 1")
        # beyond outer the envelope certifies |V_g f| < tol * |<f,g>| / N
        outer = max(decay_radius(f, g, tol * ip / N), R + 1.0)
        point, sup = _exterior_max(f, R, outer, step=0.05)
    else:
        raise ValueError(f"region must be sphere, cylinder or exterior, got {region!r}")
    ratio = sup * N / ip if ip > 0 else math.inf
    if region == "exterior":
        comparison, holds = "<", ratio < 1.0
    else:
        comparison, holds = "<=", ratio <= 1.0 + RATIO_SLACK
    return FatTailReport(float(R), float(N), region, comparison, bool(holds), point,
                         float(ratio), outer, tol)
