"""Suprema of ``|V_g f|`` on cylinders and spheres, and the two radius bounds.

For the Gaussian window ``g(t) = exp(-pi t^2)`` and a nonzero signal ``f``,
put ``N = |<f, g>| / sup |V_g f|`` with the supremum over a boundary set.
Then

* on the cylinder ``|w| = R``:  ``N > 1`` forces ``R > sqrt(log(N)/pi)``;
* on the sphere ``|z| = R``:    ``N > 1`` forces ``R >= sqrt(2 log(N)/pi)``,
  with equality exactly for ``f = c*g``.

Searches are numerical for d = 1 (grid scan followed by golden-section
refinement of the best local maxima).  In higher dimensions only centred
real-spread Gaussians are supported, in closed form.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .core import (
    PI,
    GaussianMixture,
    PhasePoint,
    Signal,
    UnsupportedDimensionError,
    as_mixture,
    dilated_gaussian,
    inner_product,
    standard_window,
)
from .stft import stft_values, x_truncation

DEFAULT_TOL = 1e-10
# floating point cannot see strictness; both theorem checks allow this slack in R
RADIUS_SLACK = 1e-9

_INV_PHI = (math.sqrt(5) - 1) / 2


class BracketError(RuntimeError):
    def __init__(self, message: str, lo: float, hi: float):
        super().__init__(message)
        self.lo, self.hi = lo, hi


@dataclass(frozen=True)
class SupReport:
    geometry: str
    R: float
    sup_value: float
    argmax: PhasePoint
    x_truncation: float | None
    grid_resolution: float
    refined: bool
    tol: float

    def to_dict(self) -> dict:
        out = asdict(self)
        out["argmax"] = {"x": list(self.argmax.x), "omega": list(self.argmax.omega)}
        return out


@dataclass(frozen=True)
class TheoremReport:
    theorem: str
    R: float
    N_effective: float
    bound: float
    holds: bool
    margin: float
    sup: float
    inner_product_abs: float
    applicable: bool
    tol: float
    sup_report: SupReport

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in (
            "theorem", "R", "N_effective", "bound", "holds", "margin", "sup",
            "inner_product_abs", "applicable", "tol")}
        out["radius_slack"] = RADIUS_SLACK
        out["search"] = self.sup_report.to_dict()
        return out


def bound_cylinder(N: float) -> float:
    """``sqrt(log(N)/pi)``: cylinder radii at or below this admit no signal with ratio N."""
    if not N > 1:
        raise ValueError(f"N must exceed 1, got {N}")
    return math.sqrt(math.log(N) / PI)


def bound_sphere(N: float) -> float:
    """``sqrt(2 log(N)/pi)``."""
    if not N > 1:
        raise ValueError(f"N must exceed 1, got {N}")
    return math.sqrt(2.0 * math.log(N) / PI)


# --------------------------------------------------------------------- search

def golden_max(fun, lo: float, hi: float, xtol: float) -> tuple[float, float]:
    """Golden-section search for a maximum of a unimodal ``fun`` on ``[lo, hi]``."""
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = fun(c), fun(d)
    while hi - lo > xtol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = fun(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = fun(d)
    return (c, fc) if fc > fd else (d, fd)


def _scan_and_refine(curve, lo: float, hi: float, n: int, periodic: bool,
                     n_refine: int = 8, xtol: float = 1e-11) -> tuple[float, float]:
    """Maximise ``curve(s)`` (vectorised in s) over ``[lo, hi]``.

    A uniform scan of n points locates candidate local maxima; the best
    ``n_refine`` are polished by golden section inside their grid cell pair.
    """
    if periodic:
        s = lo + (hi - lo) * np.arange(n) / n
    else:
        s = np.linspace(lo, hi, n)
    v = curve(s)
    step = s[1] - s[0]
    if periodic:
        left, right = np.roll(v, 1), np.roll(v, -1)
    else:
        left = np.concatenate([[-np.inf], v[:-1]])
        right = np.concatenate([v[1:], [-np.inf]])
    peaks = np.flatnonzero((v >= left) & (v >= right))
    peaks = peaks[np.argsort(v[peaks])[::-1][:n_refine]]
    best_s, best_v = float(s[np.argmax(v)]), float(np.max(v))

    def scalar(t):
        return float(curve(np.array([t]))[0])

    for i in peaks:
        a, b = s[i] - step, s[i] + step
        if not periodic:
            a, b = max(a, lo), min(b, hi)
        t, val = golden_max(scalar, float(a), float(b), xtol * max(1.0, abs(s[i])))
        if val > best_v:
            best_s, best_v = t, val
    return best_s, best_v


def _feature_scale(f: GaussianMixture, R: float) -> float:
    """Grid step fine enough to resolve bumps and interference fringes of ``|V_g f|``."""
    fringe = 1.0 + R
    for t in f.terms:
        fringe += abs(t.nu[0]) + abs(t.mu[0]) + abs(t.a.imag) * (1.0 + R)
    return min(0.05, 1.0 / (16.0 * fringe))


def _radial_gaussian(f: GaussianMixture):
    """``(|c|, a)`` if f is a single centred, unmodulated, real-spread Gaussian."""
    if len(f.terms) != 1:
        return None
    t = f.terms[0]
    if t.a.imag != 0 or any(t.mu) or any(t.nu):
        return None
    return abs(t.c), t.a.real


def _check_signal(f: Signal) -> GaussianMixture:
    f = as_mixture(f)
    if f.is_zero or not f.terms:
        raise ValueError("the signal must be nonzero")
    return f


def cylinder_sup(f: Signal, R: float, tol: float = DEFAULT_TOL) -> SupReport:
    """``sup |V_g f(x, w)|`` over ``|w| = R``, ``x`` in R^d."""
    if not R > 0:
        raise ValueError(f"R must be positive, got {R}")
    f = _check_signal(f)
    d = f.d
    radial = _radial_gaussian(f) if d > 1 else None
    if radial is not None:
        c, a = radial
        val = c * (1 + a) ** (-d / 2) * math.exp(-PI * R * R / (1 + a))
        argmax = PhasePoint(np.zeros(d), np.eye(d)[0] * R)
        return SupReport("cylinder", R, val, argmax, 0.0, 0.0, False, tol)
    if d != 1:
        raise UnsupportedDimensionError("numerical cylinder search is implemented for d = 1")
    g = standard_window(1)
    x_max = max(x_truncation(f, g, tol / 10), 1.0)
    h = _feature_scale(f, R)
    n = int(math.ceil(2 * x_max / h)) + 1
    best = (-1.0, 0.0, 0.0)
    for w in (R, -R):
        s, v = _scan_and_refine(lambda x, w=w: np.abs(stft_values(f, g, x, w)),
                                -x_max, x_max, n, periodic=False)
        if v > best[0]:
            best = (v, s, w)
    v, s, w = best
    return SupReport("cylinder", R, v, PhasePoint(s, w), x_max, 2 * x_max / (n - 1), True, tol)


def sphere_sup(f: Signal, R: float, tol: float = DEFAULT_TOL) -> SupReport:
    """``sup |V_g f(z)|`` over ``|z| = R``."""
    if not R > 0:
        raise ValueError(f"R must be positive, got {R}")
    f = _check_signal(f)
    d = f.d
    radial = _radial_gaussian(f) if d > 1 else None
    if radial is not None:
        c, a = radial
        rate = min(a, 1.0) / (1 + a)
        val = c * (1 + a) ** (-d / 2) * math.exp(-PI * rate * R * R)
        e = np.eye(d)[0] * R
        argmax = PhasePoint(np.zeros(d), e) if a >= 1 else PhasePoint(e, np.zeros(d))
        return SupReport("sphere", R, val, argmax, None, 0.0, False, tol)
    if d != 1:
        raise UnsupportedDimensionError("numerical sphere search is implemented for d = 1")
    g = standard_window(1)
    h = _feature_scale(f, R)
    n = max(1024, int(math.ceil(2 * PI * R / h)))

    def curve(phi):
        return np.abs(stft_values(f, g, R * np.cos(phi), R * np.sin(phi)))

    phi, v = _scan_and_refine(curve, 0.0, 2 * PI, n, periodic=True)
    argmax = PhasePoint(R * math.cos(phi), R * math.sin(phi))
    return SupReport("sphere", R, v, argmax, None, 2 * PI * R / n, True, tol)


# ------------------------------------------------------------------- theorems

def verify_theorem(f: Signal, R: float, geometry: str, tol: float = DEFAULT_TOL) -> TheoremReport:
    """Measure ``N_effective = |<f,g>| / sup`` on the boundary set and test the radius bound.

    When ``N_effective <= 1`` the hypothesis fails: the report is marked not
    applicable and holds vacuously, with ``bound`` and ``margin`` set to NaN.
    """
    if geometry == "cylinder":
        rep = cylinder_sup(f, R, tol)
        formula = bound_cylinder
    elif geometry == "sphere":
        rep = sphere_sup(f, R, tol)
        formula = bound_sphere
    else:
        raise ValueError(f"geometry must be 'cylinder' or 'sphere', got {geometry!r}")
    f = as_mixture(f)
    ip = abs(inner_product(f, standard_window(f.d)))
    n_eff = ip / rep.sup_value if rep.sup_value > 0 else math.inf
    if not n_eff > 1:
        return TheoremReport(geometry, R, n_eff, math.nan, True, math.nan, rep.sup_value, ip,
                             False, tol, rep)
    bound = formula(n_eff)
    # strict for the cylinder, non-strict for the sphere; both relaxed by RADIUS_SLACK
    holds = R > bound - RADIUS_SLACK if geometry == "cylinder" else R >= bound - RADIUS_SLACK
    return TheoremReport(geometry, R, n_eff, bound, bool(holds), R - bound, rep.sup_value, ip,
                         True, tol, rep)


@dataclass(frozen=True)
class SharpnessRow:
    lam: float
    R_min_numeric: float
    R_min_formula: float

    @property
    def residual(self) -> float:
        return abs(self.R_min_numeric - self.R_min_formula)


def cylinder_condition_holds(f: Signal, R: float, N: float, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``|V_g f| <= |<f,g>|/N`` everywhere on ``|w| = R``."""
    f = as_mixture(f)
    ip = abs(inner_product(f, standard_window(f.d)))
    return cylinder_sup(f, R, tol).sup_value <= ip / N


def min_cylinder_radius(f: Signal, N: float, tol: float = DEFAULT_TOL,
                        rtol: float = 1e-11) -> float:
    """Smallest R at which the cylinder condition holds, by bisection."""
    lo, hi = 0.0, 1.0
    for _ in range(60):
        if cylinder_condition_holds(f, hi, N, tol):
            break
        lo, hi = hi, 2 * hi
    else:
        raise BracketError(f"cylinder condition never held up to R={hi}", lo, hi)
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if cylinder_condition_holds(f, mid, N, tol):
            hi = mid
        else:
            lo = mid
    return hi


def sharpness_sweep(N: float, lambdas: Sequence[float],
                    tol: float = DEFAULT_TOL) -> list[SharpnessRow]:
    """Minimal cylinder radius for dilated Gaussians against ``sqrt((1+lam^2) log N / pi)``."""
    if not N > 1:
        raise ValueError(f"N must exceed 1, got {N}")
    rows = []
    for lam in lambdas:
        if not lam > 0:
            raise ValueError(f"lambda must be positive, got {lam}")
        r_num = min_cylinder_radius(dilated_gaussian(lam), N, tol)
        rows.append(SharpnessRow(float(lam), r_num, math.sqrt((1 + lam * lam) * math.log(N) / PI)))
    return rows
