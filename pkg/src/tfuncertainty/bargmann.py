"""Bargmann transform, the Gaussian-smoothing transform Phi, and Fock-space checks.

    Bf(z)   = 2^{d/4} int f(t) exp(2 pi t.z - pi t.t - pi z.z/2) dt
    Phi f(z) = int exp(-pi (t - z).(t - z)) f(t) dt

both entire in ``z = x + i w``.  With ``g(t) = exp(-pi t^2)`` they satisfy

    |V_g f(x, -w)| = exp(-pi |w|^2) |Phi f(z)|
    V_g f(x, -w)  = 2^{-d/4} exp(pi i x.w) Bf(z) exp(-pi |z|^2 / 2).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    PI,
    PhasePoint,
    Signal,
    as_mixture,
    gaussian_integral,
    points_array,
    standard_window,
)
from .stft import stft_values


class TruncationWarning(UserWarning):
    """A truncated integral left a tail above the requested tolerance."""


@dataclass(frozen=True)
class ComplexPoint:
    """``z = x + i w`` in C^d."""

    z: tuple

    def __init__(self, z):
        arr = np.atleast_1d(np.asarray(z, dtype=complex))
        if arr.ndim != 1 or not np.all(np.isfinite(arr)):
            raise ValueError("z must be a finite complex vector")
        object.__setattr__(self, "z", tuple(complex(v) for v in arr))

    @classmethod
    def from_phase_point(cls, p: PhasePoint) -> "ComplexPoint":
        return cls(np.array(p.x) + 1j * np.array(p.omega))

    @property
    def d(self) -> int:
        return len(self.z)

    @property
    def x(self) -> np.ndarray:
        return np.array(self.z).real

    @property
    def omega(self) -> np.ndarray:
        return np.array(self.z).imag

    def norm(self) -> float:
        return float(np.linalg.norm(np.array(self.z)))


def _points(z, d: int) -> np.ndarray:
    if isinstance(z, ComplexPoint):
        z = np.array(z.z) if z.d > 1 else z.z[0]
    return points_array(z, d, complex)


def _stft_coords(x: np.ndarray, w: np.ndarray, d: int):
    # stft_values adds its own coordinate axis when d = 1
    return (x[..., 0], w[..., 0]) if d == 1 else (x, w)


def _unwrap(out: np.ndarray):
    return complex(out) if out.ndim == 0 else out


def _smoothing(f: Signal, z, zz_coeff: float) -> np.ndarray:
    """``int f(t) exp(-pi t.t + 2 pi t.z + zz_coeff * pi z.z) dt`` for every z."""
    f = as_mixture(f)
    pts = _points(z, f.d)
    zz = np.sum(pts * pts, axis=-1)
    out = np.zeros(pts.shape[:-1], dtype=complex)
    for term in f.terms:
        A, B, C = term.canonical()
        out += term.c * gaussian_integral(A + 1.0, B + pts, C + zz_coeff * PI * zz, f.d)
    return out


def bargmann(f: Signal, z):
    """Bargmann transform at ``z`` (ComplexPoint, complex scalar for d=1, or array)."""
    d = as_mixture(f).d
    return _unwrap(2.0 ** (d / 4) * _smoothing(f, z, -0.5))


def phi_transform(f: Signal, z):
    """``Phi f(z) = int exp(-pi (t - z)^2) f(t) dt``."""
    return _unwrap(_smoothing(f, z, -1.0))


def verify_bargmann_relation(f: Signal, z) -> float:
    """Largest ``|V_g f(x,-w) - 2^{-d/4} e^{pi i x.w} Bf(z) e^{-pi|z|^2/2}|`` over the given points.

    Both sides are computed independently: the left from the STFT closed
    form, the right from the Bargmann closed form.
    """
    f = as_mixture(f)
    d = f.d
    pts = _points(z, d)
    x, w = pts.real, pts.imag
    lhs = stft_values(f, standard_window(d), *_stft_coords(x, -w, d))
    bf = 2.0 ** (d / 4) * _smoothing(f, z, -0.5)
    rhs = (2.0 ** (-d / 4) * np.exp(1j * PI * np.sum(x * w, axis=-1)) * bf
           * np.exp(-PI * np.sum(np.abs(pts) ** 2, axis=-1) / 2))
    return float(np.max(np.abs(lhs - rhs)))


def verify_phi_identity(f: Signal, z) -> float:
    """Largest ``| |V_g f(x,-w)| - e^{-pi|w|^2} |Phi f(z)| |`` over the given points."""
    f = as_mixture(f)
    d = f.d
    pts = _points(z, d)
    x, w = pts.real, pts.imag
    lhs = np.abs(stft_values(f, standard_window(d), *_stft_coords(x, -w, d)))
    rhs = np.exp(-PI * np.sum(w * w, axis=-1)) * np.abs(_smoothing(f, z, -1.0))
    return float(np.max(np.abs(lhs - rhs)))


def fock_norm(f: Signal, truncation_radius: float = 6.0, grid_step: float = 0.02,
              tol: float = 1e-8) -> float:
    """``(int_C |Bf(z)|^2 exp(-pi|z|^2) dA)^{1/2}`` by a midpoint sum on a square grid (d = 1).

    Emits :class:`TruncationWarning` when the weighted density on the
    boundary of the square exceeds ``tol``.
    """
    f = as_mixture(f)
    if f.d != 1:
        raise ValueError("fock_norm is implemented for d = 1")
    if not f.terms:
        return 0.0
    L = float(truncation_radius)
    n = max(2, int(round(2 * L / grid_step)))
    h = 2 * L / n
    axis = -L + h * (np.arange(n) + 0.5)
    X, W = np.meshgrid(axis, axis, indexing="ij")
    Z = X + 1j * W
    density = np.abs(bargmann(f, Z)) ** 2 * np.exp(-PI * np.abs(Z) ** 2)
    rim = max(density[0].max(), density[-1].max(), density[:, 0].max(), density[:, -1].max())
    if rim > tol:
        warnings.warn(
            f"Fock density {rim:.2e} on the truncation boundary |Re z|,|Im z| = {L} "
            f"exceeds {tol:.1e}; enlarge truncation_radius", TruncationWarning, stacklevel=2)
    return math.sqrt(float(density.sum()) * h * h)


@dataclass(frozen=True)
class BoundaryMax:
    interior_max: float
    boundary_max: float
    R: float
    grid: tuple

    @property
    def gap(self) -> float:
        return self.interior_max - self.boundary_max


def boundary_max_diagnostic(f: Signal, R: float, grid: tuple = (200, 720)) -> BoundaryMax:
    """Compare ``max |Bf|`` over the open disc with its maximum on ``|z| = R``.

    ``grid = (n_radii, n_angles)``; interior radii are ``R*k/n_radii`` for
    ``k < n_radii``.  Holomorphy forces ``interior_max <= boundary_max`` up to
    the angular sampling error.
    """
    f = as_mixture(f)
    if f.d != 1:
        raise ValueError("boundary_max_diagnostic is implemented for d = 1")
    n_r, n_a = grid
    angles = np.exp(2j * PI * np.arange(n_a) / n_a)
    radii = R * np.arange(n_r) / n_r
    inner = np.abs(bargmann(f, radii[:, None] * angles[None, :]))
    rim = np.abs(bargmann(f, R * angles))
    return BoundaryMax(float(inner.max()), float(rim.max()), float(R), (n_r, n_a))


def cauchy_riemann_residual(f: Signal, z, h: float) -> float:
    """Max of ``|D_x F + i D_y F|`` for central differences of step h, F = Bf (d = 1).

    Zero for holomorphic F up to O(h^2) truncation.
    """
    z = np.asarray(z, dtype=complex)
    dx = (bargmann(f, z + h) - bargmann(f, z - h)) / (2 * h)
    dy = (bargmann(f, z + 1j * h) - bargmann(f, z - 1j * h)) / (2 * h)
    return float(np.max(np.abs(dx + 1j * dy)))
