"""Phase-space rotations in one dimension and the fractional Fourier transform.

The rotation ``S(theta) = [[cos, sin], [-sin, cos]]`` acting on ``(x, w)``
is implemented on L^2(R) by the fractional Fourier transform ``F_theta``,
with ``F_{pi/2}`` the ordinary Fourier transform ``int f(t) e^{-2 pi i t w} dt``.
The covariance identity checked here is

    |V_g f(S^{-1} z)| = |V_g (F_theta f)(z)|,    g(t) = exp(-pi t^2).

On a term ``c*exp(-pi*A*t^2 + 2*pi*B*t + C)`` the transform acts by

    A -> (A cos + i sin) / (cos + i A sin)
    B -> B / (cos + i A sin)
    C -> C + i pi B^2 sin / (cos + i A sin)

times the prefactor ``(cos + i A sin)^{-1/2} e^{i theta/2}``.  Writing
``cos + i A sin = (1+A)/2 * e^{i theta} * (1 + rho e^{-2 i theta})`` with
``rho = (1-A)/(1+A)``, ``|rho| < 1``, the prefactor becomes
``((1+A)/2)^{-1/2} (1 + rho e^{-2 i theta})^{-1/2}`` where both principal
roots are continuous in theta.  That fixes the branch once and for all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    GaussianMixture,
    GeneralizedGaussian,
    PhasePoint,
    Signal,
    UnsupportedDimensionError,
    as_mixture,
    standard_window,
)
from .stft import stft_values

PI = math.pi


def _require_1d(d: int) -> None:
    if d != 1:
        raise UnsupportedDimensionError(f"rotations are implemented for d = 1, got d = {d}")


@dataclass(frozen=True)
class Rotation:
    theta: float

    @property
    def matrix(self) -> np.ndarray:
        c, s = math.cos(self.theta), math.sin(self.theta)
        return np.array([[c, s], [-s, c]])

    def inverse(self) -> "Rotation":
        return Rotation(-self.theta)


def rotate(z: PhasePoint, theta: float) -> PhasePoint:
    _require_1d(z.d)
    return PhasePoint(Rotation(theta).matrix @ z.as_array())


def frft_prefactor(A: complex, theta: float) -> complex:
    """Branch-continuous ``e^{i theta/2} (cos + i A sin)^{-1/2}``; equals 1 at theta = 0."""
    rho = (1 - A) / (1 + A)
    return complex(((1 + A) / 2) ** -0.5 * (1 + rho * np.exp(-2j * theta)) ** -0.5)


def _frft_term(term: GeneralizedGaussian, theta: float) -> GeneralizedGaussian:
    A, B, C = term.canonical()
    B = complex(B[0])
    c, s = math.cos(theta), math.sin(theta)
    w = c + 1j * A * s
    if w == 0:
        raise ArithmeticError("degenerate rotation denominator")  # impossible when Re(A) > 0
    A2 = (A * c + 1j * s) / w
    if not A2.real > 0:
        raise ArithmeticError(f"rotated spread {A2} left the right half-plane")
    B2 = B / w
    C2 = C + 1j * PI * B * B * s / w
    return GeneralizedGaussian.from_canonical(term.c * frft_prefactor(A, theta), A2, [B2], C2)


def frft(f: Signal, theta: float) -> GaussianMixture:
    """Fractional Fourier transform of angle ``theta`` (``pi/2`` is the Fourier transform)."""
    f = as_mixture(f)
    _require_1d(f.d)
    return GaussianMixture((_frft_term(t, theta) for t in f.terms), 1)


def fourier_transform(f: Signal) -> GaussianMixture:
    return frft(f, PI / 2)


def verify_covariance(f: Signal, theta: float, z) -> float:
    """Max of ``| |V_g f(S^{-1} z)| - |V_g F_theta f (z)| |`` over the given points.

    ``z`` is a PhasePoint or an array of shape (..., 2) holding ``(x, w)``.
    """
    f = as_mixture(f)
    _require_1d(f.d)
    pts = z.as_array() if isinstance(z, PhasePoint) else np.asarray(z, dtype=float)
    back = pts @ Rotation(-theta).matrix.T
    g = standard_window(1)
    lhs = np.abs(stft_values(f, g, back[..., 0], back[..., 1]))
    rhs = np.abs(stft_values(frft(f, theta), g, pts[..., 0], pts[..., 1]))
    return float(np.max(np.abs(lhs - rhs)))
