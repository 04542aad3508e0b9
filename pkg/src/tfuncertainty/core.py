"""Signals, phase-space points and exact Gaussian integration.

Every closed-form computation in the package reduces to one integral,

    int exp(-pi*A*t.t + 2*pi*B.t + C) dt = A**(-d/2) * exp(pi*B.B/A + C),

valid for complex ``A`` with ``Re(A) > 0`` and complex vectors ``B`` (the
dot product ``B.B`` is bilinear, not Hermitian).  The principal square
root is the correct branch because ``A`` stays in the right half-plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

import numpy as np

PI = math.pi


class DimensionError(ValueError):
    """Operands live in different dimensions."""


class UnsupportedDimensionError(ValueError):
    """The operation is only implemented for lower dimensions."""


def _as_vector(v, name: str) -> tuple:
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return tuple(float(x) for x in arr)


@dataclass(frozen=True)
class PhasePoint:
    """A point ``z = (x, omega)`` of the time-frequency plane."""

    x: tuple
    omega: tuple

    def __init__(self, x, omega=None):
        if omega is None:
            # single 2d-vector (x_1..x_d, omega_1..omega_d)
            flat = _as_vector(x, "z")
            if len(flat) % 2:
                raise ValueError("a flat phase-space vector needs even length")
            half = len(flat) // 2
            x, omega = flat[:half], flat[half:]
        x = _as_vector(x, "x")
        omega = _as_vector(omega, "omega")
        if len(x) != len(omega):
            raise DimensionError(f"x has length {len(x)} but omega has length {len(omega)}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "omega", omega)

    @property
    def d(self) -> int:
        return len(self.x)

    def as_array(self) -> np.ndarray:
        return np.array(self.x + self.omega)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def __add__(self, other: "PhasePoint") -> "PhasePoint":
        return PhasePoint(np.add(self.x, other.x), np.add(self.omega, other.omega))

    def __sub__(self, other: "PhasePoint") -> "PhasePoint":
        return PhasePoint(np.subtract(self.x, other.x), np.subtract(self.omega, other.omega))

    def __neg__(self) -> "PhasePoint":
        return PhasePoint(np.negative(self.x), np.negative(self.omega))


def _as_complex(v, name: str) -> complex:
    c = complex(v)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise ValueError(f"{name} must be finite, got {c}")
    return c


@dataclass(frozen=True)
class GeneralizedGaussian:
    """The function ``t -> c * exp(-pi*a*|t - mu|^2 + 2*pi*i*nu.t)`` on R^d.

    ``a`` is a complex spread with positive real part; a nonzero imaginary
    part makes the term a linear chirp.
    """

    c: complex
    a: complex
    mu: tuple
    nu: tuple

    def __init__(self, c=1.0, a=1.0, mu=(0.0,), nu=None):
        c = _as_complex(c, "amplitude c")
        a = _as_complex(a, "spread a")
        if not a.real > 0:
            raise ValueError(f"spread must have positive real part, got a={a}")
        mu = _as_vector(mu, "mu")
        nu = _as_vector(np.zeros(len(mu)) if nu is None else nu, "nu")
        if len(mu) != len(nu):
            raise DimensionError(f"mu has length {len(mu)} but nu has length {len(nu)}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)

    @property
    def d(self) -> int:
        return len(self.mu)

    def canonical(self) -> tuple[complex, np.ndarray, complex]:
        """Return ``(A, B, C)`` with ``f(t) = c * exp(-pi*A*t.t + 2*pi*B.t + C)``."""
        mu = np.array(self.mu)
        b = self.a * mu + 1j * np.array(self.nu)
        return self.a, b, -PI * self.a * float(mu @ mu)

    @classmethod
    def from_canonical(cls, amplitude: complex, A: complex, B, C: complex) -> "GeneralizedGaussian":
        """Inverse of :meth:`canonical` (the amplitude absorbs ``exp(C)`` remainders)."""
        B = np.atleast_1d(np.asarray(B, dtype=complex))
        mu = B.real / A.real
        nu = B.imag - A.imag * mu
        c = amplitude * np.exp(C + PI * A * (mu @ mu))
        return cls(c=c, a=A, mu=mu, nu=nu)

    def scaled(self, k: complex) -> "GeneralizedGaussian":
        return GeneralizedGaussian(self.c * k, self.a, self.mu, self.nu)

    def shifted(self, z: PhasePoint) -> "GeneralizedGaussian":
        """``pi(z) f = M_omega T_x f``: the term re-centred at mu + x, nu + omega."""
        _check_dim(self.d, z.d)
        x = np.array(z.x)
        phase = np.exp(-2j * PI * float(np.dot(self.nu, x)))
        return GeneralizedGaussian(
            self.c * phase, self.a, np.add(self.mu, x), np.add(self.nu, z.omega)
        )


def standard_window(d: int = 1) -> GeneralizedGaussian:
    """The window ``g(t) = exp(-pi t^2)``."""
    return GeneralizedGaussian(1.0, 1.0, np.zeros(d), np.zeros(d))


def dilated_gaussian(lam: float, d: int = 1, c: complex = 1.0) -> GeneralizedGaussian:
    """``f_lambda(t) = exp(-pi lambda^2 t^2)``."""
    if not lam > 0:
        raise ValueError(f"dilation must be positive, got {lam}")
    return GeneralizedGaussian(c, lam * lam, np.zeros(d), np.zeros(d))


@dataclass(frozen=True)
class GaussianMixture:
    """Finite sum of :class:`GeneralizedGaussian` terms sharing a dimension.

    The empty mixture is the zero signal.
    """

    terms: tuple = ()
    d: int = field(default=1)

    def __init__(self, terms: Iterable[GeneralizedGaussian] = (), d: int | None = None):
        terms = tuple(terms)
        if d is None:
            d = terms[0].d if terms else 1
        for k, term in enumerate(terms):
            if not isinstance(term, GeneralizedGaussian):
                raise TypeError(f"term {k} is {type(term).__name__}, not GeneralizedGaussian")
            if term.d != d:
                raise DimensionError(f"term {k} has dimension {term.d}, mixture has {d}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "d", int(d))

    def __iter__(self) -> Iterator[GeneralizedGaussian]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def is_zero(self) -> bool:
        return all(t.c == 0 for t in self.terms)

    def __add__(self, other: "GaussianMixture") -> "GaussianMixture":
        other = as_mixture(other)
        _check_dim(self.d, other.d)
        return GaussianMixture(self.terms + other.terms, self.d)

    def scaled(self, k: complex) -> "GaussianMixture":
        return GaussianMixture((t.scaled(k) for t in self.terms), self.d)

    def __mul__(self, k: complex) -> "GaussianMixture":
        return self.scaled(k)

    __rmul__ = __mul__


Signal = Union[GaussianMixture, GeneralizedGaussian]


def as_mixture(f: Signal) -> GaussianMixture:
    if isinstance(f, GaussianMixture):
        return f
    if isinstance(f, GeneralizedGaussian):
        return GaussianMixture((f,), f.d)
    raise TypeError(f"expected a Gaussian signal, got {type(f).__name__}")


def zero_signal(d: int = 1) -> GaussianMixture:
    return GaussianMixture((), d)


@dataclass(frozen=True)
class SampledSignal:
    """Uniform samples ``f(t0 + k*dt)``, ``k = 0..n-1`` of a signal on R."""

    samples: np.ndarray
    t0: float
    dt: float

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim != 1 or s.size < 2:
            raise ValueError("a sampled signal needs a 1-d array of at least 2 samples")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "dt", float(self.dt))

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def d(self) -> int:
        return 1

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)

    @classmethod
    def from_signal(cls, f: Signal, t0: float, dt: float, n: int) -> "SampledSignal":
        f = as_mixture(f)
        if f.d != 1:
            raise DimensionError("sampled signals are one-dimensional")
        t = t0 + dt * np.arange(n)
        return cls(evaluate(f, t), t0, dt)


def _check_dim(d1: int, d2: int) -> None:
    if d1 != d2:
        raise DimensionError(f"dimension mismatch: {d1} vs {d2}")


def points_array(t, d: int, dtype=float) -> np.ndarray:
    """Coerce ``t`` to an array whose last axis has length ``d``.

    For ``d == 1`` every entry is a point and a trailing axis is always
    appended.
    """
    arr = np.asarray(t, dtype=dtype)
    if d == 1:
        arr = arr[..., None]
    if arr.ndim == 0 or arr.shape[-1] != d:
        raise DimensionError(f"points must have trailing dimension {d}, got shape {arr.shape}")
    return arr


def gaussian_integral(A, B, C, d: int):
    """``int_{R^d} exp(-pi*A*t.t + 2*pi*B.t + C) dt`` in closed form.

    ``A`` and ``C`` broadcast against ``B[..., 0]``; ``B`` carries the
    coordinate axis last.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if np.any(A.real <= 0):
        raise ValueError("quadratic coefficient must have positive real part")
    bb = np.sum(B * B, axis=-1)
    return np.sqrt(A) ** (-d) * np.exp(PI * bb / A + C)


def evaluate(f: Signal, t):
    """Evaluate a mixture at ``t`` (scalar, vector or array of points).

    Complex ``t`` evaluates the entire extension of each term.
    """
    f = as_mixture(f)
    pts = points_array(t, f.d, complex if np.iscomplexobj(t) else float)
    out = np.zeros(pts.shape[:-1], dtype=complex)
    for term in f.terms:
        diff = pts - np.array(term.mu)
        out += term.c * np.exp(-PI * term.a * np.sum(diff * diff, axis=-1)
                               + 2j * PI * (pts @ np.array(term.nu)))
    return out[()] if out.ndim == 0 else out


def conjugate(f: Signal) -> GaussianMixture:
    """The mixture whose values on R^d are ``conj(f(t))``."""
    f = as_mixture(f)
    return GaussianMixture(
        (GeneralizedGaussian(np.conj(t.c), np.conj(t.a), t.mu, np.negative(t.nu)) for t in f.terms),
        f.d)


def time_frequency_shift(f: Signal, z: PhasePoint) -> GaussianMixture:
    """``pi(z) f``, i.e. ``t -> exp(2 pi i t.omega) f(t - x)``."""
    f = as_mixture(f)
    _check_dim(f.d, z.d)
    return GaussianMixture((t.shifted(z) for t in f.terms), f.d)


def term_inner_product(f: GeneralizedGaussian, h: GeneralizedGaussian) -> complex:
    _check_dim(f.d, h.d)
    A1, B1, C1 = f.canonical()
    A2, B2, C2 = h.canonical()
    val = gaussian_integral(A1 + np.conj(A2), B1 + np.conj(B2), C1 + np.conj(C2), f.d)
    return complex(f.c * np.conj(h.c) * val)


def inner_product(f: Signal, h: Signal) -> complex:
    """``<f, h> = int f(t) conj(h(t)) dt``, exact for Gaussian mixtures."""
    f, h = as_mixture(f), as_mixture(h)
    _check_dim(f.d, h.d)
    return sum((term_inner_product(p, q) for p in f.terms for q in h.terms), 0j)


def l2_norm(f: Union[Signal, SampledSignal]) -> float:
    if isinstance(f, SampledSignal):
        return math.sqrt(f.dt * float(np.sum(np.abs(f.samples) ** 2)))
    return math.sqrt(max(inner_product(f, f).real, 0.0))

