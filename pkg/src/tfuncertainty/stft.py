"""Short-time Fourier transform ``V_g f(x, w) = int exp(-2 pi i t.w) f(t) conj(g(t - x)) dt``.

Three routes: exact on Gaussian mixtures, adaptive quadrature of the
defining integral, and an FFT over sampled signals.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import (
    PI,
    GaussianMixture,
    GeneralizedGaussian,
    PhasePoint,
    SampledSignal,
    Signal,
    as_mixture,
    conjugate,
    evaluate,
    gaussian_integral,
    inner_product,
    points_array,
    standard_window,
    time_frequency_shift,
    _check_dim,
)
from .quadrature import DEFAULT_TOL, integrate

Window = Union[GeneralizedGaussian, GaussianMixture]


def stft_values(f: Signal, g: Window, x, omega) -> np.ndarray:
    """Vectorised closed-form STFT.

    ``x`` and ``omega`` broadcast against each other; for ``d > 1`` their
    last axis holds coordinates.
    """
    f, g = as_mixture(f), as_mixture(g)
    _check_dim(f.d, g.d)
    d = f.d
    x = points_array(x, d)
    omega = points_array(omega, d)
    x, omega = np.broadcast_arrays(x, omega)
    out = np.zeros(x.shape[:-1], dtype=complex)
    for p in f.terms:
        A1, B1, C1 = p.canonical()
        for q in g.terms:
            # pi(z) q has amplitude q.c*exp(-2 pi i nu_q.x), centre mu_q + x, frequency nu_q + omega
            amp = p.c * np.conj(q.c * np.exp(-2j * PI * (x @ np.array(q.nu))))
            mu = np.array(q.mu) + x
            B2 = q.a * mu + 1j * (np.array(q.nu) + omega)
            C2 = -PI * q.a * np.sum(mu * mu, axis=-1)
            out += amp * gaussian_integral(A1 + np.conj(q.a), B1 + np.conj(B2),
                                           C1 + np.conj(C2), d)
    return out


def stft_closed_form(f: Signal, g: Window, z: PhasePoint) -> complex:
    """``V_g f(z) = <f, pi(z) g>`` evaluated exactly."""
    return inner_product(f, time_frequency_shift(g, z))


def dilated_gaussian_stft(lam: float, z: PhasePoint) -> complex:
    """STFT of ``exp(-pi lam^2 t^2)`` against ``exp(-pi t^2)``, written out explicitly."""
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    x, w = np.array(z.x), np.array(z.omega)
    s = 1.0 + lam * lam
    return complex(
        s ** (-z.d / 2)
        * np.exp(-2j * PI * float(x @ w) / s)
        * np.exp(-PI * lam * lam * float(x @ x) / s)
        * np.exp(-PI * float(w @ w) / s)
    )


def _term_envelopes(f: GaussianMixture, g: GaussianMixture):
    """Gaussian bounds on ``|V_q p|`` for every term pair, in time and in frequency.

    Time side uses ``|V_g f(x,w)| <= int |p(t)||q(t-x)| dt``; frequency side
    the same bound applied to the Fourier transforms.
    """
    d = f.d
    rows = []
    for p in f.terms:
        for q in g.terms:
            ap, aq = p.a.real, q.a.real
            s = ap + aq
            amp_t = abs(p.c) * abs(q.c) * s ** (-d / 2)
            bp, bq = (1 / p.a).real, (1 / q.a).real
            sb = bp + bq
            amp_w = abs(p.c) * abs(q.c) * abs(p.a * q.a) ** (-d / 2) * sb ** (-d / 2)
            rows.append((
                amp_t, ap * aq / s, np.subtract(p.mu, q.mu),
                amp_w, bp * bq / sb, np.subtract(p.nu, q.nu),
            ))
    return rows


def envelope_x(f: Signal, g: Window, x) -> np.ndarray:
    """Upper bound on ``sup_w |V_g f(x, w)|``."""
    f, g = as_mixture(f), as_mixture(g)
    x = points_array(x, f.d)
    out = np.zeros(x.shape[:-1])
    for amp, rate, shift, *_ in _term_envelopes(f, g):
        diff = x - shift
        out += amp * np.exp(-PI * rate * np.sum(diff * diff, axis=-1))
    return out


def envelope_omega(f: Signal, g: Window, omega) -> np.ndarray:
    """Upper bound on ``sup_x |V_g f(x, w)|``."""
    f, g = as_mixture(f), as_mixture(g)
    omega = points_array(omega, f.d)
    out = np.zeros(omega.shape[:-1])
    for *_, amp, rate, shift in _term_envelopes(f, g):
        diff = omega - shift
        out += amp * np.exp(-PI * rate * np.sum(diff * diff, axis=-1))
    return out


def _radius_beyond(amp: float, rate: float, offset: float, eps: float) -> float:
    """Smallest r with ``amp*exp(-pi*rate*(r - offset)^2) <= eps`` for all larger r."""
    if amp <= eps:
        return 0.0
    return offset + math.sqrt(math.log(amp / eps) / (PI * rate))


def x_truncation(f: Signal, g: Window, eps: float) -> float:
    """``x_max`` such that ``envelope_x(f, g, x) < eps`` whenever ``|x| > x_max``."""
    f, g = as_mixture(f), as_mixture(g)
    rows = _term_envelopes(f, g)
    if not rows:
        return 0.0
    share = eps / len(rows)
    return max(_radius_beyond(a, r, float(np.linalg.norm(s)), share) for a, r, s, *_ in rows)


def omega_truncation(f: Signal, g: Window, eps: float) -> float:
    f, g = as_mixture(f), as_mixture(g)
    rows = _term_envelopes(f, g)
    if not rows:
        return 0.0
    share = eps / len(rows)
    return max(_radius_beyond(a, r, float(np.linalg.norm(s)), share) for *_, a, r, s in rows)


def decay_radius(f: Signal, g: Window, eps: float) -> float:
    """``R(eps)`` with ``|V_g f(z)| <= eps`` whenever ``|z| >= R(eps)``.

    On ``|z| >= R`` either ``|x|`` or ``|w|`` is at least ``R/sqrt(2)``.
    """
    return math.sqrt(2.0) * max(x_truncation(f, g, eps), omega_truncation(f, g, eps))


def oscillation_bound(f: Signal, g: Window, z: PhasePoint, halfwidth: float) -> float:
    """Crude bound on the local frequency of the STFT integrand over a window of given half-width."""
    f, g = as_mixture(f), as_mixture(g)
    rate = float(np.linalg.norm(z.omega))
    for term in f.terms + g.terms:
        rate += float(np.linalg.norm(term.nu)) + abs(term.a.imag) * (
            halfwidth + float(np.linalg.norm(term.mu)) + float(np.linalg.norm(z.x)))
    return rate


def stft_quadrature(f: Union[Signal, SampledSignal], g: Window, z: PhasePoint,
                    tol: float = DEFAULT_TOL, contour: str = "real") -> complex:
    """STFT from the defining integral.

    Sampled signals use the dt-weighted Riemann sum.  Mixtures (d = 1) go
    through adaptive quadrature, with ``tol`` an absolute tolerance on the
    real line (``contour="real"``).

    ``contour="saddle"`` integrates each term pair separately along a
    horizontal line ``t + i*eta``, with ``eta`` found numerically by
    minimising the peak of the integrand on the line.  The value is the same
    by Cauchy's theorem but the oscillatory cancellation is gone, so tiny
    STFT values keep their relative accuracy; ``tol`` is then relative to
    each term's integrand mass.
    """
    if isinstance(f, SampledSignal):
        if z.d != 1:
            raise ValueError("sampled signals are one-dimensional")
        x, w = z.x[0], z.omega[0]
        t = f.times
        kernel = np.exp(-2j * PI * t * w) * np.conj(evaluate(g, t - x))
        return complex(f.dt * np.sum(f.samples * kernel))

    f, gm = as_mixture(f), as_mixture(g)
    if f.d != 1:
        raise ValueError("quadrature STFT is implemented for d = 1")
    if contour not in ("real", "saddle"):
        raise ValueError(f"unknown contour {contour!r}")
    if not f.terms or not gm.terms:
        return 0j
    if contour == "real":
        return _stft_line(f, gm, z, tol)
    return sum((_stft_saddle(GaussianMixture([p]), GaussianMixture([q]), z, tol)
                for p in f.terms for q in gm.terms), 0j)


def _integrand(f: GaussianMixture, g: GaussianMixture, z: PhasePoint):
    x, w = z.x[0], z.omega[0]
    gbar = conjugate(g)  # entire extension of t -> conj(g(t))

    def integrand(t):
        return np.exp(-2j * PI * t * w) * evaluate(f, t) * evaluate(gbar, t - x)
    return integrand


def _support(f: GaussianMixture, g: GaussianMixture, x: float):
    """Centre cluster, decay scale and amplitude bound of the integrand on R."""
    centers, amp, rate = [], 0.0, math.inf
    for p in f.terms:
        for q in g.terms:
            ap, aq = p.a.real, q.a.real
            s = ap + aq
            centers.append((ap * p.mu[0] + aq * (q.mu[0] + x)) / s)
            amp += abs(p.c) * abs(q.c)
            rate = min(rate, s)
    return min(centers), max(centers), 1.0 / math.sqrt(rate), amp


def _stft_line(f, g, z, tol):
    lo, hi, scale, amp = _support(f, g, z.x[0])
    spread = 0.5 * (hi - lo)
    omega_max = oscillation_bound(f, g, z, spread + 10 * scale)
    res = integrate(_integrand(f, g, z), 0.5 * (lo + hi), scale, tol, amplitude=amp,
                    spread=spread, omega_max=omega_max)
    return res.value


def _golden_min(fun, lo: float, hi: float, xtol: float) -> float:
    inv = (math.sqrt(5) - 1) / 2
    c, d = hi - inv * (hi - lo), lo + inv * (hi - lo)
    fc, fd = fun(c), fun(d)
    while hi - lo > xtol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - inv * (hi - lo)
            fc = fun(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv * (hi - lo)
            fd = fun(d)
    return 0.5 * (lo + hi)


def _stft_saddle(f, g, z, tol):
    integrand = _integrand(f, g, z)
    lo, hi, scale, _ = _support(f, g, z.x[0])
    freq = oscillation_bound(f, g, z, 0.5 * (hi - lo) + 10 * scale)
    reach = freq * scale * scale + 1.0
    t = np.linspace(lo - 8 * scale - 2 * reach, hi + 8 * scale + 2 * reach, 4001)

    def log_peak(eta):
        with np.errstate(divide="ignore"):
            return float(np.max(np.log(np.abs(integrand(t + 1j * eta)))))

    eta = _golden_min(log_peak, -reach, reach, 1e-6 * scale)
    vals = np.abs(integrand(t + 1j * eta))
    k = int(np.argmax(vals))
    peak = float(vals[k])
    if peak == 0.0:
        return 0j
    # |integrand| on the line is a Gaussian of rate >= 1/scale^2 around t[k]
    amp = 2.0 * peak
    res = integrate(integrand, float(t[k]), scale, tol * peak * scale, amplitude=amp, eta=eta)
    return res.value


@dataclass(frozen=True)
class STFTGrid:
    x_axis: np.ndarray
    omega_axis: np.ndarray
    values: np.ndarray  # shape (len(x_axis), len(omega_axis))

    def __post_init__(self):
        if self.values.shape != (len(self.x_axis), len(self.omega_axis)):
            raise ValueError(
                f"values shape {self.values.shape} does not match axes "
                f"({len(self.x_axis)}, {len(self.omega_axis)})")

    def moyal_sum(self) -> float:
        """``dx*dw*sum |V|^2``, the discrete counterpart of ``(||f|| ||g||)^2``."""
        dx = _uniform_step(self.x_axis)
        dw = _uniform_step(self.omega_axis)
        return float(dx * dw * np.sum(np.abs(self.values) ** 2))

    def nearest(self, z: PhasePoint) -> complex:
        i = int(np.argmin(np.abs(self.x_axis - z.x[0])))
        j = int(np.argmin(np.abs(self.omega_axis - z.omega[0])))
        return complex(self.values[i, j])

    def write_csv(self, fh) -> None:
        """Rows ``x,omega,re,im,abs``, x-major."""
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "omega", "re", "im", "abs"])
        for i, x in enumerate(self.x_axis):
            for j, w in enumerate(self.omega_axis):
                v = self.values[i, j]
                writer.writerow([_fmt(x), _fmt(w), _fmt(v.real), _fmt(v.imag), _fmt(abs(v))])


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _uniform_step(axis: np.ndarray) -> float:
    axis = np.asarray(axis, dtype=float)
    if axis.size < 2:
        raise ValueError("axis needs at least two points")
    steps = np.diff(axis)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
        raise ValueError("axis is not uniform")
    return float(steps[0])


class IncompatibleAxisError(ValueError):
    pass


def frequency_step(signal: SampledSignal, oversample: int = 4) -> float:
    """Spacing of the FFT frequency grid for ``signal`` zero-padded ``oversample`` times."""
    return 1.0 / (oversample * signal.n * signal.dt)


def admissible_omegas(signal: SampledSignal, oversample: int = 4) -> np.ndarray:
    m = oversample * signal.n
    return np.arange(-(m // 2), m - m // 2) * frequency_step(signal, oversample)


def stft_grid(f: SampledSignal, g: GeneralizedGaussian, x_axis, omega_axis,
              oversample: int = 4) -> STFTGrid:
    """FFT-based STFT of a sampled signal on a rectangular grid.

    Each row multiplies the samples by the conjugated, analytically
    evaluated window and takes a zero-padded DFT scaled by ``dt``; every
    entry of ``omega_axis`` must be an integer multiple of
    :func:`frequency_step` below the Nyquist limit.
    """
    if oversample < 4:
        raise ValueError("oversample must be at least 4")
    x_axis = np.asarray(x_axis, dtype=float)
    omega_axis = np.asarray(omega_axis, dtype=float)
    m = oversample * f.n
    dw = frequency_step(f, oversample)
    k = np.rint(omega_axis / dw)
    if not np.allclose(k * dw, omega_axis, rtol=0, atol=1e-9 * dw) or np.any(np.abs(k) >= m // 2):
        raise IncompatibleAxisError(
            f"omega_axis must lie on the grid k*{dw!r} with |k| < {m // 2} "
            f"(n={f.n}, dt={f.dt}, oversample={oversample})")
    k = k.astype(int) % m
    t = f.times
    window = np.conj(evaluate(g, t[None, :] - x_axis[:, None]))
    spectra = np.fft.fft(f.samples[None, :] * window, n=m, axis=1)[:, k]
    # sum_n h_n exp(-2 pi i (t0 + n dt) w) = exp(-2 pi i t0 w) * DFT_k
    values = f.dt * np.exp(-2j * PI * f.t0 * omega_axis)[None, :] * spectra
    return STFTGrid(x_axis, omega_axis, values)


def stft(f: Signal, z: PhasePoint, g: Window | None = None) -> complex:
    """Closed-form STFT with the standard window by default."""
    return stft_closed_form(f, standard_window(as_mixture(f).d) if g is None else g, z)
