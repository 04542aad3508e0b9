"""Numerical toolkit for Gaussian-window time-frequency uncertainty bounds."""

__version__ = "0.1.0"

from .bargmann import (
    ComplexPoint,
    TruncationWarning,
    bargmann,
    boundary_max_diagnostic,
    fock_norm,
    phi_transform,
    verify_bargmann_relation,
    verify_phi_identity,
)
from .core import (
    GaussianMixture,
    GeneralizedGaussian,
    PhasePoint,
    SampledSignal,
    dilated_gaussian,
    evaluate,
    inner_product,
    l2_norm,
    standard_window,
    time_frequency_shift,
)
from .hrt import ShiftSystem, certify_independence, fat_tail_scan, gram_matrix
from .quadrature import QuadratureError, integrate, integrate_nd
from .stft import (
    STFTGrid,
    dilated_gaussian_stft,
    stft,
    stft_closed_form,
    stft_grid,
    stft_quadrature,
    stft_values,
)
from .symplectic import Rotation, fourier_transform, frft, rotate, verify_covariance
from .uncertainty import (
    bound_cylinder,
    bound_sphere,
    cylinder_sup,
    sharpness_sweep,
    sphere_sup,
    verify_theorem,
)
