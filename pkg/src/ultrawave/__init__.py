"""Exact finite-scale computations for wave equations over the p-adic numbers."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .fourier import fourier, inverse_fourier
from .local_field import PAdicRational
from .radon import RadonTable, radon_forward, radon_inverse
from .schwartz import TestFunction, random_test_function
from .vladimirov import EigenProfile, SampledField, apply_D_alpha, apply_D_alpha_n, apply_spectral
from .waves import PlaneWaveSpec, SpaceTimeField, wave_residual

__all__ = [
    "BACKEND", "EigenProfile", "PAdicRational", "PlaneWaveSpec", "RadonTable", "SampledField",
    "SpaceTimeField", "TestFunction", "apply_D_alpha", "apply_D_alpha_n", "apply_spectral",
    "fourier", "inverse_fourier", "radon_forward", "radon_inverse", "random_test_function",
    "wave_residual",
]
