"""Solitary waves of the rotation-Camassa-Holm equation.

Exact model constants, phase-plane analysis, wave profiles, conserved
quantities and the stability checks (d'' by two routes, an exact positivity
certificate for N and the spectrum of the linearised operator).
"""

__version__ = "0.1.0"

from .model import ModelError, ModelParams, amplitude, params_from_c, params_from_omega, regime_classify  # noqa: E402

__all__ = [
    "__version__",
    "ModelError",
    "ModelParams",
    "amplitude",
    "params_from_c",
    "params_from_omega",
    "regime_classify",
]
