"""Phaseless STFT sampling on square-root lattices."""

from phaseless._core import (
    NumericError,
    PreconditionError,
    Signal,
    Window,
    __version__,
    fit_from_samples,
    frft,
    gaussian_alpha_max,
    hermite_signal,
    phase_align,
    reconstruct,
    rect_lattice,
    sample_phaseless,
    shear_admissible_root,
    stft_point,
)

__all__ = [
    "NumericError",
    "PreconditionError",
    "Signal",
    "Window",
    "__version__",
    "fit_from_samples",
    "frft",
    "gaussian_alpha_max",
    "hermite_signal",
    "phase_align",
    "reconstruct",
    "rect_lattice",
    "sample_phaseless",
    "shear_admissible_root",
    "stft_point",
]
