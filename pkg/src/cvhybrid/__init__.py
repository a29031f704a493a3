"""Gaussian simulation of squeezed cylindrically polarized modes and their
polarization, spatial and hybrid entanglement."""

from .exceptions import InvalidArgument, TruncationNotConverged, Unsupported
from .gaussian_core import (
    GaussianState,
    SymplecticTransform,
    apply_mode_unitary,
    attenuate,
    displace,
    is_physical,
    squeeze,
    two_mode_squeeze,
    vacuum,
)

__version__ = "0.1.0"

__all__ = [
    "GaussianState",
    "InvalidArgument",
    "SymplecticTransform",
    "TruncationNotConverged",
    "Unsupported",
    "apply_mode_unitary",
    "attenuate",
    "displace",
    "is_physical",
    "squeeze",
    "two_mode_squeeze",
    "vacuum",
]
