"""Exact straightening, Hecke operators and spherical-function modules for
Hermitian, symmetric and alternating forms."""

from .coeff import CaseConfig, Scalar, format_scalar, parse_scalar
from .typmon import Element, OrbitCombination, OrbitType

__all__ = [
    "CaseConfig",
    "Element",
    "OrbitCombination",
    "OrbitType",
    "Scalar",
    "format_scalar",
    "parse_scalar",
]
