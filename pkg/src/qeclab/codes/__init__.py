"""Stabilizer and subsystem codes: containers, constructions, catalogue, analysis."""

from .catalogue import FAMILIES, PUBLISHED, build_named_code
from .code import StabilizerCode
from .construct import (
    ClassicalCode,
    ConstructionError,
    complete_logicals,
    concatenate,
    css_from_classical,
    derive_center,
    symplectic_complement,
    trivial_code,
)
from .distance import DistanceCapExceeded, distance, minimum_weight_logical
from .io import format_code, parse_code
from .validate import ValidationReport, Violation, validate_code

__all__ = [
    "FAMILIES",
    "PUBLISHED",
    "build_named_code",
    "StabilizerCode",
    "ClassicalCode",
    "ConstructionError",
    "complete_logicals",
    "concatenate",
    "css_from_classical",
    "derive_center",
    "symplectic_complement",
    "trivial_code",
    "DistanceCapExceeded",
    "distance",
    "minimum_weight_logical",
    "format_code",
    "parse_code",
    "ValidationReport",
    "Violation",
    "validate_code",
]
