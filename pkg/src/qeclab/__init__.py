"""Stabilizer-code laboratory: Pauli algebra, codes, noise, decoders and Monte Carlo."""

from .pauli import PauliOp, commutes, format_pauli, parse_pauli, pauli_mul, weight
from .tableau import Tableau

__version__ = "0.1.0"

__all__ = ["PauliOp", "commutes", "format_pauli", "parse_pauli", "pauli_mul", "weight", "Tableau", "__version__"]
