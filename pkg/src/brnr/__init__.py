"""Unramified Brauer group and degree-three obstructions for p-group central extensions."""

from .errors import BrnrError, BudgetExceeded, ParseError, PipelineInvariantError, ValidationError
from .extalg import MultiVector, pairing, parse_multivector, partial_decomposability_witness, wedge
from .fflin import PrimeField, Subspace, annihilator, kernel, rref, span
from .groupspec import CentralExtensionSpec, build_gamma, builtin, extraspecial, parse_presentation
from .obstr import ObstructionReport, report

__version__ = "0.1.0"

__all__ = [
    "BrnrError", "BudgetExceeded", "ParseError", "PipelineInvariantError", "ValidationError",
    "MultiVector", "pairing", "parse_multivector", "partial_decomposability_witness", "wedge",
    "PrimeField", "Subspace", "annihilator", "kernel", "rref", "span",
    "CentralExtensionSpec", "build_gamma", "builtin", "extraspecial", "parse_presentation",
    "ObstructionReport", "report",
]
