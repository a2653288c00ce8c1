"""Ladder operators ``P`` (second-order differential) and ``M`` (first-order
integral) with ``[P, M] = 1``, their Laguerre-type eigenfunctions, and the
umbral transfer of power-series solutions to integro-differential equations.
"""
from .errors import (DomainError, InvalidParameterError, QuadratureError, SingularPointError,
                     TruncationError, TruncationWarning, UmbralError)
from .ladder import LadderState, apply_m, apply_number, apply_p, closed_form_coeffs, monomial
from .profiles import Basis, Flavor, YProfile, make_custom, make_operators, make_power_law

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "DomainError",
    "Flavor",
    "InvalidParameterError",
    "LadderState",
    "QuadratureError",
    "SingularPointError",
    "TruncationError",
    "TruncationWarning",
    "UmbralError",
    "YProfile",
    "apply_m",
    "apply_number",
    "apply_p",
    "closed_form_coeffs",
    "make_custom",
    "make_operators",
    "make_power_law",
    "monomial",
]
