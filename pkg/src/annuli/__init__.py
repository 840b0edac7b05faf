"""Numerical value-distribution theory on annuli ``A(R0) = {1/R0 < |z| < R0}``."""

from __future__ import annotations

from .annulus import Annulus, Divisor, ExceptionalSet, RadiusGrid, delta_weight, jensen_weight
from .errors import (
    AnnuliError,
    BoundaryProximityError,
    ConfigError,
    DomainError,
    UnresolvedBoxError,
    UnsupportedFunctionError,
)
from .functions import POLE, CurveModel, FunctionModel, compose_exp, make_rational, weierstrass_p
from .lemmas import BoundReport, admissibility_index, borel_check, logderiv_check, logderiv_curve_check
from .locator import LocatedDivisor, LogPolarBox, counting_sequence, locate_divisor, winding_count
from .nevanlinna import (
    NevanlinnaProfile,
    TargetForm,
    characteristic_area,
    characteristic_T0,
    counting_N0,
    curve_proximity,
    fmt_residual,
    green_jensen_check,
    nevanlinna_profile,
    proximity_m0,
)
from .smt import SmtReport, residual_gap, smt_scan
from .zoo import parse_function

__version__ = "0.1.0"

__all__ = [
    "Annulus", "RadiusGrid", "Divisor", "ExceptionalSet", "jensen_weight", "delta_weight",
    "FunctionModel", "CurveModel", "POLE", "make_rational", "compose_exp", "weierstrass_p", "parse_function",
    "LogPolarBox", "LocatedDivisor", "winding_count", "locate_divisor", "counting_sequence",
    "TargetForm", "NevanlinnaProfile", "proximity_m0", "counting_N0", "characteristic_T0",
    "characteristic_area", "curve_proximity", "green_jensen_check", "fmt_residual", "nevanlinna_profile",
    "BoundReport", "borel_check", "logderiv_check", "logderiv_curve_check", "admissibility_index",
    "SmtReport", "smt_scan", "residual_gap",
    "AnnuliError", "DomainError", "UnsupportedFunctionError", "BoundaryProximityError",
    "UnresolvedBoxError", "ConfigError",
]
