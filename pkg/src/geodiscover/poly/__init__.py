"""Exact polynomial arithmetic and Groebner bases."""

from .groebner import (
    Deadline,
    Membership,
    TermOrder,
    TimedOut,
    UnitCheck,
    contains_one,
    groebner_basis,
    normal_form,
    s_polynomial,
    unit_check,
)
from .polynomial import Monomial, Polynomial, Variable

__all__ = [
    "Deadline",
    "Membership",
    "Monomial",
    "Polynomial",
    "TermOrder",
    "TimedOut",
    "UnitCheck",
    "Variable",
    "contains_one",
    "groebner_basis",
    "normal_form",
    "s_polynomial",
    "unit_check",
]
