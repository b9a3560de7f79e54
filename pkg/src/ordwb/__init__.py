"""ordwb: a workbench for computable ordinal notation systems.

Term grammar, normal forms, total comparison, per-system validity, support
and hull calculus, finite-function calculus, Mostowski collapsing, and an
empirical harness that checks linearity and well-founded descent at desk
scale.
"""

from .terms import parse, render, length, add, natural_sum, veblen, theta
from .order import compare, cmp, LESS, EQUAL, GREATER
from .systems import (
    BH,
    PI3,
    PI11,
    STAB,
    Budget,
    SystemId,
    Verdict,
    enumerate_terms,
    parse_system,
    pi_n,
    validate,
)

__all__ = [
    "parse",
    "render",
    "length",
    "add",
    "natural_sum",
    "veblen",
    "theta",
    "compare",
    "cmp",
    "LESS",
    "EQUAL",
    "GREATER",
    "BH",
    "PI3",
    "PI11",
    "STAB",
    "Budget",
    "SystemId",
    "Verdict",
    "enumerate_terms",
    "parse_system",
    "pi_n",
    "validate",
]
