"""Automated discovery of elementary facts about ruler-and-compass constructions."""

from .construction import Construction, ConstructionError, build, point, validate
from .engine import AbortedUndecidableIdentity, DiscoveryReport, Options, discover, is_trivial
from .numeric import DegenerateInstance, NumericConfig, instantiate
from .parser import ParseError, parse, unparse
from .pool import Pool
from .predicates import Predicate, collinear, concyclic, congruent, identical, parallel
from .prover import Verdict, VerdictKind, decide, translate
from .report import render_json, render_svg, render_text

__version__ = "0.1.0"

__all__ = [
    "AbortedUndecidableIdentity",
    "Construction",
    "ConstructionError",
    "DegenerateInstance",
    "DiscoveryReport",
    "NumericConfig",
    "Options",
    "ParseError",
    "Pool",
    "Predicate",
    "Verdict",
    "VerdictKind",
    "build",
    "collinear",
    "concyclic",
    "congruent",
    "decide",
    "discover",
    "identical",
    "instantiate",
    "is_trivial",
    "parallel",
    "parse",
    "point",
    "render_json",
    "render_svg",
    "render_text",
    "translate",
    "unparse",
    "validate",
]
