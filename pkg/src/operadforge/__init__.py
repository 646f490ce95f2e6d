"""Exact computations with binary quadratic operads and commutative algebras."""

from __future__ import annotations

from .dsl import (
    AlgebraPresentation,
    DSLSyntaxError,
    OperadPresentation,
    PresentationError,
    format_algebra,
    format_operad,
    parse_algebra_presentation,
    parse_operad_presentation,
)
from .engine import character, check_morphism, component_dimension, dimensions, expand_ideal, in_ideal
from .groebner import algebra_dimension, buchberger, check_substitution_iso
from .koszul import koszulness_series_test, quadratic_dual, same_relations, subspace_equal
from .presets import operad, preset
from .species import species_compose_dims, xi_check

__version__ = "0.1.0"

__all__ = [
    "AlgebraPresentation",
    "DSLSyntaxError",
    "OperadPresentation",
    "PresentationError",
    "algebra_dimension",
    "buchberger",
    "character",
    "check_morphism",
    "check_substitution_iso",
    "component_dimension",
    "dimensions",
    "expand_ideal",
    "format_algebra",
    "format_operad",
    "in_ideal",
    "koszulness_series_test",
    "operad",
    "parse_algebra_presentation",
    "parse_operad_presentation",
    "preset",
    "quadratic_dual",
    "same_relations",
    "species_compose_dims",
    "subspace_equal",
    "xi_check",
]
