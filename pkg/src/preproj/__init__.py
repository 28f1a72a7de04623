"""Preprojective algebras of generalized Dynkin type over exact fields."""

from .field import FieldSpec, Scalar, GF, QQ, half, parse_field
from .quiver import Quiver, DynkinType, build_dynkin_quiver, exceptional_vertex
from .freealg import FreeElem, NCPoly, parse_element, format_element
from .quotient import Presentation, QuotientAlgebra, build_quotient, normal_form

__version__ = "0.1.0"

from .presentations import (
    preprojective, canonical_star, deformed, L_algebra, socle_deformed_generic,
    second_presentation, theta_collapse,
)
from .morphisms import AlgebraMorphism, catalog_pair, verify_mutually_inverse, is_isomorphism
from .structure import socle, nakayama_permutation, symmetry_decide, invariant_report
