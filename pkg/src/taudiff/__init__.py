"""Exact differential algebra over differential fields.

Computes modules of twisted differentials, prolongations, tangent
varieties and prolongation cones for finitely presented algebras over
Q(e1,...,em), entirely in exact arithmetic, and verifies the structural
identities (exact sequences, torsor laws, localization, base change) on
concrete presentations.
"""

from . import errors
from .forms import (
    DerivationSpec,
    KernelBasis,
    ModulePresentation,
    TauForm,
    base_change_iso,
    commutator,
    delta_tilde,
    derivation_from_hom,
    first_tau_sequence,
    iota,
    is_tau_derivation,
    kernel_basis,
    lambda_proj,
    omega_kahler_presentation,
    omega_tau_presentation,
    split_section_search,
    tau_basis_check,
    tau_in_localization,
    tau_of,
)
from .geometry import (
    ConeAlgebra,
    FiberPoint,
    RingMap,
    SlicedVariety,
    lift_morphism,
    point_on,
    prolongation,
    prolongation_cone,
    tangent_variety,
    torsor_act,
)
from .ideal import (
    PresentedAlgebra,
    QuotientMatrix,
    generic_rank,
    groebner_basis,
    jacobian_smooth_check,
    normal_form,
)
from .poly import Poly, RingCtx, coeff_derivation, evaluate, partial_derivative, poly_arith
from .scalar import BaseField, FieldElem, QPoly, Rat, fe_arith, fe_derive
from .textio import load_problem, load_problem_file, parse_poly, print_presentation

__all__ = [
    "errors",
    "Rat",
    "QPoly",
    "FieldElem",
    "BaseField",
    "fe_arith",
    "fe_derive",
    "RingCtx",
    "Poly",
    "poly_arith",
    "partial_derivative",
    "coeff_derivation",
    "evaluate",
    "PresentedAlgebra",
    "QuotientMatrix",
    "groebner_basis",
    "normal_form",
    "generic_rank",
    "jacobian_smooth_check",
    "TauForm",
    "ModulePresentation",
    "DerivationSpec",
    "KernelBasis",
    "tau_of",
    "iota",
    "lambda_proj",
    "delta_tilde",
    "kernel_basis",
    "omega_tau_presentation",
    "omega_kahler_presentation",
    "first_tau_sequence",
    "tau_in_localization",
    "base_change_iso",
    "commutator",
    "is_tau_derivation",
    "derivation_from_hom",
    "tau_basis_check",
    "split_section_search",
    "ConeAlgebra",
    "SlicedVariety",
    "FiberPoint",
    "RingMap",
    "prolongation_cone",
    "prolongation",
    "tangent_variety",
    "lift_morphism",
    "torsor_act",
    "point_on",
    "load_problem",
    "load_problem_file",
    "parse_poly",
    "print_presentation",
]

__version__ = "0.1.0"
