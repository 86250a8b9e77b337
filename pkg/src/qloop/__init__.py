"""Exact-arithmetic workbench for quantum loop algebras of simply-laced type."""

from .scalar import Q, Fraction, LaurentPoly, RationalFunction, qbinom, qint, specialize
from .root_data import DynkinDiagram, RootVector, Weight, diagram_from_json, type_a, type_d, type_e
from .algebra import AlgebraElement, Gen, TensorExpression, coproduct, tau, verify_relations
from .repmod import (
    DrinfeldPolynomialSet,
    ModuleRealization,
    drinfeld_polynomials,
    evaluation_module,
    tensor,
    trivial_module,
    with_overrides,
)

__all__ = [
    "AlgebraElement",
    "DrinfeldPolynomialSet",
    "DynkinDiagram",
    "Fraction",
    "Gen",
    "LaurentPoly",
    "ModuleRealization",
    "Q",
    "RationalFunction",
    "RootVector",
    "TensorExpression",
    "Weight",
    "coproduct",
    "diagram_from_json",
    "drinfeld_polynomials",
    "evaluation_module",
    "qbinom",
    "qint",
    "specialize",
    "tau",
    "tensor",
    "trivial_module",
    "type_a",
    "type_d",
    "type_e",
    "verify_relations",
    "with_overrides",
]

__version__ = "0.1.0"
