"""Crystals, global bases and dual perfect bases for quantum generalized Kac-Moody algebras.

Everything is exact: scalars live in Q(q), and modules are modelled weight
space by weight space up to a chosen depth.
"""

from .cartan import CartanDatum, named
from .crystal import AbstractCrystal, check_crystal_axioms, check_morphism, find_isomorphism, is_isomorphism
from .dualperfect import PreDualPerfectSpace, extract_graph, verify_dual_perfect
from .globalbasis import global_basis
from .halfalg import HalfAlgebra
from .kashiwara import generate_crystal
from .module import HWModule
from .scalars import Scalar, parse_scalar

__all__ = [
    "AbstractCrystal",
    "CartanDatum",
    "HWModule",
    "HalfAlgebra",
    "PreDualPerfectSpace",
    "Scalar",
    "check_crystal_axioms",
    "check_morphism",
    "extract_graph",
    "find_isomorphism",
    "generate_crystal",
    "global_basis",
    "is_isomorphism",
    "named",
    "parse_scalar",
    "verify_dual_perfect",
]
