"""Finite inverse semigroups, their character spaces and universal étale
groupoids, algebraic morphisms, and reconstruction from bisections."""

from .algebra import InverseSemigroup, SemigroupHom, Semilattice, validate_inverse_semigroup
from .errors import GermoidError, ValidationError
from .germ import GermGroupoid, canonical_embedding, germ_groupoid, universal_groupoid
from .groupoid import EtaleGroupoid, GroupoidAction, enumerate_bisections, groupoid_isomorphic
from .isaction import SemigroupAction, canonical_action, terminal_map
from .morphism import AlgebraicMorphism, compose_morphisms, validate_morphism
from .reconstruct import reconstruct_from_bisections
from .topspace import FiniteSpace, enumerate_characters

__all__ = [
    "InverseSemigroup",
    "SemigroupHom",
    "Semilattice",
    "validate_inverse_semigroup",
    "GermoidError",
    "ValidationError",
    "GermGroupoid",
    "canonical_embedding",
    "germ_groupoid",
    "universal_groupoid",
    "EtaleGroupoid",
    "GroupoidAction",
    "enumerate_bisections",
    "groupoid_isomorphic",
    "SemigroupAction",
    "canonical_action",
    "terminal_map",
    "AlgebraicMorphism",
    "compose_morphisms",
    "validate_morphism",
    "reconstruct_from_bisections",
    "FiniteSpace",
    "enumerate_characters",
]
