"""Exception hierarchy.

Every error carries the offending elements in ``witness`` so callers can
report them without parsing messages.
"""

from __future__ import annotations


class GermoidError(Exception):
    def __init__(self, *witness, message: str | None = None):
        self.witness = witness
        if message is None:
            message = f"{type(self).__name__}{witness!r}" if witness else type(self).__name__
        super().__init__(message)


class ValidationError(GermoidError):
    pass


# algebra
class MalformedTable(ValidationError):
    pass


class NotAssociative(ValidationError):
    pass


class NotInverse(ValidationError):
    pass


class IdempotentsDontCommute(ValidationError):
    pass


class BadZero(ValidationError):
    pass


class BadUnit(ValidationError):
    pass


class NotMultiplicative(ValidationError):
    pass


class ZeroNotPreserved(ValidationError):
    pass


class UnitNotPreserved(ValidationError):
    pass


# topspace
class NotClosedUnderUnion(ValidationError):
    pass


class NotClosedUnderIntersection(ValidationError):
    pass


class MissingEmptyOrFull(ValidationError):
    pass


class ZeroHasNoCharacter(ValidationError):
    pass


class NotOpen(ValidationError):
    pass


class NotIdeal(ValidationError):
    pass


class NotContinuous(ValidationError):
    pass


class NotPartialHomeomorphism(ValidationError):
    pass


# isaction
class NotHomomorphic(ValidationError):
    pass


class UnitNotIdentity(ValidationError):
    pass


class ZeroNotEmpty(ValidationError):
    pass


class DomainNotOpen(ValidationError):
    pass


class SearchSpaceTooLarge(GermoidError):
    pass


# groupoid
class NotComposable(GermoidError):
    pass


class BadUnits(ValidationError):
    pass


class BadInverse(ValidationError):
    pass


class UnitsNotOpen(ValidationError):
    pass


class NotEtale(ValidationError):
    pass


class NotInvariant(ValidationError):
    pass


class BadAction(ValidationError):
    pass


class TooLarge(SearchSpaceTooLarge):
    pass


# germ
class WellDefinednessViolation(GermoidError):
    pass


class NotInjective(GermoidError):
    pass


# morphism
class DoesNotCommute(ValidationError):
    pass


class NotFunctor(ValidationError):
    pass


class NotT0(ValidationError):
    pass


# reconstruct
class NotSubsemigroup(ValidationError):
    pass


class HypothesisFailed(GermoidError):
    pass


class NotBasis(ValidationError):
    pass


class NotACharacter(GermoidError):
    pass


class NotSober(ValidationError):
    pass


# cli
class ParseError(GermoidError):
    pass


class SchemaError(GermoidError):
    pass
