"""Shared exception types."""


class WellDefinednessError(ValueError):
    """An operator does not preserve the relation subspace of a quotient.

    Raised when a map fails to descend; carries the offending relation
    vector so the failure is reproducible.
    """

    def __init__(self, message, vector=None):
        super().__init__(message)
        self.vector = vector


class RelationViolation(RuntimeError):
    """A structural identity that must hold by construction failed.

    This signals corrupted instance data, not a mathematical surprise; the
    message names the identity and a basis vector witnessing the failure.
    """


class NotSemisimple(ValueError):
    """The automorphism has no eigenbasis over the ground field."""


class NotSaYD(ValueError):
    """The coefficients are not a stable anti Yetter-Drinfeld module."""


class NotAGroup(ValueError):
    """A multiplication table does not define a group."""


class NotAChainMapOnHomology(ValueError):
    """An operator does not preserve cycles and boundaries."""


class DegreeError(ValueError):
    """Operator requested outside its valid degree range."""
