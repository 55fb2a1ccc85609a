"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class PreconditionError(ValueError):
    """A documented precondition does not hold.

    ``witness`` carries whatever is needed to replay the failure.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InconclusiveError(RuntimeError):
    """A finite window is too small to decide the question asked."""


class OracleError(RuntimeError):
    """Transport failure while talking to an external segment oracle."""


class OrderExtractionError(ValueError):
    """Segments from a base point do not induce a strict total order.

    ``pair`` holds the offending integers (two for an asymmetry or totality
    failure, three for a transitivity cycle).
    """

    def __init__(self, message: str, pair: tuple):
        super().__init__(message)
        self.pair = pair


class OrderConflictError(ValueError):
    """Induced orders at two base points disagree; ``witness`` is ``(p, q, A, B)``."""

    def __init__(self, message: str, witness: tuple):
        super().__init__(message)
        self.witness = witness
