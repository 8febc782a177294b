"""Exception hierarchy."""


class BellQuantError(Exception):
    """Base class for all package errors."""


class ContractViolation(BellQuantError, ValueError):
    """An input does not satisfy the documented preconditions."""


class InvalidStateError(BellQuantError, ValueError):
    """A state vector cannot be normalized (e.g. the zero vector)."""


class DegenerateInputError(BellQuantError, ValueError):
    """The input is valid but degenerate for the requested construction."""


class NumericalFailure(BellQuantError, RuntimeError):
    """A numerical routine failed to converge or broke an internal invariant."""
