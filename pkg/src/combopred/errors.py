"""Exception types shared across the package."""

from __future__ import annotations


class EnumerationLimitError(ValueError):
    """A combinatorial enumeration would exceed the configured vertex cap."""


class EmptyActionSetError(ValueError):
    """A generator produced no action vectors (e.g. a DAG without s-t paths)."""


class StepInfeasibleError(RuntimeError):
    """The dual update left the range of the mirror map.

    Happens e.g. for polynomial potentials fed a loss estimate with negative
    coordinates (bandit estimates); carries the offending round when known.
    """

    def __init__(self, message: str, round_index: int | None = None):
        super().__init__(message)
        self.round_index = round_index


class ConvergenceError(RuntimeError):
    """A projection solver exhausted its iteration budget; carries the final gap."""

    def __init__(self, message: str, gap: float | None = None):
        super().__init__(message)
        self.gap = gap


class InfeasibilityError(ValueError):
    """A point lies outside the hull; carries a separating certificate.

    ``certificate`` is a pair (direction g, margin) with g·v >= g·w + margin
    for every vertex v, margin > 0.
    """

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class ModeError(ValueError):
    """An operation was invoked in a game mode it does not support."""


class EstimatorDegenerateError(RuntimeError):
    """The sampling moment matrix is too degenerate to build a loss estimate."""


class NumericUnderflowError(RuntimeError):
    """A selection probability underflowed on an observed coordinate."""
