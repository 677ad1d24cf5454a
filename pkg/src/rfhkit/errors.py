"""Exception types shared across rfhkit."""

from __future__ import annotations


class RfhkitError(ValueError):
    """Base class for domain errors (the CLI maps these to exit code 2)."""


class ComplexError(RfhkitError):
    """Inconsistent chain complex: bad shapes or a boundary that does not square to zero."""


class ActionError(RfhkitError):
    """Group action that is not free, not of the declared order, or not a chain map."""


class PathError(RfhkitError):
    """Symplectic path that is too coarse, not symplectic, or not a loop."""


class DegenerateEndpointError(PathError):
    """Endpoint has eigenvalue one and no degenerate convention was requested."""


class FlowError(RfhkitError):
    """Integration failure (blow-up, missing gradient, point off the expected set)."""


class ConvergenceError(RfhkitError):
    """Newton iteration did not reach the requested tolerance."""

    def __init__(self, message: str, history: list[float] | None = None):
        super().__init__(message)
        self.history = list(history or [])


class LiftError(RfhkitError):
    """Loop sampled too coarsely to choose preimages unambiguously."""
