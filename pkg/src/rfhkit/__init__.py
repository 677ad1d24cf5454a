"""Numerical toolkit for twisted Rabinowitz-Floer homology computations."""

from rfhkit.errors import (
    ActionError,
    ComplexError,
    ConvergenceError,
    DegenerateEndpointError,
    FlowError,
    LiftError,
    PathError,
    RfhkitError,
)

__version__ = "0.1.0"
