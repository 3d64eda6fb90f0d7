"""Composition operators with affine symbols on the Hardy space of the right half-plane."""

from .errors import InvalidInput, NumericalFailure, PreconditionError
from .kernels import (KernelElement, apply, apply_adjoint, evaluate, expansivity_lower_bound,
                      inner, kernel, norm, orbit_norm_kernel_closed, orbit_norms,
                      pointwise_bound_check)
from .symbol import (AffineSymbol, SymbolClass, adjoint_symbol, classify, compose,
                     derivative_at_infinity, fixed_point, inverse, iterate)
from .verdicts import DynamicsReport, Verdict, VerdictValue, report

__version__ = "0.1.0"
