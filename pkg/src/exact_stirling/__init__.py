"""Exactified Stirling series for ln Gamma via Borel and Mellin-Barnes regularization."""

from .errors import (DivergentTail, DomainError, ExactStirlingError, LogSingularity, NonConvergence,
                     PoleAtNonPositiveInteger, PoleAtOne, SingularityOnBreakpoint)
from .precision import HPComplex, PrecisionPolicy, matching_digits
from .sectors import LineCase, PolarArg, classify_borel, classify_mb
from .borel import Branch, Route, ln_gamma_borel, digamma_borel
from .mb import ln_gamma_mb, mellin_pair_check
from .evaluator import (EvalBreakdown, Method, digamma, evaluate, ln_gamma_reference,
                        stokes_step_experiment)

__all__ = [
    "Branch", "DivergentTail", "DomainError", "EvalBreakdown", "ExactStirlingError", "HPComplex",
    "LineCase", "LogSingularity", "Method", "NonConvergence", "PolarArg", "PoleAtNonPositiveInteger",
    "PoleAtOne", "PrecisionPolicy", "Route", "SingularityOnBreakpoint", "classify_borel",
    "classify_mb", "digamma", "digamma_borel", "evaluate", "ln_gamma_borel", "ln_gamma_mb",
    "ln_gamma_reference", "matching_digits", "mellin_pair_check", "stokes_step_experiment",
]

__version__ = "0.1.0"
