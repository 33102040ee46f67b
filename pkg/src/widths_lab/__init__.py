"""Exact approximation numbers, information complexity and tractability
for Sobolev and Gevrey multiplier embeddings on the sphere and the ball."""

from .complexity import ErrorCriterion, curse_witness, info_complexity
from .dims import GeometryDomain, cumulative_dim, eigenspace_dim, parse_domain
from .errors import NotQuasiPolyError, ParameterError, SpecSyntaxError, UnsupportedError
from .logvalue import LogValue, get_precision, set_precision
from .multipliers import Family, MultiplierSequence, lam, parse_sequence
from .tractability import classify, qpol_exponent
from .widths import approx_number, staircase, worst_case_error

__all__ = [
    "ErrorCriterion", "curse_witness", "info_complexity",
    "GeometryDomain", "cumulative_dim", "eigenspace_dim", "parse_domain",
    "NotQuasiPolyError", "ParameterError", "SpecSyntaxError", "UnsupportedError",
    "LogValue", "get_precision", "set_precision",
    "Family", "MultiplierSequence", "lam", "parse_sequence",
    "classify", "qpol_exponent",
    "approx_number", "staircase", "worst_case_error",
]
