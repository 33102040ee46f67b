"""Information complexity n(eps, d) = min{n : e(n, d) <= eps * CRI_d}."""

from __future__ import annotations

import enum
from typing import NamedTuple

from .dims import cumulative_dim
from .errors import ParameterError
from .logvalue import LogValue
from .multipliers import MultiplierSequence, find_degree_for_threshold, initial_error


class ErrorCriterion(str, enum.Enum):
    ABSOLUTE = "absolute"
    NORMALIZED = "normalized"


def threshold(seq: MultiplierSequence, eps, crit=ErrorCriterion.ABSOLUTE) -> LogValue:
    """eps * CRI_d, where CRI_d is 1 (absolute) or e(0, d) (normalized)."""
    eps = eps if isinstance(eps, LogValue) else LogValue.from_value(eps)
    if eps.is_zero:
        raise ParameterError("eps must be > 0")
    if ErrorCriterion(crit) is ErrorCriterion.NORMALIZED:
        return eps * initial_error(seq)
    return eps


def info_complexity(seq: MultiplierSequence, eps, crit=ErrorCriterion.ABSOLUTE) -> int:
    """Minimal number of linear functionals reaching error eps * CRI_d.

    If m is the least degree with lambda_m <= eps * CRI_d, the answer is
    cumulative_dim(m - 1), which is 0 when m = 0.
    """
    m = find_degree_for_threshold(seq, threshold(seq, eps, crit))
    return cumulative_dim(seq.dom, m - 1)


class CurseRow(NamedTuple):
    d: int
    n: int
    exceeds_2_pow_d: bool


def curse_witness(seq: MultiplierSequence, crit, eps, d_list) -> list[CurseRow]:
    """Tabulate n(eps, d) and the flag n(eps, d) >= 2^d over ``d_list``."""
    d_list = list(d_list)
    if not d_list:
        raise ParameterError("d_list must be nonempty")
    rows = []
    for d in d_list:
        n = info_complexity(seq.with_dim(d), eps, crit)
        rows.append(CurseRow(d, n, n >= 2**d))
    return rows
