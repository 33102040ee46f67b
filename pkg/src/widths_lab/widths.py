"""Exact approximation numbers via the breakpoint staircase.

For a multiplier sequence the embedding is diagonal with entry lambda_k
repeated ``eigenspace_dim(k)`` times, so

    a_n = lambda_k    for cumulative_dim(k-1) < n <= cumulative_dim(k),

and the minimal worst-case error with n pieces of information is
``e(n, d) = a_{n+1}``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import NamedTuple

from .dims import cumulative_dim, degree_for_index, iter_cumulative_dims
from .errors import ParameterError
from .logvalue import LogValue
from .multipliers import MultiplierSequence, lam


def approx_number(seq: MultiplierSequence, n: int) -> LogValue:
    """a_n of the embedding, n >= 1."""
    n = int(n)
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    return lam(seq, degree_for_index(seq.dom, n))


def worst_case_error(seq: MultiplierSequence, n: int) -> LogValue:
    """e(n, d) = a_{n+1}, n >= 0."""
    n = int(n)
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")
    return approx_number(seq, n + 1)


class Breakpoint(NamedTuple):
    degree: int
    cum_dim: int
    value: LogValue


CSV_HEADER = ("degree", "cum_dim", "log_value", "value_if_representable")


@dataclass
class BreakpointTable:
    """Rows ``(k, cumulative_dim(k), lambda_k)``, materialized on demand.

    Rows are appended using the incremental dimension recurrence, so sweeping
    n upward reuses all previous work.
    """

    seq: MultiplierSequence

    def __post_init__(self):
        self._rows: list[Breakpoint] = []
        self._dims = iter_cumulative_dims(self.seq.dom)

    @property
    def dom(self):
        return self.seq.dom

    @property
    def rows(self) -> tuple:
        return tuple(self._rows)

    def __len__(self):
        return len(self._rows)

    def extend_to_degree(self, k_max: int) -> None:
        while len(self._rows) <= k_max:
            k, c = next(self._dims)
            self._rows.append(Breakpoint(k, c, lam(self.seq, k)))

    def extend_to_index(self, n: int) -> None:
        while not self._rows or self._rows[-1].cum_dim < n:
            self.extend_to_degree(len(self._rows))

    def approx_number(self, n: int) -> LogValue:
        """a_n looked up in the table (bisection over the materialized rows)."""
        if n < 1:
            raise ParameterError(f"n must be >= 1, got {n}")
        self.extend_to_index(n)
        lo, hi = 0, len(self._rows) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if self._rows[mid].cum_dim < n:
                lo = mid + 1
            else:
                hi = mid
        return self._rows[lo].value

    def to_csv(self, fh=None, digits=None) -> str:
        """Write ``degree,cum_dim,log_value,value_if_representable``.

        The last field is empty when the value underflows binary64.
        """
        out = fh if fh is not None else io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in self._rows:
            v = row.value.value_if_representable()
            w.writerow([row.degree, row.cum_dim, row.value.log_str(digits), "" if v is None else repr(v)])
        return out.getvalue() if fh is None else ""


def staircase(seq: MultiplierSequence, k_max: int) -> BreakpointTable:
    """Breakpoint table for degrees 0..k_max."""
    if k_max < 0:
        raise ParameterError(f"k_max must be >= 0, got {k_max}")
    table = BreakpointTable(seq)
    table.extend_to_degree(k_max)
    return table


def block_of(seq: MultiplierSequence, k: int) -> tuple[int, int]:
    """First and last index n with a_n = lambda_k."""
    return cumulative_dim(seq.dom, k - 1) + 1, cumulative_dim(seq.dom, k)
