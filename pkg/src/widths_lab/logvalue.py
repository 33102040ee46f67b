"""Positive reals carried by their natural logarithm.

Multipliers such as ``exp(-beta * k**alpha)`` underflow binary64 long before
the degrees we care about, and the scaled products used in limit checks
subtract logarithms of size 1e6 or more.  All log arithmetic therefore runs
in a private mpmath context with at least ``MIN_DIGITS`` significant digits.
"""

from __future__ import annotations

import functools
import math
import numbers

from mpmath import MPContext

from .errors import ParameterError

MIN_DIGITS = 30
DEFAULT_DIGITS = 40

# exp(-700) is just above the smallest normal binary64 value
FLOAT_LOG_FLOOR = -700

ctx = MPContext()
ctx.dps = DEFAULT_DIGITS

_precision_listeners = []


def on_precision_change(fn):
    """Register ``fn`` to be called after the working precision changes."""
    _precision_listeners.append(fn)
    return fn


def get_precision() -> int:
    return ctx.dps


def set_precision(digits: int) -> None:
    """Set the number of significant decimal digits for log arithmetic."""
    if int(digits) < MIN_DIGITS:
        raise ParameterError(f"precision must be >= {MIN_DIGITS} digits, got {digits}")
    if ctx.dps != int(digits):
        ctx.dps = int(digits)
        for fn in _precision_listeners:
            fn()


def log_int(n: int):
    """Natural log of a positive integer of any size.

    Only the leading ``prec + 16`` bits enter the transcendental evaluation;
    the remaining magnitude is added back as a multiple of ln 2, so the
    integer is never squeezed through a machine float.
    """
    n = int(n)
    if n <= 0:
        raise ParameterError(f"log_int needs a positive integer, got {n}")
    shift = max(0, n.bit_length() - (ctx.prec + 16))
    top = n >> shift
    return ctx.log(ctx.mpf(top)) + shift * ctx.ln2


def to_mpf(x):
    """Convert an int, float, str, Fraction or mpf to a context number."""
    if isinstance(x, numbers.Integral):
        return ctx.mpf(int(x))
    if isinstance(x, numbers.Rational) and not isinstance(x, numbers.Integral):
        return ctx.mpf(x.numerator) / x.denominator
    return ctx.convert(x)


@functools.total_ordering
class LogValue:
    """A value in ``[0, inf)`` stored as ``log(value)``; zero is a separate state.

    Ordering and equality compare the stored logarithms exactly, so two
    values computed along the same path compare bit-exactly.
    """

    __slots__ = ("_log",)

    def __init__(self, log=None):
        if log is not None:
            log = to_mpf(log)
            if ctx.isnan(log):
                raise ParameterError("log value is NaN")
            if ctx.isinf(log):
                if log > 0:
                    raise ParameterError("infinite values are not representable")
                log = None
        self._log = log

    @classmethod
    def zero(cls) -> "LogValue":
        return cls(None)

    @classmethod
    def one(cls) -> "LogValue":
        return cls(0)

    @classmethod
    def from_log(cls, log) -> "LogValue":
        return cls(log)

    @classmethod
    def from_value(cls, value) -> "LogValue":
        """Build from a nonnegative real (int, float, str or mpf)."""
        if isinstance(value, LogValue):
            return value
        if isinstance(value, numbers.Integral):
            if value < 0:
                raise ParameterError(f"negative value {value}")
            return cls(None) if value == 0 else cls(log_int(value))
        v = to_mpf(value)
        if v < 0 or ctx.isnan(v):
            raise ParameterError(f"value must be nonnegative, got {value}")
        if v == 0:
            return cls(None)
        return cls(ctx.log(v))

    @property
    def is_zero(self) -> bool:
        return self._log is None

    @property
    def log(self):
        """Natural logarithm as an mpf (``-inf`` for zero)."""
        return ctx.ninf if self._log is None else self._log

    def __mul__(self, other):
        other = _coerce(other)
        if self._log is None or other._log is None:
            return LogValue(None)
        return LogValue(self._log + other._log)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other._log is None:
            raise ZeroDivisionError("division by LogValue zero")
        if self._log is None:
            return LogValue(None)
        return LogValue(self._log - other._log)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, exponent):
        p = to_mpf(exponent)
        if self._log is None:
            if p > 0:
                return LogValue(None)
            raise ZeroDivisionError("zero raised to a nonpositive power")
        return LogValue(self._log * p)

    def __eq__(self, other):
        if not isinstance(other, LogValue):
            try:
                other = LogValue.from_value(other)
            except (ParameterError, TypeError, ValueError):
                return NotImplemented
        return self._log == other._log

    def __lt__(self, other):
        other = _coerce(other)
        if self._log is None:
            return other._log is not None
        if other._log is None:
            return False
        return self._log < other._log

    def __hash__(self):
        return hash(("LogValue", self._log))

    def value_if_representable(self):
        """The value as a float, or ``None`` when it is below ``exp(-700)``."""
        if self._log is None:
            return 0.0
        if self._log < FLOAT_LOG_FLOOR:
            return None
        return float(ctx.exp(self._log))

    def __float__(self):
        if self._log is None:
            return 0.0
        return float(ctx.exp(self._log))

    def log_float(self) -> float:
        return float(self.log)

    def log_str(self, digits=None) -> str:
        """Decimal rendering of the logarithm with ``digits`` significant digits."""
        if self._log is None:
            return "-inf"
        return ctx.nstr(self._log, digits or ctx.dps, min_fixed=-math.inf, max_fixed=math.inf)

    def __repr__(self):
        if self._log is None:
            return "LogValue(0)"
        return f"LogValue(exp({ctx.nstr(self._log, 17)}))"


def _coerce(x) -> LogValue:
    if isinstance(x, LogValue):
        return x
    return LogValue.from_value(x)
