import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from widths_lab.errors import ParameterError
from widths_lab.logvalue import (
    FLOAT_LOG_FLOOR,
    LogValue,
    ctx,
    get_precision,
    log_int,
    set_precision,
)


def test_zero_is_separate_state():
    z = LogValue.zero()
    assert z.is_zero
    assert z.log == ctx.ninf
    assert z < LogValue.from_log(-10**9)
    assert z * LogValue.from_value(5) == z
    assert float(z) == 0.0
    assert z.value_if_representable() == 0.0


def test_from_value_roundtrip():
    for v in (1, 2, 0.5, "0.125", 10**50):
        x = LogValue.from_value(v)
        assert float(x) == pytest.approx(float(v), rel=1e-15)


def test_negative_and_nan_rejected():
    with pytest.raises(ParameterError):
        LogValue.from_value(-1)
    with pytest.raises(ParameterError):
        LogValue.from_value(float("nan"))
    with pytest.raises(ParameterError):
        LogValue.from_log(float("inf"))


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        LogValue.one() / LogValue.zero()


def test_underflow_hides_linear_value():
    tiny = LogValue.from_log(-1000)
    assert tiny.value_if_representable() is None
    assert LogValue.from_log(FLOAT_LOG_FLOOR + 1).value_if_representable() > 0
    assert tiny.log_str(10) == "-1000.0"


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_product_adds_logs(a, b):
    x, y = LogValue.from_log(a), LogValue.from_log(b)
    assert (x * y).log == ctx.mpf(a) + ctx.mpf(b)
    assert (x / y).log == ctx.mpf(a) - ctx.mpf(b)
    assert (x < y) == (a < b)
    assert (x == y) == (a == b)


@given(st.integers(1, 10**400))
def test_log_int_matches_reference(n):
    with mpmath.workdps(80):
        want = mpmath.log(n)
        got = mpmath.mpf(log_int(n))
        assert abs(got - want) <= abs(want) * mpmath.mpf(10) ** -35 + mpmath.mpf(10) ** -38


def test_log_int_rejects_nonpositive():
    with pytest.raises(ParameterError):
        log_int(0)


def test_set_precision_bounds_and_restore():
    old = get_precision()
    with pytest.raises(ParameterError):
        set_precision(10)
    set_precision(50)
    try:
        assert get_precision() == 50
        assert abs(log_int(3) - ctx.log(3)) < ctx.mpf(10) ** -48
    finally:
        set_precision(old)
    assert get_precision() == old


def test_pow_and_repr():
    x = LogValue.from_value(4) ** 0.5
    assert float(x) == pytest.approx(2.0)
    assert "exp(" in repr(x)
    assert repr(LogValue.zero()) == "LogValue(0)"
    assert math.isclose(LogValue.from_value(8).log_float(), math.log(8))
