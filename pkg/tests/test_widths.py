import csv
import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import MP, tau_expansion
from widths_lab.dims import GeometryDomain, cumulative_dim
from widths_lab.errors import ParameterError
from widths_lab.multipliers import MultiplierSequence, lam
from widths_lab.widths import (
    CSV_HEADER,
    BreakpointTable,
    approx_number,
    block_of,
    staircase,
    worst_case_error,
)

S2, B3 = GeometryDomain.sphere(2), GeometryDomain.ball(3)


def _params(seq):
    return {"r": seq.r} if seq.family.is_sobolev else {"alpha": seq.alpha, "beta": seq.beta}


def test_frozen_values():
    star = MultiplierSequence.sobolev("star", S2, 1)
    assert float(approx_number(star, 4)) == pytest.approx(0.5773502691896258, rel=1e-15)
    assert float(approx_number(star, 5)) == pytest.approx(0.3779644730092272, rel=1e-15)
    assert approx_number(star, 1).log == 0
    g = MultiplierSequence.gevrey(B3, 1, 1)
    assert approx_number(g, 11).log == -3
    assert approx_number(g, 10).log == -2


@pytest.mark.parametrize(
    "seq",
    [
        MultiplierSequence.sobolev("plus", GeometryDomain.sphere(3), 1.5),
        MultiplierSequence.sobolev("minus", GeometryDomain.sphere(2), 0.7),
        MultiplierSequence.gevrey(GeometryDomain.ball(2), 0.5, 2),
    ],
    ids=str,
)
def test_against_expanded_diagonal(seq):
    ref = tau_expansion(seq.family.value, seq.dom.kind.value, seq.d, 200, **_params(seq))
    for n, (value, degree) in enumerate(ref, start=1):
        got = approx_number(seq, n)
        assert got == lam(seq, degree)
        assert abs(MP.mpf(got.log) - MP.log(value)) < MP.mpf(10) ** -35


def test_worst_case_error_is_shifted():
    seq = MultiplierSequence.sobolev("sharp", S2, 1)
    for n in range(0, 50):
        assert worst_case_error(seq, n) == approx_number(seq, n + 1)
    with pytest.raises(ParameterError):
        worst_case_error(seq, -1)
    with pytest.raises(ParameterError):
        approx_number(seq, 0)


@given(st.integers(2, 40), st.integers(0, 60))
def test_block_constant_and_drops_after(d, k):
    seq = MultiplierSequence.sobolev("star", GeometryDomain.sphere(d), 1)
    first, last = block_of(seq, k)
    assert first == cumulative_dim(seq.dom, k - 1) + 1 and last == cumulative_dim(seq.dom, k)
    assert approx_number(seq, first) == approx_number(seq, last) == lam(seq, k)
    assert approx_number(seq, last + 1) < approx_number(seq, last)


def test_breakpoint_table_lookup_matches_direct():
    seq = MultiplierSequence.gevrey(GeometryDomain.sphere(3), 0.8, 1)
    table = BreakpointTable(seq)
    for n in list(range(1, 300)) + [10**6, 10**6 + 1]:
        assert table.approx_number(n) == approx_number(seq, n)
    assert [r.cum_dim for r in table.rows[:4]] == [1, 5, 14, 30]


def test_staircase_csv_schema_and_underflow():
    seq = MultiplierSequence.gevrey(S2, 2, 1)
    text = staircase(seq, 30).to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_HEADER
    assert len(rows) == 32
    assert rows[1] == ["0", "1", "0.0", "1.0"]
    assert rows[-1][:3] == ["30", str(31 * 31), "-900.0"]
    assert rows[-1][3] == ""
    for row in rows[1:]:
        if row[3]:
            assert float(row[3]) == pytest.approx(float(MP.exp(MP.mpf(row[2]))), rel=1e-15)


def test_staircase_rejects_negative():
    with pytest.raises(ParameterError):
        staircase(MultiplierSequence.sobolev("star", S2, 1), -1)


def test_astronomical_index():
    seq = MultiplierSequence.sobolev("star", GeometryDomain.sphere(5), 2)
    n = 10**200
    v = approx_number(seq, n)
    assert v.log < 0
    assert approx_number(seq, n + 1) <= v
