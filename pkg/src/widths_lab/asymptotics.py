"""Strong-equivalence limits, preasymptotic envelopes and regime indices.

Limit checks bracket the scaled approximation number inside each block:
for cumulative_dim(k-1) < n <= cumulative_dim(k),

    cum(k-1)^(s/d) lambda_k  <  n^(s/d) a_n  <=  cum(k)^(s/d) lambda_k,

so following both endpoints of every block is enough to see the limit.
Envelopes use natural logarithms throughout.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from . import kernels
from .dims import GeometryDomain, cumulative_dim, degree_for_index
from .errors import ParameterError, UnsupportedError
from .logvalue import LogValue, ctx, log_int, to_mpf
from .multipliers import Family, MultiplierSequence, lam
from .widths import approx_number

THREADS_ENV = "WIDTHS_LAB_THREADS"

SOBOLEV_RTOL = 1e-3
GEVREY_RTOL = 1e-2
TAIL_FRACTION = 0.2


class Regime(str, enum.Enum):
    SINGLE = "single"  # n = 1
    PRE_SMALL = "preasymptotic-small"  # 2 <= n < d
    PRE_LOG = "preasymptotic-log"  # d <= n < 2^d
    ASYMPTOTIC = "asymptotic"  # n >= 2^d


def regime_of(n: int, d: int) -> Regime:
    """Regime of index n; the shared endpoints n = d and n = 2^d go to the later regime."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if n == 1:
        return Regime.SINGLE
    if n >= 2**d:
        return Regime.ASYMPTOTIC
    if n >= d:
        return Regime.PRE_LOG
    return Regime.PRE_SMALL


# -- strong equivalence ------------------------------------------------------------


def _log_lead_constant(dom: GeometryDomain):
    """log of lim cum(k)/k^d: 2/d! on the sphere, 1/d! on the ball."""
    lf = log_int(factorial(dom.d))
    return (ctx.ln2 - lf) if dom.is_sphere else -lf


def strong_limit_target(seq: MultiplierSequence) -> LogValue:
    """Limit constant of the strong equivalence.

    Sobolev: lim n^(r/d) a_n = (2/d!)^(r/d) (sphere) or (1/d!)^(r/d) (ball).
    Gevrey, alpha < 1: gamma = (2/d!)^(-alpha/d) (sphere) or (1/d!)^(-alpha/d)
    (ball), the constant in lim exp(beta gamma n^(alpha/d)) a_n = 1.
    """
    lead = _log_lead_constant(seq.dom)
    if seq.family.is_sobolev:
        return LogValue(to_mpf(seq.r) / seq.d * lead)
    if seq.alpha >= 1:
        raise UnsupportedError(
            "no strong equivalence for gevrey with alpha >= 1: at alpha = 1 the block "
            "endpoints have different limits, for alpha > 1 not even a weak asymptotic exists"
        )
    return LogValue(-to_mpf(seq.alpha) / seq.d * lead)


def _scaled_log(seq: MultiplierSequence, cum: int, k: int, gamma=None):
    """log of the scaled a_n evaluated with n replaced by ``cum`` and a_n = lambda_k."""
    ll = lam(seq, k).log
    if cum == 0:
        # n^(s/d) -> 0 or exp(beta gamma n^(alpha/d)) -> 1 at the empty block start
        return ctx.ninf if seq.family.is_sobolev else ll
    lc = log_int(cum)
    if seq.family.is_sobolev:
        return to_mpf(seq.r) / seq.d * lc + ll
    beta, alpha = to_mpf(seq.beta), to_mpf(seq.alpha)
    return beta * gamma * ctx.exp(alpha / seq.d * lc) + ll


@dataclass
class ConvergenceReport:
    """Scaled values at both ends of each block in a k schedule.

    ``samples`` holds ``(k, endpoint, value)`` with endpoint "lower" (n just
    above cumulative_dim(k-1)) or "upper" (n = cumulative_dim(k)).
    """

    samples: list
    limit_target: LogValue
    max_rel_dev_tail: float
    converged: bool
    rtol: float
    brackets: list = field(default_factory=list)

    def tail(self):
        n_tail = _tail_count(len(self.samples) // 2)
        return self.samples[-2 * n_tail:]

    def to_dict(self) -> dict:
        return {
            "limit_target": float(self.limit_target),
            "limit_target_log": self.limit_target.log_str(),
            "max_rel_dev_tail": self.max_rel_dev_tail,
            "rtol": self.rtol,
            "converged": self.converged,
            "samples": [
                {"k": k, "endpoint": end, "value": _float_or_none(v), "log_value": v.log_str()}
                for k, end, v in self.samples
            ],
        }


def _float_or_none(v: LogValue):
    return v.value_if_representable()


def _tail_count(n_blocks: int) -> int:
    return max(1, int(np.ceil(TAIL_FRACTION * n_blocks)))


def _rel_dev(v: LogValue, target: LogValue) -> float:
    if v.is_zero:
        return 1.0
    return float(abs(ctx.expm1(v.log - target.log)))


def check_strong_equivalence(seq: MultiplierSequence, k_schedule, rtol=None) -> ConvergenceReport:
    """Follow both block endpoints of the scaled a_n along ``k_schedule``.

    ``converged`` requires at least two blocks and a tail (last 20 % of the
    blocks) whose relative deviation from the target stays below ``rtol``.
    """
    ks = sorted({int(k) for k in k_schedule})
    if not ks or ks[0] < 1:
        raise ParameterError("k_schedule must contain degrees >= 1")
    if seq.family.is_sobolev:
        target = strong_limit_target(seq)
        rtol = SOBOLEV_RTOL if rtol is None else rtol
    else:
        strong_limit_target(seq)  # raises for alpha >= 1
        target = LogValue.one()
        rtol = GEVREY_RTOL if rtol is None else rtol

    samples, brackets = [], []
    for k in ks:
        lo, hi = endpoint_values(seq, k)
        samples.append((k, "lower", lo))
        samples.append((k, "upper", hi))
        brackets.append((k, lo, hi))
    tail = samples[-2 * _tail_count(len(ks)):]
    dev = max(_rel_dev(v, target) for _, _, v in tail)
    converged = len(ks) >= 2 and dev < rtol
    return ConvergenceReport(samples, target, dev, converged, rtol, brackets)


def endpoint_values(seq: MultiplierSequence, k: int) -> tuple[LogValue, LogValue]:
    """Scaled a_n at the lower (cum(k-1)) and upper (cum(k)) end of block k.

    Gevrey uses gamma = (2/d!)^(-alpha/d) (resp. 1/d!) for every alpha, which
    is how the split limits at alpha = 1 show up.
    """
    gamma = None
    if not seq.family.is_sobolev:
        gamma = ctx.exp(-to_mpf(seq.alpha) / seq.d * _log_lead_constant(seq.dom))
    lo = LogValue(_scaled_log(seq, cumulative_dim(seq.dom, k - 1), k, gamma))
    hi = LogValue(_scaled_log(seq, cumulative_dim(seq.dom, k), k, gamma))
    return lo, hi


def alpha1_sublimits(beta, d: int) -> tuple[LogValue, LogValue]:
    """Sub-limit pair ``(exp(beta (d-1)^2 / (2d)), exp(beta d / 2))`` for gevrey, alpha = 1.

    These are the commonly quoted limits of exp(beta gamma n^(1/d)) a_n along
    the lower and upper block endpoints.  The upper one is what the staircase
    converges to; the lower one is not (the staircase gives exp(beta (d-2)/2),
    see ``alpha1_sublimits_exact``).
    """
    b = to_mpf(beta)
    return LogValue(b * (d - 1) ** 2 / (2 * d)), LogValue(b * d / 2)


def alpha1_sublimits_exact(beta, d: int) -> tuple[LogValue, LogValue]:
    """Limits along the block endpoints on the sphere, alpha = 1.

    With gamma = (2/d!)^(-1/d):
        gamma C(d,k-1)^(1/d) - k -> (d-2)/2,   gamma C(d,k)^(1/d) - k -> d/2.
    """
    b = to_mpf(beta)
    return LogValue(b * (d - 2) / 2), LogValue(b * d / 2)


def check_alpha1_sublimits(seq: MultiplierSequence, k_values, limits=None):
    """Compare computed endpoint tails against a pair of limits.

    Returns rows ``(k, lower_value, upper_value, lower_rel_dev, upper_rel_dev)``;
    ``limits`` defaults to ``alpha1_sublimits(beta, d)``.
    """
    if seq.family is not Family.GEVREY or seq.alpha != 1 or not seq.dom.is_sphere:
        raise UnsupportedError("alpha = 1 sub-limits are defined for gevrey with alpha = 1 on the sphere")
    lo_lim, hi_lim = limits or alpha1_sublimits(seq.beta, seq.d)
    rows = []
    for k in k_values:
        lo, hi = endpoint_values(seq, int(k))
        rows.append((int(k), lo, hi, _rel_dev(lo, lo_lim), _rel_dev(hi, hi_lim)))
    return rows


def scaled_series(seq: MultiplierSequence, k_max: int, backend=None):
    """binary64 series of the scaled a_n block endpoints for k = 1..k_max.

    Returns ``(ks, lower, upper)`` as numpy arrays of values (not logs).
    Gevrey with alpha >= 1 uses gamma = (2/d!)^(-alpha/d) (resp. 1/d!) anyway,
    which shows the split endpoint limits at alpha = 1.
    """
    ks = np.arange(1, int(k_max) + 1, dtype=np.int64)
    code = kernels.FAMILY_CODES[seq.family.value]
    lead = float(_log_lead_constant(seq.dom))
    if seq.family.is_sobolev:
        lo, hi = kernels.scaled_endpoints(code, seq.dom.is_sphere, seq.d, seq.r, 0.0, ks,
                                          mode=0, backend=backend)
    else:
        gamma = np.exp(-seq.alpha / seq.d * lead)
        lo, hi = kernels.scaled_endpoints(code, seq.dom.is_sphere, seq.d, seq.alpha, seq.beta, ks,
                                          mode=1, scale=gamma, backend=backend)
    return ks, np.exp(lo), np.exp(hi)


# -- envelopes -------------------------------------------------------------------


@dataclass(frozen=True)
class EnvelopeValue:
    """Right-hand side of the two-sided estimate at (n, d).

    For Sobolev families ``value`` approximates a_n; for Gevrey it approximates
    -ln a_n.
    """

    value: LogValue
    regime: Regime


def _log_ratio_term(ln_n, d):
    """log( ln(1 + d/ln n) / ln n )."""
    return ctx.log(ctx.log1p(d / ln_n)) - ctx.log(ln_n)


def envelope(seq: MultiplierSequence, n: int) -> EnvelopeValue:
    """Envelope of a_n (Sobolev) or of -ln a_n (Gevrey) for index n.

    sobolev-star/-plus:  1 | d^(-r/2) | d^(-r/2) (ln(1+d/ln n)/ln n)^(r/2) | d^(-r) n^(-r/d)
    sobolev-sharp:       1 (n < d)    | (ln(1+d/ln n)/ln n)^r              | d^(-r) n^(-r/d)
    sobolev-minus:       d^(-r) (n < 2^d)                                  | d^(-r) n^(-r/d)
    gevrey (-ln a_n):    0 (n = 1) | beta | beta (ln n/ln(1+d/ln n))^alpha  | beta d^alpha n^(alpha/d)
    """
    n = int(n)
    d = seq.d
    reg = regime_of(n, d)
    fam = seq.family
    ln_d = log_int(d)
    ln_n = log_int(n) if n > 1 else ctx.zero

    if fam is Family.GEVREY:
        alpha, beta = to_mpf(seq.alpha), to_mpf(seq.beta)
        lb = ctx.log(beta)
        if reg is Regime.SINGLE:
            # a_1 = 1 exactly, so -ln a_1 = 0
            return EnvelopeValue(LogValue.zero(), reg)
        if reg is Regime.PRE_SMALL:
            return EnvelopeValue(LogValue(lb), reg)
        if reg is Regime.PRE_LOG:
            return EnvelopeValue(LogValue(lb - alpha * _log_ratio_term(ln_n, d)), reg)
        return EnvelopeValue(LogValue(lb + alpha * ln_d + alpha / d * ln_n), reg)

    r = to_mpf(seq.r)
    asym = -r * ln_d - r / d * ln_n
    if fam is Family.MINUS:
        return EnvelopeValue(LogValue(asym if reg is Regime.ASYMPTOTIC else -r * ln_d), reg)
    if reg is Regime.ASYMPTOTIC:
        return EnvelopeValue(LogValue(asym), reg)
    if fam is Family.SHARP:
        if reg is Regime.PRE_LOG:
            return EnvelopeValue(LogValue(r * _log_ratio_term(ln_n, d)), reg)
        return EnvelopeValue(LogValue.one(), reg)
    # star and plus
    if reg is Regime.SINGLE:
        return EnvelopeValue(LogValue.one(), reg)
    if reg is Regime.PRE_SMALL:
        return EnvelopeValue(LogValue(-r / 2 * ln_d), reg)
    return EnvelopeValue(LogValue(-r / 2 * ln_d + r / 2 * _log_ratio_term(ln_n, d)), reg)


def envelope_ratio(seq: MultiplierSequence, n: int) -> float:
    """a_n / envelope (Sobolev) or ln a_n / (-envelope) (Gevrey); 0/0 counts as 1."""
    a = approx_number(seq, n)
    env = envelope(seq, n).value
    if seq.family is Family.GEVREY:
        neg_log_a = -a.log
        if env.is_zero:
            return 1.0 if neg_log_a == 0 else float("inf")
        return float(neg_log_a / ctx.exp(env.log))
    return float(ctx.exp(a.log - env.log))


@dataclass
class SweepResult:
    min_ratio: float
    max_ratio: float
    per_regime: dict  # Regime -> (min, max)
    per_dim: dict  # d -> (min, max)
    points: list  # (d, n, regime, ratio), in grid order

    def to_dict(self) -> dict:
        return {
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "per_regime": {k.value: list(v) for k, v in self.per_regime.items()},
            "per_dim": {str(k): list(v) for k, v in self.per_dim.items()},
            "points": [
                {"d": d, "n": str(n), "regime": reg.value, "ratio": ratio}
                for d, n, reg, ratio in self.points
            ],
        }


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _ordered_map(fn, items):
    """map() with an optional thread pool; output order follows input order."""
    workers = _threads()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def envelope_ratio_sweep(seq: MultiplierSequence, grid) -> SweepResult:
    """Ratios of a_n to its envelope over ``(n, d)`` points.

    The sequence's own dimension is replaced by each grid point's d.
    """
    grid = [(int(n), int(d)) for n, d in grid]
    if not grid:
        raise ParameterError("grid must be nonempty")

    def one(point):
        n, d = point
        s = seq.with_dim(d)
        return d, n, regime_of(n, d), envelope_ratio(s, n)

    points = _ordered_map(one, grid)
    per_regime, per_dim = {}, {}
    for d, n, reg, ratio in points:
        for table, key in ((per_regime, reg), (per_dim, d)):
            lo, hi = table.get(key, (ratio, ratio))
            table[key] = (min(lo, ratio), max(hi, ratio))
    ratios = [p[3] for p in points]
    return SweepResult(min(ratios), max(ratios), per_regime, per_dim, points)


def log_spaced_indices(n_max: int, per_octave: int = 2) -> list[int]:
    """Distinct integers 1..n_max, roughly ``per_octave`` per doubling, plus powers of 2."""
    n_max = int(n_max)
    out = {1, n_max}
    bits = n_max.bit_length()
    for b in range(bits + 1):
        for j in range(per_octave):
            v = int(round(2 ** (b + j / per_octave)))
            if 1 <= v <= n_max:
                out.add(v)
        if 2**b <= n_max:
            out.add(2**b)
    return sorted(out)


def standard_grid(d_values, extra_octaves: int = 4, per_octave: int = 2):
    """Grid covering all four regimes: n log-spaced up to 2^(d+extra) plus n = d, 2^d and neighbours."""
    grid = []
    for d in d_values:
        ns = set(log_spaced_indices(2 ** (d + extra_octaves), per_octave))
        ns.update(x for x in (d - 1, d, d + 1, 2**d - 1, 2**d, 2**d + 1) if x >= 1)
        grid.extend((n, d) for n in sorted(ns))
    return grid


def boundary_jumps(seq: MultiplierSequence) -> dict:
    """Ratio of the envelope formulas on either side of n = d and n = 2^d.

    Both neighbouring formulas are evaluated at the boundary index itself, so
    the ratio measures how far apart the two rows are where they meet.
    """
    d = seq.d
    out = {}
    if d >= 2:
        out["n=d"] = _formula_ratio(seq, d, Regime.PRE_SMALL, Regime.PRE_LOG)
    out["n=2^d"] = _formula_ratio(seq, 2**d, Regime.PRE_LOG, Regime.ASYMPTOTIC)
    return out


def _formula_ratio(seq, n, left: Regime, right: Regime) -> float:
    a = _envelope_formula(seq, n, left)
    b = _envelope_formula(seq, n, right)
    return float(ctx.exp(abs(a - b)))


def _envelope_formula(seq, n, reg: Regime):
    """log of the envelope row ``reg`` evaluated at n, ignoring which row n belongs to."""
    d = seq.d
    ln_d = log_int(d)
    ln_n = log_int(n)
    fam = seq.family
    if fam is Family.GEVREY:
        alpha, beta = to_mpf(seq.alpha), to_mpf(seq.beta)
        lb = ctx.log(beta)
        return {
            Regime.PRE_SMALL: lb,
            Regime.PRE_LOG: lb - alpha * _log_ratio_term(ln_n, d),
            Regime.ASYMPTOTIC: lb + alpha * ln_d + alpha / d * ln_n,
        }[reg]
    r = to_mpf(seq.r)
    asym = -r * ln_d - r / d * ln_n
    if fam is Family.MINUS:
        return asym if reg is Regime.ASYMPTOTIC else -r * ln_d
    if fam is Family.SHARP:
        return {
            Regime.PRE_SMALL: ctx.zero,
            Regime.PRE_LOG: r * _log_ratio_term(ln_n, d),
            Regime.ASYMPTOTIC: asym,
        }[reg]
    return {
        Regime.PRE_SMALL: -r / 2 * ln_d,
        Regime.PRE_LOG: -r / 2 * ln_d + r / 2 * _log_ratio_term(ln_n, d),
        Regime.ASYMPTOTIC: asym,
    }[reg]


# -- regime indices -------------------------------------------------------------------


def regime_index_equivalents(dom: GeometryDomain, n: int):
    """``(m_exact, m_log_formula, m_asym_formula)`` for index n >= 2.

    m_log = ln n / (1 + ln(d / ln n)),  m_asym = d n^(1/d).
    """
    n = int(n)
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    d = dom.d
    m = degree_for_index(dom, n)
    ln_n = log_int(n)
    m_log = ln_n / (1 + ctx.log(d / ln_n))
    m_asym = d * ctx.exp(ln_n / d)
    return m, float(m_log), float(m_asym)
