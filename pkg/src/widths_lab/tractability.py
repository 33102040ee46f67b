"""Tractability classification, the quasi-polynomial exponent and empirical checks.

All statements refer to the worst-case setting with arbitrary linear
functionals.  ``classify`` is analytic (closed-form verdicts); the
``empirical_*`` and ``*_check`` helpers evaluate n(eps, d) exactly along
finite schedules and only report whether the numbers are consistent with a
verdict.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

from . import kernels
from .complexity import ErrorCriterion, info_complexity
from .dims import GeometryDomain, cumulative_dim
from .errors import NotQuasiPolyError, ParameterError, UnsupportedError
from .logvalue import LogValue, ctx, log_int, to_mpf
from .multipliers import Family, MultiplierSequence, lam


class Status(str, enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    OUT_OF_SCOPE = "OutOfScope"


@dataclass(frozen=True)
class Flag:
    status: Status
    citation: str

    def to_dict(self) -> dict:
        return {"status": self.status.value, "citation": self.citation}


# implication chain, strongest first
CHAIN = ("strongly_poly", "poly", "quasi_poly", "uniformly_weak", "weakly_tractable")
FLAG_ORDER = CHAIN + ("curse",)

_CITE_SOBOLEV_SPHERE = "sphere Sobolev tractability characterization, absolute criterion"
_CITE_SOBOLEV_BALL = "ball Sobolev tractability characterization"
_CITE_MINUS_NORMALIZED = "sphere sobolev-minus, normalized criterion: curse of dimensionality"
_CITE_GEVREY_SPHERE = "sphere Gevrey tractability characterization"
_CITE_GEVREY_BALL = "ball Gevrey tractability characterization"
_CITE_IMPLIED = "implied by the implication chain"


@dataclass(frozen=True)
class QPolExponent:
    value: float
    argmax_m: int | None

    def to_dict(self) -> dict:
        return {"value": self.value, "argmax_m": self.argmax_m}


def _g(m: int, alpha: float, beta: float) -> float:
    return m / (1.0 + beta * float(m) ** alpha)


def qpol_exponent(alpha, beta) -> QPolExponent:
    """t^qpol = sup over integers m >= 0 of m / (1 + beta m^alpha), alpha >= 1.

    For alpha = 1 the sup is 1/beta and is not attained.  For alpha > 1 the
    integer maximizer sits next to m* = (beta (alpha - 1))^(-1/alpha); ties go
    to the smaller m.
    """
    alpha, beta = float(alpha), float(beta)
    if not beta > 0:
        raise ParameterError(f"beta must be > 0, got {beta}")
    if not alpha > 0:
        raise ParameterError(f"alpha must be > 0, got {alpha}")
    if alpha < 1:
        raise NotQuasiPolyError(f"gevrey with alpha={alpha} < 1 is not quasi-polynomially tractable")
    if alpha == 1:
        return QPolExponent(1.0 / beta, None)
    m_star = (beta * (alpha - 1.0)) ** (-1.0 / alpha)
    cands = sorted({0, 1, math.floor(m_star), math.ceil(m_star)})
    best_m, best = 0, 0.0
    for m in cands:
        g = _g(m, alpha, beta)
        if g > best:
            best_m, best = m, g
    return QPolExponent(best, best_m)


def qpol_exponent_bruteforce(alpha, beta, m_max: int = 10**6, backend=None) -> QPolExponent:
    """Same sup by scanning m = 0..m_max (compiled kernel)."""
    best, arg = kernels.qpol_scan(float(alpha), float(beta), int(m_max), backend=backend)
    return QPolExponent(best, arg)


@dataclass
class TractabilityReport:
    family: str
    domain: str
    params: dict
    criterion: str
    flags: dict
    st_region: str
    t_qpol: float | None = None
    qpol_argmax: int | None = None
    ec_region: str | None = None
    _st_rule: tuple = field(default=None, repr=False)
    _ec_rule: tuple = field(default=None, repr=False)

    def st_weak(self, s, t) -> Status:
        """(s, t)-weak tractability verdict, where s weights 1/eps and t weights d."""
        return _region_status(self._st_rule, s, t)

    def ec_weak(self, s, t) -> Status:
        """(t, ln^s)-weak tractability verdict: s weights ln(1/eps), t weights d."""
        if self._ec_rule is None:
            return Status.OUT_OF_SCOPE
        return _region_status(self._ec_rule, s, t)

    def consistency_problems(self) -> list[str]:
        probs = []
        st = {k: self.flags[k].status for k in FLAG_ORDER}
        for strong, weak in zip(CHAIN, CHAIN[1:]):
            if st[strong] is Status.HOLDS and st[weak] is Status.FAILS:
                probs.append(f"{strong} holds but {weak} fails")
        if st["curse"] is Status.HOLDS and st["weakly_tractable"] is Status.HOLDS:
            probs.append("curse holds together with weak tractability")
        if st["curse"] is Status.HOLDS:
            for s, t in ((0.5, 0.5), (1.0, 1.0), (10.0, 1.0)):
                if self.st_weak(s, t) is Status.HOLDS:
                    probs.append(f"curse holds but ({s},{t})-weak holds")
        return probs

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "domain": self.domain,
            "params": self.params,
            "criterion": self.criterion,
            "flags": {k: self.flags[k].to_dict() for k in FLAG_ORDER},
            "st_region": self.st_region,
            "t_qpol": self.t_qpol,
            "qpol_argmax": self.qpol_argmax,
            "ec_region": self.ec_region,
        }

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


# region rules: ("threshold", c) means holds iff s > c and t > 0, or s > 0 and t > 1
# ("all",) holds for every s, t > 0; ("curse",) fails for t <= 1, undetermined above


def _region_status(rule, s, t) -> Status:
    s, t = float(s), float(t)
    if not (s > 0 and t > 0):
        raise ParameterError(f"s and t must be > 0, got s={s}, t={t}")
    kind = rule[0]
    if kind == "all":
        return Status.HOLDS
    if kind == "threshold":
        return Status.HOLDS if (s > rule[1] or t > 1) else Status.FAILS
    if kind == "curse":
        return Status.FAILS if t <= 1 else Status.OUT_OF_SCOPE
    raise AssertionError(rule)


def classify(seq: MultiplierSequence, crit=ErrorCriterion.ABSOLUTE) -> TractabilityReport:
    """Closed-form tractability verdicts for a sequence under an error criterion.

    At the boundary s = 1/r of the (s, t) region (with t <= 1) the verdict is
    Fails, matching the closed non-tractability region.
    """
    crit = ErrorCriterion(crit)
    sphere = seq.dom.is_sphere
    fam = seq.family
    params = {"r": seq.r} if fam.is_sobolev else {"alpha": seq.alpha, "beta": seq.beta}
    flags = {}

    if fam.is_sobolev and fam is Family.MINUS and crit is ErrorCriterion.NORMALIZED:
        flags["curse"] = Flag(Status.HOLDS, _CITE_MINUS_NORMALIZED)
        for name in CHAIN:
            flags[name] = Flag(Status.FAILS, _CITE_IMPLIED)
        rep = TractabilityReport(
            fam.value, str(seq.dom), params, crit.value, flags,
            st_region="not (s,t)-weakly tractable for any s > 0, 0 < t <= 1; t > 1 not determined",
            _st_rule=("curse",),
        )
    elif fam.is_sobolev:
        cite = _CITE_SOBOLEV_SPHERE if sphere else _CITE_SOBOLEV_BALL
        r = float(seq.r)
        flags["weakly_tractable"] = Flag(Status.HOLDS if r > 1 else Status.FAILS, cite)
        flags["uniformly_weak"] = Flag(Status.FAILS, cite)
        flags["quasi_poly"] = Flag(Status.FAILS, _CITE_IMPLIED)
        flags["poly"] = Flag(Status.FAILS, _CITE_IMPLIED)
        flags["strongly_poly"] = Flag(Status.FAILS, _CITE_IMPLIED)
        flags["curse"] = Flag(Status.FAILS, cite)
        rep = TractabilityReport(
            fam.value, str(seq.dom), params, crit.value, flags,
            st_region=f"(s,t)-weak iff s > 1/r = {1 / r!r} and t > 0, or s > 0 and t > 1",
            _st_rule=("threshold", 1 / r),
        )
    else:
        cite = _CITE_GEVREY_SPHERE if sphere else _CITE_GEVREY_BALL
        alpha = float(seq.alpha)
        qp = alpha >= 1
        flags["weakly_tractable"] = Flag(Status.HOLDS, _CITE_IMPLIED)
        flags["uniformly_weak"] = Flag(Status.HOLDS, cite)
        flags["quasi_poly"] = Flag(Status.HOLDS if qp else Status.FAILS, cite)
        flags["poly"] = Flag(Status.FAILS, cite)
        flags["strongly_poly"] = Flag(Status.FAILS, _CITE_IMPLIED)
        flags["curse"] = Flag(Status.FAILS, _CITE_IMPLIED)
        q = qpol_exponent(alpha, seq.beta) if qp else None
        ec_weak = "holds" if alpha > 1 else "fails"
        rep = TractabilityReport(
            fam.value, str(seq.dom), params, crit.value, flags,
            st_region="(s,t)-weak for all s, t > 0 (uniformly weak)",
            t_qpol=None if q is None else q.value,
            qpol_argmax=None if q is None else q.argmax_m,
            ec_region=(
                f"(t, ln^s)-weak iff s > 1/alpha = {1 / alpha!r} and t > 0, or s > 0 and t > 1; "
                f"EC-weak {ec_weak} (needs alpha > 1); EC-uniformly weak fails"
            ),
            _st_rule=("all",),
            _ec_rule=("threshold", 1 / alpha),
        )

    probs = rep.consistency_problems()
    if probs:
        raise AssertionError("inconsistent tractability report: " + "; ".join(probs))
    return rep


# -- empirical checks ------------------------------------------------------------


def _as_logvalue(eps) -> LogValue:
    eps = eps if isinstance(eps, LogValue) else LogValue.from_value(eps)
    if eps.is_zero:
        raise ParameterError("eps must be > 0")
    return eps


@dataclass
class WeakLimitRow:
    eps: LogValue
    d: int
    n: int
    ratio: float


@dataclass
class WeakLimitReport:
    """ln max(n, 1) / ((1/eps)^s + d^t) along a schedule, next to the analytic verdict."""

    s: float
    t: float
    rows: list
    tol: float
    tail_max: float
    tends_to_zero: bool
    verdict: Status
    label: str

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "t": self.t,
            "tol": self.tol,
            "tail_max": self.tail_max,
            "tends_to_zero": self.tends_to_zero,
            "verdict": self.verdict.value,
            "label": self.label,
            "rows": [
                {"log_eps": r.eps.log_str(), "d": r.d, "n": str(r.n), "ratio": r.ratio} for r in self.rows
            ],
        }


def diagonal_schedule(seq: MultiplierSequence, d_values) -> list[tuple[LogValue, int]]:
    """Pairs (lambda_{d+1,d}, d): forces n(eps, d) >= cumulative_dim(d) >= 2^d."""
    return [(lam(seq.with_dim(d), d + 1), d) for d in d_values]


def _validate_schedule(pairs):
    prev = None
    for eps, d in pairs:
        key = ctx.exp(-eps.log) + d
        if prev is not None and not key > prev:
            raise ParameterError("schedule must make 1/eps + d strictly increasing")
        prev = key


def empirical_weak_limit(seq: MultiplierSequence, s, t, schedule, crit=ErrorCriterion.ABSOLUTE,
                         tol: float = 0.05) -> WeakLimitReport:
    """Evaluate ln n(eps, d) / ((1/eps)^s + d^t) along a schedule of (eps, d).

    ``tends_to_zero`` means the last fifth of the schedule stays below
    ``tol`` and its last entry is no larger than its first.  The label reads
    "consistent with" when that agrees with the analytic verdict.
    """
    s, t = float(s), float(t)
    if not (s > 0 and t > 0):
        raise ParameterError(f"s and t must be > 0, got s={s}, t={t}")
    pairs = [(_as_logvalue(e), int(d)) for e, d in schedule]
    if len(pairs) < 2:
        raise ParameterError("schedule needs at least two points")
    _validate_schedule(pairs)
    rows = []
    for eps, d in pairs:
        n = info_complexity(seq.with_dim(d), eps, crit)
        denom = ctx.exp(-to_mpf(s) * eps.log) + ctx.power(d, to_mpf(t))
        rows.append(WeakLimitRow(eps, d, n, float(log_int(max(n, 1)) / denom)))
    n_tail = max(2, len(rows) // 5)
    tail = [r.ratio for r in rows[-n_tail:]]
    tail_max = max(tail)
    to_zero = tail_max < tol and tail[-1] <= tail[0]
    verdict = classify(seq, crit).st_weak(s, t)
    if verdict is Status.OUT_OF_SCOPE:
        label = "no analytic verdict for"
    elif to_zero == (verdict is Status.HOLDS):
        label = "consistent with"
    else:
        label = "inconsistent with"
    return WeakLimitReport(s, t, rows, tol, tail_max, to_zero, verdict, label)


@dataclass
class QPolBoundResult:
    t: float
    constant: float
    sup_ratio: LogValue
    sup_at: tuple
    violations: list
    rows: list

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "constant": self.constant,
            "sup_ratio": float(self.sup_ratio),
            "sup_ratio_log": self.sup_ratio.log_str(),
            "sup_at": {"log_eps": self.sup_at[0].log_str(), "d": self.sup_at[1]},
            "violations": [{"log_eps": e.log_str(), "d": d, "n": str(n)} for e, d, n in self.violations],
        }


def _require_qpol(seq: MultiplierSequence):
    if seq.family is not Family.GEVREY:
        raise UnsupportedError("quasi-polynomial bound checks apply to gevrey sequences")
    if seq.alpha < 1:
        raise NotQuasiPolyError(f"gevrey with alpha={seq.alpha} < 1 is not quasi-polynomially tractable")


def qpol_bound_check(seq: MultiplierSequence, grid, t=None, constant: float = 2.0) -> QPolBoundResult:
    """Test n(eps, d) <= constant * exp(t (1 + ln d)(1 + ln 1/eps)) on a grid.

    ``t`` defaults to t^qpol.  Rows hold ``(eps, d, n, ratio)`` with ratio =
    n / exp(t (1 + ln d)(1 + ln 1/eps)); violations are the points where the
    ratio exceeds ``constant``.  Comparisons are done on logarithms.
    """
    _require_qpol(seq)
    if t is None:
        t = qpol_exponent(seq.alpha, seq.beta).value
    pts = [(_as_logvalue(e), int(d)) for e, d in grid]
    if not pts:
        raise ParameterError("grid must be nonempty")
    tt = to_mpf(t)
    log_c = ctx.log(to_mpf(constant))
    rows, violations = [], []
    sup, sup_at = None, None
    for eps, d in pts:
        n = info_complexity(seq.with_dim(d), eps)
        expo = tt * (1 + ctx.log(d)) * (1 - eps.log)
        ratio = LogValue.zero() if n == 0 else LogValue(log_int(n) - expo)
        rows.append((eps, d, n, ratio))
        if sup is None or ratio > sup:
            sup, sup_at = ratio, (eps, d)
        if not ratio.is_zero and ratio.log > log_c:
            violations.append((eps, d, n))
    return QPolBoundResult(float(t), float(constant), sup, sup_at, violations, rows)


def qpol_diagonal_schedule(seq: MultiplierSequence, d_values, c: float = 1.0) -> list[tuple[LogValue, int]]:
    """Pairs (lambda_{m_d + 1}, d) with m_d = floor((c ln d)^(1/alpha)) - 1, m_d >= 0.

    Along this schedule n(eps_d, d) = cumulative_dim(m_d) exactly.
    """
    out = []
    for d in d_values:
        m = max(int(math.floor((c * math.log(d)) ** (1.0 / seq.alpha))) - 1, 0)
        out.append((lam(seq.with_dim(d), m + 1), int(d)))
    return out


def ec_duality_pairs(d: int, alpha, beta, m_max: int = 20) -> list[tuple]:
    """Breakpoint alignment between gevrey(alpha, beta) and sobolev-sharp(r = alpha) on the sphere.

    Rows ``(m, n_gevrey, n_sharp, C(d, m))`` where n_gevrey uses the threshold
    exp(-beta (m+1)^alpha) and n_sharp uses (m+2)^(-alpha).
    """
    dom = GeometryDomain.sphere(d)
    g = MultiplierSequence.gevrey(dom, alpha, beta)
    h = MultiplierSequence.sobolev("sharp", dom, alpha)
    rows = []
    a, b = to_mpf(alpha), to_mpf(beta)
    for m in range(m_max + 1):
        eps_g = LogValue(-b * ctx.power(m + 1, a))
        eps_h = LogValue(-a * log_int(m + 2))
        rows.append((m, info_complexity(g, eps_g), info_complexity(h, eps_h), cumulative_dim(dom, m)))
    return rows
