"""Multiplier sequences lambda_{k,d} of the Sobolev and Gevrey embeddings.

Sphere, r > 0 (eigenvalues of the Laplace-Beltrami operator are k(k+d-1)):
    sobolev-star   (1 + (k(k+d-1))^r)^(-1/2)
    sobolev-plus   (1 + k(k+d-1))^(-r/2)
    sobolev-sharp  (1 + k)^(-r)
    sobolev-minus  (k + (d-1)/2)^(-r)
Ball, r > 0 (weight mu = 1/2, eigenvalues k(k+d)):
    sobolev-star   (1 + (k(k+d))^r)^(-1/2)
Both geometries, alpha, beta > 0:
    gevrey         exp(-beta k^alpha)

The plus/sharp/minus variants are only provided on the sphere.
"""

from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass

from .dims import GeometryDomain
from .errors import ParameterError, SpecSyntaxError
from .logvalue import LogValue, ctx, log_int, on_precision_change, to_mpf


class Family(str, enum.Enum):
    STAR = "sobolev-star"
    PLUS = "sobolev-plus"
    SHARP = "sobolev-sharp"
    MINUS = "sobolev-minus"
    GEVREY = "gevrey"

    @property
    def is_sobolev(self) -> bool:
        return self is not Family.GEVREY


SPHERE_ONLY = frozenset({Family.PLUS, Family.SHARP, Family.MINUS})


@dataclass(frozen=True)
class MultiplierSequence:
    """A named multiplier family bound to a geometry.

    ``r`` is used by the Sobolev families, ``alpha``/``beta`` by Gevrey.
    """

    family: Family
    dom: GeometryDomain
    r: float | None = None
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        if fam in SPHERE_ONLY and not self.dom.is_sphere:
            raise ParameterError(f"{fam.value} is only defined on the sphere")
        if fam.is_sobolev:
            if self.r is None or not self.r > 0:
                raise ParameterError(f"{fam.value} needs r > 0, got r={self.r}")
            if self.alpha is not None or self.beta is not None:
                raise ParameterError(f"{fam.value} takes no alpha/beta")
        else:
            if self.alpha is None or not self.alpha > 0:
                raise ParameterError(f"gevrey needs alpha > 0, got alpha={self.alpha}")
            if self.beta is None or not self.beta > 0:
                raise ParameterError(f"gevrey needs beta > 0, got beta={self.beta}")
            if self.r is not None:
                raise ParameterError("gevrey takes no r")

    # convenience constructors -------------------------------------------------

    @classmethod
    def sobolev(cls, variant: str, dom: GeometryDomain, r) -> "MultiplierSequence":
        fam = Family(variant if variant.startswith("sobolev-") else f"sobolev-{variant}")
        return cls(fam, dom, r=r)

    @classmethod
    def gevrey(cls, dom: GeometryDomain, alpha, beta) -> "MultiplierSequence":
        return cls(Family.GEVREY, dom, alpha=alpha, beta=beta)

    def with_dim(self, d: int) -> "MultiplierSequence":
        return MultiplierSequence(self.family, self.dom.with_dim(d), self.r, self.alpha, self.beta)

    def with_domain(self, dom: GeometryDomain) -> "MultiplierSequence":
        return MultiplierSequence(self.family, dom, self.r, self.alpha, self.beta)

    @property
    def d(self) -> int:
        return self.dom.d

    @property
    def tail_exponent(self):
        """The s with k^s lambda_k -> 1 (Sobolev), else None."""
        return self.r if self.family.is_sobolev else None

    def spec_string(self) -> str:
        if self.family is Family.GEVREY:
            return f"gevrey:alpha={_fmt(self.alpha)},beta={_fmt(self.beta)}"
        return f"{self.family.value}:r={_fmt(self.r)}"

    def __str__(self):
        return f"{self.spec_string()} on {self.dom}"


def _fmt(x) -> str:
    return repr(x) if isinstance(x, float) else str(x)


def lam(seq: MultiplierSequence, k: int) -> LogValue:
    """lambda_{k,d} for the sequence, as an exact-path LogValue."""
    if k < 0:
        raise ParameterError(f"degree must be >= 0, got {k}")
    return _lam_cached(seq, int(k))


# the public name used throughout the docs
lambda_ = lam


@functools.lru_cache(maxsize=1 << 16)
def _lam_cached(seq: MultiplierSequence, k: int) -> LogValue:
    return LogValue(log_lambda(seq, k))


@on_precision_change
def _clear_cache():
    _lam_cached.cache_clear()


def log_lambda(seq: MultiplierSequence, k: int):
    """Natural log of lambda_{k,d} as an mpf."""
    fam, d = seq.family, seq.d
    if fam is Family.GEVREY:
        if k == 0:
            return ctx.zero
        return -to_mpf(seq.beta) * ctx.power(k, to_mpf(seq.alpha))
    r = to_mpf(seq.r)
    if fam is Family.STAR:
        if k == 0:
            return ctx.zero
        eig = k * (k + d - 1) if seq.dom.is_sphere else k * (k + d)
        x = r * log_int(eig)
        return -_log1p_exp(x) / 2
    if fam is Family.PLUS:
        return -r / 2 * log_int(1 + k * (k + d - 1))
    if fam is Family.SHARP:
        return -r * log_int(1 + k)
    if fam is Family.MINUS:
        # k + (d-1)/2 = (2k + d - 1) / 2
        return -r * (log_int(2 * k + d - 1) - ctx.ln2)
    raise AssertionError(fam)


def _log1p_exp(x):
    """log(1 + e^x) without overflow."""
    if x > 0:
        return x + ctx.log1p(ctx.exp(-x))
    return ctx.log1p(ctx.exp(x))


def initial_error(seq: MultiplierSequence) -> LogValue:
    """e(0, d) = lambda_{0,d}: one for all families except sobolev-minus."""
    return lam(seq, 0)


def _coerce_threshold(eps) -> LogValue:
    eps = eps if isinstance(eps, LogValue) else LogValue.from_value(eps)
    if eps.is_zero:
        raise ParameterError("threshold must be > 0")
    return eps


def find_degree_for_threshold(seq: MultiplierSequence, eps) -> int:
    """Minimal m >= 0 with lambda_{m,d} <= eps.

    The closed form is inverted analytically for a first guess, which is then
    corrected by exact LogValue comparisons against ``lam``.
    """
    eps = _coerce_threshold(eps)
    if lam(seq, 0) <= eps:
        return 0
    m = max(_invert_guess(seq, eps.log), 1)

    def ok(k):
        return lam(seq, k) <= eps

    # gallop away from the guess until ok(lo) is false and ok(hi) is true
    step = 1
    if ok(m):
        hi, lo = m, m - 1
        while lo > 0 and ok(lo):
            hi, step = lo, 2 * step
            lo = max(hi - step, 0)
    else:
        lo, hi = m, m + 1
        while not ok(hi):
            lo, step = hi, 2 * step
            hi = lo + step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _invert_guess(seq: MultiplierSequence, log_eps) -> int:
    """Real solution of lambda_k = eps rounded up; may be off by a step or two."""
    fam, d = seq.family, seq.d
    t = -log_eps  # > 0
    if fam is Family.GEVREY:
        k = ctx.power(t / to_mpf(seq.beta), 1 / to_mpf(seq.alpha))
        return _ceil(k)
    r = to_mpf(seq.r)
    if fam is Family.SHARP:
        return _ceil(ctx.exp(t / r) - 1)
    if fam is Family.MINUS:
        return _ceil(ctx.exp(t / r) - ctx.mpf(d - 1) / 2)
    if fam is Family.PLUS:
        target = ctx.exp(2 * t / r) - 1  # k(k+d-1) >= target
        shift = d - 1
    else:
        target = ctx.power(ctx.expm1(2 * t), 1 / r)  # eig >= target
        shift = d - 1 if seq.dom.is_sphere else d
    # k^2 + shift k - target >= 0
    k = (-shift + ctx.sqrt(shift * shift + 4 * target)) / 2
    return _ceil(k)


def _ceil(x) -> int:
    if x <= 0:
        return 0
    return int(ctx.ceil(x))


# -- specifier grammar ---------------------------------------------------------

_SEQ_RE = re.compile(r"^([a-z-]+)(?::(.*))?$")
_PARAM_RE = re.compile(r"^(r|alpha|beta)=([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)$")


def parse_sequence(text: str, dom: GeometryDomain) -> MultiplierSequence:
    """Parse ``family[:name=value(,name=value)*]`` for the given domain.

    Examples: ``sobolev-star:r=1.5``, ``gevrey:alpha=0.8,beta=2``.
    """
    text = text.strip()
    m = _SEQ_RE.match(text)
    if m is None:
        raise SpecSyntaxError(f"bad sequence specifier {text!r}", token=text)
    name, rest = m.group(1), m.group(2)
    try:
        fam = Family(name)
    except ValueError:
        raise SpecSyntaxError(
            f"unknown family {name!r}; expected one of {', '.join(f.value for f in Family)}",
            token=name,
        ) from None
    params = {}
    if rest:
        for tok in rest.split(","):
            pm = _PARAM_RE.match(tok.strip())
            if pm is None:
                raise SpecSyntaxError(f"bad parameter {tok!r} in {text!r}", token=tok)
            if pm.group(1) in params:
                raise SpecSyntaxError(f"duplicate parameter {pm.group(1)!r}", token=tok)
            params[pm.group(1)] = float(pm.group(2))
    need = {"r"} if fam.is_sobolev else {"alpha", "beta"}
    if set(params) != need:
        missing = need - set(params)
        extra = set(params) - need
        tok = sorted(extra)[0] if extra else sorted(missing)[0]
        raise SpecSyntaxError(
            f"{fam.value} takes parameters {sorted(need)}, got {sorted(params)}", token=tok
        )
    return MultiplierSequence(fam, dom, **params)
