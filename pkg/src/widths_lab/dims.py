"""Exact dimension counting for polynomial spaces on the sphere and the ball.

Sphere ``S^d`` (in R^{d+1}, d >= 2):
    Z(d, l) = dim of spherical harmonics of degree l
    C(d, m) = dim of spherical polynomials of degree <= m
Ball ``B^d`` (in R^d, d >= 1):
    N(l, d) = binom(l + d - 1, l)   orthogonal polynomials of degree l
    D(m, d) = binom(m + d, d)       polynomials of degree <= m

All counts are Python integers; nothing in this module touches floats except
``dim_bounds``, which returns logarithms.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from math import comb

from .errors import ParameterError, SpecSyntaxError
from .logvalue import LogValue, ctx


class Geometry(str, enum.Enum):
    SPHERE = "sphere"
    BALL = "ball"


@dataclass(frozen=True)
class GeometryDomain:
    kind: Geometry
    d: int

    def __post_init__(self):
        kind = Geometry(self.kind)
        object.__setattr__(self, "kind", kind)
        if isinstance(self.d, bool) or int(self.d) != self.d:
            raise ParameterError(f"dimension must be an integer, got {self.d!r}")
        object.__setattr__(self, "d", int(self.d))
        min_d = 2 if kind is Geometry.SPHERE else 1
        if self.d < min_d:
            raise ParameterError(f"{kind.value} requires d >= {min_d}, got d={self.d}")

    @classmethod
    def sphere(cls, d: int) -> "GeometryDomain":
        return cls(Geometry.SPHERE, d)

    @classmethod
    def ball(cls, d: int) -> "GeometryDomain":
        return cls(Geometry.BALL, d)

    @property
    def is_sphere(self) -> bool:
        return self.kind is Geometry.SPHERE

    def with_dim(self, d: int) -> "GeometryDomain":
        return GeometryDomain(self.kind, d)

    def __str__(self):
        return f"{self.kind.value}:d={self.d}"


_DOMAIN_RE = re.compile(r"^(sphere|ball):d=(\d+)$")


def parse_domain(text: str) -> GeometryDomain:
    """Parse ``sphere:d=<int>`` or ``ball:d=<int>``."""
    m = _DOMAIN_RE.match(text.strip())
    if m is None:
        raise SpecSyntaxError(f"bad domain specifier {text!r}; expected e.g. 'sphere:d=4'", token=text)
    return GeometryDomain(Geometry(m.group(1)), int(m.group(2)))


def eigenspace_dim(dom: GeometryDomain, l: int) -> int:
    """Z(d, l) on the sphere, N(l, d) on the ball."""
    if l < 0:
        raise ParameterError(f"degree must be >= 0, got {l}")
    d = dom.d
    if dom.is_sphere:
        if l == 0:
            return 1
        # (2l+d-1) (l+d-2)! / ((d-1)! l!)  ==  (2l+d-1)/(d-1) * binom(l+d-2, l)
        num = (2 * l + d - 1) * comb(l + d - 2, l)
        q, rem = divmod(num, d - 1)
        assert rem == 0
        return q
    return comb(l + d - 1, l)


def cumulative_dim(dom: GeometryDomain, m: int) -> int:
    """C(d, m) on the sphere, D(m, d) on the ball; 0 for m = -1."""
    if m < -1:
        raise ParameterError(f"degree must be >= -1, got {m}")
    if m == -1:
        return 0
    d = dom.d
    if dom.is_sphere:
        # harmonic polynomials of degree m and m-1 in d+1 variables
        return comb(m + d, d) + comb(m + d - 1, d)
    return comb(m + d, d)


def iter_cumulative_dims(dom: GeometryDomain, start: int = 0):
    """Yield ``(k, cumulative_dim(dom, k))`` for k = start, start+1, ...

    Consecutive values come from the exact ratio recurrence
        sphere: C(d,k) = C(d,k-1) (2k+d)(k+d-1) / ((2k+d-2) k)
        ball:   D(k,d) = D(k-1,d) (k+d) / k
    """
    d = dom.d
    k = start
    c = cumulative_dim(dom, k)
    while True:
        yield k, c
        k += 1
        if k == 0:
            c = 1
            continue
        if dom.is_sphere:
            c, rem = divmod(c * (2 * k + d) * (k + d - 1), (2 * k + d - 2) * k)
        else:
            c, rem = divmod(c * (k + d), k)
        assert rem == 0


_LINEAR_WALK = 32


def degree_for_index(dom: GeometryDomain, n: int) -> int:
    """The unique k >= 0 with cumulative_dim(k-1) < n <= cumulative_dim(k).

    Small answers come from walking the ratio recurrence; larger ones from a
    doubling search followed by bisection.  Only exact integer comparisons.
    """
    n = int(n)
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    for k, c in iter_cumulative_dims(dom):
        if n <= c:
            return k
        if k >= _LINEAR_WALK:
            break
    lo, hi = _LINEAR_WALK, 2 * _LINEAR_WALK
    while cumulative_dim(dom, hi) < n:
        lo, hi = hi, 2 * hi
    # invariant: cum(lo) < n <= cum(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if cumulative_dim(dom, mid) < n:
            lo = mid
        else:
            hi = mid
    return hi


def dim_bounds(dom: GeometryDomain, m: int):
    """Log-domain bracket ``(lower, upper)`` around ``log cumulative_dim(dom, m)``.

    lower = max{(1+m/d)^d, (1+d/m)^m},  upper = min{e^d (1+m/d)^d, e^m (1+d/m)^m}.
    The same bracket holds for C(d, m) and D(m, d).
    """
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m}")
    d = ctx.mpf(dom.d)
    mm = ctx.mpf(m)
    a = d * ctx.log1p(mm / d)
    b = mm * ctx.log1p(d / mm)
    return LogValue(max(a, b)), LogValue(min(d + a, mm + b))
