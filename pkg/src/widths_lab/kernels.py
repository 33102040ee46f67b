"""binary64 kernels for large sweeps, compiled with numba when available.

The exact routines (big integers, high-precision logs) live in the other
modules; these kernels trade exactness for throughput and back the plotting
sweeps and the brute-force quasi-polynomial scan.  Each kernel has a
pure-numpy twin with identical semantics.

Backend selection happens once at import from ``WIDTHS_LAB_KERNELS``:
``numba`` (default when importable), ``numpy``, or ``auto``.  Every public
function also takes an explicit ``backend=`` argument.
"""

from __future__ import annotations

import math
import os
import warnings

import numpy as np
from scipy.special import gammaln

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

BACKEND_ENV = "WIDTHS_LAB_KERNELS"

# family codes shared by both backends
STAR, PLUS, SHARP, MINUS, GEVREY = range(5)
FAMILY_CODES = {
    "sobolev-star": STAR,
    "sobolev-plus": PLUS,
    "sobolev-sharp": SHARP,
    "sobolev-minus": MINUS,
    "gevrey": GEVREY,
}


def _select_backend() -> str:
    want = os.environ.get(BACKEND_ENV, "auto").strip().lower()
    if want not in ("auto", "numba", "numpy"):
        warnings.warn(f"{BACKEND_ENV}={want!r} not understood, using auto")
        want = "auto"
    if want == "numpy":
        return "numpy"
    if numba is None:
        if want == "numba":
            warnings.warn("numba requested but not importable; using numpy kernels")
        return "numpy"
    return "numba"


BACKEND = _select_backend()


def available_backends() -> tuple:
    return ("numpy", "numba") if numba is not None else ("numpy",)


# -- scalar building blocks (plain Python, compiled below for numba) ----------


def _log_cumdim_scalar(is_sphere, d, k):
    if k < 0:
        return -np.inf
    if is_sphere:
        return math.log(2.0 * k + d) + math.lgamma(k + d) - math.lgamma(k + 1.0) - math.lgamma(d + 1.0)
    return math.lgamma(k + d + 1.0) - math.lgamma(k + 1.0) - math.lgamma(d + 1.0)


def _log_lambda_scalar(code, is_sphere, d, p1, p2, k):
    if code == GEVREY:
        if k == 0:
            return 0.0
        return -p2 * k**p1
    if code == STAR:
        if k == 0:
            return 0.0
        eig = k * (k + d - 1.0) if is_sphere else k * (k + d + 0.0)
        x = p1 * math.log(eig)
        if x > 0:
            return -0.5 * (x + math.log1p(math.exp(-x)))
        return -0.5 * math.log1p(math.exp(x))
    if code == PLUS:
        return -0.5 * p1 * math.log(1.0 + k * (k + d - 1.0))
    if code == SHARP:
        return -p1 * math.log(1.0 + k)
    return -p1 * math.log(k + (d - 1.0) / 2.0)


def _qpol_loop(alpha, beta, m_max):
    best = 0.0
    arg = 0
    for m in range(1, m_max + 1):
        g = m / (1.0 + beta * m**alpha)
        if g > best:
            best = g
            arg = m
    return best, arg


# -- numpy twins -----------------------------------------------------------------


def _np_log_cumdim(is_sphere, d, ks):
    ks = np.asarray(ks, dtype=np.float64)
    out = np.full(ks.shape, -np.inf)
    ok = ks >= 0
    k = ks[ok]
    if is_sphere:
        out[ok] = np.log(2.0 * k + d) + gammaln(k + d) - gammaln(k + 1.0) - gammaln(d + 1.0)
    else:
        out[ok] = gammaln(k + d + 1.0) - gammaln(k + 1.0) - gammaln(d + 1.0)
    return out


def _np_log_lambda(code, is_sphere, d, p1, p2, ks):
    k = np.asarray(ks, dtype=np.float64)
    with np.errstate(divide="ignore"):
        if code == GEVREY:
            return -p2 * k**p1
        if code == STAR:
            eig = k * (k + d - 1.0) if is_sphere else k * (k + d)
            x = p1 * np.log(eig)
            out = -0.5 * np.logaddexp(0.0, x)
            return np.where(k == 0, 0.0, out)
        if code == PLUS:
            return -0.5 * p1 * np.log1p(k * (k + d - 1.0))
        if code == SHARP:
            return -p1 * np.log1p(k)
        return -p1 * np.log(k + (d - 1.0) / 2.0)


def _np_scaled(code, is_sphere, d, p1, p2, ks, mode, scale):
    ks = np.asarray(ks, dtype=np.int64)
    ll = _np_log_lambda(code, is_sphere, d, p1, p2, ks)
    lc_lo = _np_log_cumdim(is_sphere, d, ks - 1)
    lc_hi = _np_log_cumdim(is_sphere, d, ks)
    if mode == 0:
        return p1 / d * lc_lo + ll, p1 / d * lc_hi + ll
    return p2 * scale * np.exp(p1 / d * lc_lo) + ll, p2 * scale * np.exp(p1 / d * lc_hi) + ll


def _np_qpol(alpha, beta, m_max, chunk=1 << 20):
    best, arg = 0.0, 0
    for start in range(1, m_max + 1, chunk):
        m = np.arange(start, min(start + chunk, m_max + 1), dtype=np.float64)
        g = m / (1.0 + beta * m**alpha)
        i = int(np.argmax(g))
        if g[i] > best:
            best, arg = float(g[i]), int(m[i])
    return best, arg


# -- numba twins -----------------------------------------------------------------

if numba is not None:
    _nb_log_cumdim_scalar = numba.njit(cache=True)(_log_cumdim_scalar)
    _nb_log_lambda_scalar = numba.njit(cache=True)(_log_lambda_scalar)

    @numba.njit(cache=True)
    def _nb_scaled_loop(code, is_sphere, d, p1, p2, ks, mode, scale, out_lo, out_hi):
        for i in range(ks.shape[0]):
            k = ks[i]
            ll = _nb_log_lambda_scalar(code, is_sphere, d, p1, p2, k)
            lc_lo = _nb_log_cumdim_scalar(is_sphere, d, k - 1)
            lc_hi = _nb_log_cumdim_scalar(is_sphere, d, k)
            if mode == 0:
                out_lo[i] = p1 / d * lc_lo + ll
                out_hi[i] = p1 / d * lc_hi + ll
            else:
                out_lo[i] = p2 * scale * math.exp(p1 / d * lc_lo) + ll
                out_hi[i] = p2 * scale * math.exp(p1 / d * lc_hi) + ll

    @numba.njit(cache=True)
    def _nb_log_cumdim_loop(is_sphere, d, ks, out):
        for i in range(ks.shape[0]):
            out[i] = _nb_log_cumdim_scalar(is_sphere, d, ks[i])

    @numba.njit(cache=True)
    def _nb_log_lambda_loop(code, is_sphere, d, p1, p2, ks, out):
        for i in range(ks.shape[0]):
            out[i] = _nb_log_lambda_scalar(code, is_sphere, d, p1, p2, ks[i])

    _nb_qpol = numba.njit(cache=True)(_qpol_loop)


# -- public dispatch ---------------------------------------------------------------


def _use_numba(backend):
    b = BACKEND if backend is None else backend
    if b not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {b!r}")
    if b == "numba" and numba is None:
        raise RuntimeError("numba backend requested but numba is not installed")
    return b == "numba"


def log_cumdim(is_sphere: bool, d: int, ks, backend=None) -> np.ndarray:
    """log C(d, k) (sphere) or log D(k, d) (ball) for an integer array ks."""
    ks = np.ascontiguousarray(ks, dtype=np.int64)
    if _use_numba(backend):
        out = np.empty(ks.shape[0])
        _nb_log_cumdim_loop(bool(is_sphere), float(d), ks, out)
        return out
    return _np_log_cumdim(is_sphere, float(d), ks)


def log_lambda(code: int, is_sphere: bool, d: int, p1: float, p2: float, ks, backend=None) -> np.ndarray:
    """log lambda_k for a family code; p1 = r or alpha, p2 = beta (Gevrey)."""
    ks = np.ascontiguousarray(ks, dtype=np.int64)
    if _use_numba(backend):
        out = np.empty(ks.shape[0])
        _nb_log_lambda_loop(int(code), bool(is_sphere), float(d), float(p1), float(p2), ks, out)
        return out
    return _np_log_lambda(code, is_sphere, float(d), float(p1), float(p2), ks)


def scaled_endpoints(code, is_sphere, d, p1, p2, ks, mode=0, scale=1.0, backend=None):
    """Logs of the scaled a_n at both ends of each block k.

    mode 0: cum^(p1/d) * lambda_k     (Sobolev, p1 = r)
    mode 1: exp(p2 * scale * cum^(p1/d)) * lambda_k   (Gevrey, p1 = alpha, p2 = beta)

    Returns ``(lower, upper)`` using cum = cumulative_dim(k-1) and cumulative_dim(k).
    """
    ks = np.ascontiguousarray(ks, dtype=np.int64)
    if _use_numba(backend):
        lo = np.empty(ks.shape[0])
        hi = np.empty(ks.shape[0])
        _nb_scaled_loop(int(code), bool(is_sphere), float(d), float(p1), float(p2), ks,
                        int(mode), float(scale), lo, hi)
        return lo, hi
    return _np_scaled(code, is_sphere, float(d), float(p1), float(p2), ks, mode, float(scale))


def qpol_scan(alpha: float, beta: float, m_max: int, backend=None) -> tuple[float, int]:
    """Brute-force max of m / (1 + beta m^alpha) over m = 0..m_max; ties keep the smaller m."""
    if _use_numba(backend):
        best, arg = _nb_qpol(float(alpha), float(beta), int(m_max))
        return float(best), int(arg)
    return _np_qpol(float(alpha), float(beta), int(m_max))
