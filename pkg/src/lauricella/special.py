"""Gamma, Pochhammer and Gauss hypergeometric function for real arguments."""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceConditionError, DomainError, ParameterError, PoleError
from .series import DEFAULT_CONTROL, EvalResult, SeriesControl, finalize

# direct product below this length, log-gamma ratio above
POCHHAMMER_PRODUCT_MAX = 32


def is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def log_gamma(x: float) -> tuple[float, int]:
    """Return ``(ln|Gamma(x)|, sign(Gamma(x)))``.

    Raises PoleError for x in {0, -1, -2, ...}.
    """
    x = float(x)
    if is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x!r}")
    if x > 0:
        return math.lgamma(x), 1
    # Gamma alternates sign between consecutive negative integers
    sign = -1 if math.ceil(-x) % 2 else 1
    return math.lgamma(x), sign


def gamma(x: float) -> float:
    lg, s = log_gamma(x)
    return s * math.exp(lg)


def log_pochhammer(kappa: float, nu: int) -> tuple[float, int]:
    """``(ln|(kappa)_nu|, sign)``; sign 0 (and -inf) when the symbol vanishes."""
    if nu < 0:
        raise ValueError("nu must be a nonnegative integer")
    if nu == 0:
        return 0.0, 1
    if is_nonpositive_integer(kappa):
        if nu > -kappa:
            return -math.inf, 0
        return _log_product(kappa, nu)
    if nu <= POCHHAMMER_PRODUCT_MAX:
        return _log_product(kappa, nu)
    l1, s1 = log_gamma(kappa + nu)
    l0, s0 = log_gamma(kappa)
    return l1 - l0, s1 * s0


def _log_product(kappa, nu):
    p = 1.0
    for j in range(nu):
        p *= kappa + j
    if p == 0.0:
        return -math.inf, 0
    return math.log(abs(p)), (1 if p > 0 else -1)


def pochhammer(kappa: float, nu: int) -> float:
    """Rising factorial kappa (kappa+1) ... (kappa+nu-1).

    Explicit product up to ``POCHHAMMER_PRODUCT_MAX`` factors, Gamma ratio
    beyond that. Exactly zero for kappa in {0, -1, ...} with |kappa| < nu.
    """
    if nu < 0:
        raise ValueError("nu must be a nonnegative integer")
    if nu == 0:
        return 1.0
    if is_nonpositive_integer(kappa) or nu <= POCHHAMMER_PRODUCT_MAX:
        if is_nonpositive_integer(kappa) and nu > -kappa:
            return 0.0
        p = 1.0
        for j in range(nu):
            p *= kappa + j
        return p
    lg, s = log_pochhammer(kappa, nu)
    return s * math.exp(lg)


def log_pochhammer_table(x: float, size: int) -> tuple[np.ndarray, np.ndarray]:
    """ln|(x)_p| and sign for p = 0..size-1, by cumulative summation.

    Once a factor x+j hits zero every later entry is zero (log -inf, sign 0).
    """
    factors = x + np.arange(size - 1, dtype=float)
    logs = np.empty(size)
    signs = np.empty(size, dtype=np.int8)
    logs[0] = 0.0
    signs[0] = 1
    with np.errstate(divide="ignore"):
        logs[1:] = np.cumsum(np.log(np.abs(factors)))
    signs[1:] = np.cumprod(np.sign(factors)).astype(np.int8)
    logs[signs == 0] = -np.inf
    return logs, signs


def log_factorial_table(size: int) -> np.ndarray:
    return np.array([math.lgamma(p + 1.0) for p in range(size)])


def _check_c(c):
    if is_nonpositive_integer(c):
        raise ParameterError(f"lower parameter c = {c!r} is a nonpositive integer")


def gauss_sum_at_one(b1: float, b2: float, a: float) -> float:
    """F(b1, b2; a; 1) = Gamma(a-b1-b2) Gamma(a) / (Gamma(a-b1) Gamma(a-b2))."""
    excess = a - b1 - b2
    if not excess > 0:
        raise ConvergenceConditionError(
            f"F(b1, b2; a; 1) needs a - b1 - b2 > 0, got {excess!r}")
    l1, s1 = log_gamma(excess)
    l2, s2 = log_gamma(a)
    l3, s3 = log_gamma(a - b1)
    l4, s4 = log_gamma(a - b2)
    return s1 * s2 * s3 * s4 * math.exp(l1 + l2 - l3 - l4)


def gauss_2f1_series(a: float, b: float, c: float, z: float,
                     ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """Plain Maclaurin summation of 2F1, no transformation applied.

    Also accepts z = 1 so that truncated partial sums at unit argument can
    be studied; convergence there is algebraic and usually hits max_weight.
    """
    _check_c(c)
    floor = abs(z) if abs(z) < 1 else 0.0
    rel_tol, plateau = ctl.rel_tol, ctl.plateau
    term = 1.0
    total = 1.0
    tail = math.inf
    streak = 0
    i = 0
    stopped = False
    while i < ctl.max_weight:
        ratio = (a + i) * (b + i) / ((c + i) * (i + 1)) * z
        term = term * ratio
        total += term
        i += 1
        if term == 0.0:
            tail = 0.0
        else:
            q = max(abs(ratio), floor)
            tail = abs(term) * q / (1.0 - q) if q < 1.0 else math.inf
        if tail <= rel_tol * abs(total):
            streak += 1
            if streak >= plateau:
                stopped = True
                break
        else:
            streak = 0
    return finalize(total, tail, 0.0, i, stopped, ctl)


def _polynomial_case(a, b):
    return is_nonpositive_integer(a) or is_nonpositive_integer(b)


def gauss_2f1(a: float, b: float, c: float, z: float,
              ctl: SeriesControl = DEFAULT_CONTROL,
              autotransform: bool = True) -> EvalResult:
    """Gauss hypergeometric function F(a, b; c; z) for real z <= 1.

    For z < 0 the autotransformation
    F(a, b; c; z) = (1 - z)^(-b) F(c - a, b; c; z / (z - 1))
    moves the argument into [0, 1). The numerator kept in place is the
    larger of (a, b) so that the new numerator c - min(a, b) stays as large
    as possible, which avoids alternating large terms. At z = 1 the closed
    form is used. ``autotransform=False`` sums the raw series on (-1, 0).
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    _check_c(c)
    if _polynomial_case(a, b):
        # terminating series, valid for every z
        return gauss_2f1_series(a, b, c, z, ctl)
    if z == 1.0:
        return EvalResult(gauss_sum_at_one(a, b, c), 0.0, 0, True)
    if z > 1.0:
        raise DomainError(f"2F1 argument z = {z!r} > 1 is outside the real-line domain")
    if z < 0.0 and (autotransform or z <= -1.0):
        if not autotransform:
            raise DomainError(f"untransformed 2F1 series diverges at z = {z!r}")
        lo, hi = (a, b) if a <= b else (b, a)
        pref = (1.0 - z) ** (-hi)
        inner = gauss_2f1_series(c - lo, hi, c, z / (z - 1.0), ctl)
        return inner.scaled(pref)
    return gauss_2f1_series(a, b, c, z, ctl)


def gauss_2f1_batch(a, b, c, z: float, ctl: SeriesControl = DEFAULT_CONTROL):
    """Vectorised :func:`gauss_2f1` over parameter arrays at one argument z < 1.

    Returns ``(values, est_errors, converged)`` arrays. Element-wise the
    arithmetic and stopping rule match the scalar path exactly.
    """
    a, b, c = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float),
                                  np.asarray(c, float))
    shape = a.shape
    a, b, c = a.ravel().copy(), b.ravel().copy(), c.ravel().copy()
    if np.any((c <= 0) & (c == np.round(c))):
        raise ParameterError("a lower parameter is a nonpositive integer")
    z = float(z)
    if z >= 1.0:
        raise DomainError(f"batched 2F1 needs z < 1, got {z!r}")
    pref = np.ones_like(a)
    x = z
    if z < 0.0:
        poly = ((a <= 0) & (a == np.round(a))) | ((b <= 0) & (b == np.round(b)))
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        x = z / (z - 1.0)
        # terminating cases keep the raw series (exactly as the scalar path)
        pref = np.where(poly, 1.0, (1.0 - z) ** (-hi))
        na = np.where(poly, a, c - lo)
        nb = np.where(poly, b, hi)
        a, b = na, nb
        values, errs, conv = _series_batch(a, b, c, np.where(poly, z, x), ctl)
    else:
        values, errs, conv = _series_batch(a, b, c, np.full_like(a, x), ctl)
    values = values * pref
    errs = errs * np.abs(pref)
    return values.reshape(shape), errs.reshape(shape), conv.reshape(shape)


def _series_batch(a, b, c, z, ctl):
    size = a.size
    total = np.ones(size)
    est = np.full(size, np.inf)
    conv = np.zeros(size, dtype=bool)
    used = np.zeros(size, dtype=np.int64)
    idx = np.arange(size)
    aa, bb, cc, zz = a, b, c, z
    floor = np.where(np.abs(zz) < 1, np.abs(zz), 0.0)
    term = np.ones(size)
    ssum = np.ones(size)
    streak = np.zeros(size, dtype=np.int64)
    tail = np.full(size, np.inf)
    rel_tol, plateau = ctl.rel_tol, ctl.plateau
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for i in range(ctl.max_weight):
            if idx.size == 0:
                break
            ratio = (aa + i) * (bb + i) / ((cc + i) * (i + 1)) * zz
            term = term * ratio
            ssum = ssum + term
            q = np.maximum(np.abs(ratio), floor)
            tail = np.where(q < 1.0, np.abs(term) * q / (1.0 - q), np.inf)
            tail = np.where(term == 0.0, 0.0, tail)
            small = tail <= rel_tol * np.abs(ssum)
            streak = np.where(small, streak + 1, 0)
            done = streak >= plateau
            if done.any():
                fin = idx[done]
                total[fin] = ssum[done]
                est[fin] = tail[done]
                conv[fin] = True
                used[fin] = i + 1
                keep = ~done
                idx, aa, bb, cc, zz = idx[keep], aa[keep], bb[keep], cc[keep], zz[keep]
                floor, term, ssum = floor[keep], term[keep], ssum[keep]
                streak, tail = streak[keep], tail[keep]
    if idx.size:
        total[idx] = ssum
        est[idx] = tail
    # honour the tolerance invariant of EvalResult
    conv &= (est <= rel_tol * np.abs(total)) | ((total == 0) & (est == 0))
    return total, est, conv
