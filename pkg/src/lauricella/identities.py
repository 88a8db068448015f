"""Numerical checks of the summation and limit identities tied to the decomposition.

* the triangular multi-sum T_n(a; b_1..b_n) and its Gamma-product value,
* the recurrence linking T_{n+1} to T_n(a - b_{n+1}; b_1..b_n),
* the limit of prod z_k^{-b_k} F_A(a, b; c; 1 - 1/z_1, ...) as z -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, WeightSignError
from .fa import LauricellaParams, left_shifted_series
from .series import DEFAULT_CONTROL, EvalResult, PowerLawTail, SeriesControl, finalize
from .fa import triangular_sum
from .multiindex import count_by_weight
from .special import is_nonpositive_integer, log_factorial_table, log_gamma, log_pochhammer_table

# above this many indices lemma2_lhs switches from enumeration to the margin recursion
ENUMERATION_BUDGET = 2_000_000


@dataclass(frozen=True)
class SummationParams:
    a: float
    b: tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(v) for v in np.atleast_1d(self.b))
        a = float(self.a)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if len(b) < 2:
            raise ParameterError("the triangular summation needs n >= 2")
        if is_nonpositive_integer(a):
            raise ParameterError(f"a = {a!r} must not be a nonpositive integer")
        if not a > sum(b):
            raise ParameterError(f"need a > b_1 + ... + b_n, got a = {a!r}, sum b = {sum(b)!r}")
        for k, bk in enumerate(b, 1):
            if is_nonpositive_integer(a - bk):
                raise ParameterError(f"a - b_{k} = {a - bk!r} is a nonpositive integer")

    @property
    def n(self) -> int:
        return len(self.b)

    @property
    def margin(self) -> float:
        return self.a - sum(self.b)


def lemma2_lhs(params: SummationParams, ctl: SeriesControl = DEFAULT_CONTROL,
               method: str = "auto") -> EvalResult:
    """T_n(a; b) = sum over m[i,j] of
    (a)_{A(n,n)} / prod m! * prod_k (b_k)_{B_k} (a - b_k)_{A_k - B_k} / (a)_{A_k}.

    Shells are summed up to ``ctl.max_weight``. The series converges
    algebraically, so est_error is a power-law tail extrapolation and the
    returned value is the plain partial sum.

    ``method="enumerate"`` visits every index (asserting the parity of
    sum_k B_k and A_k >= B_k term by term); ``"margins"`` uses
    :func:`lemma2_shell_sums`, which gives the same shell sums in
    O(n W^4) work. ``"auto"`` enumerates while the index count stays small.
    """
    if method == "auto":
        total = sum(count_by_weight(params.n, w) for w in range(ctl.max_weight + 1))
        method = "enumerate" if total <= ENUMERATION_BUDGET else "margins"
    monitor = PowerLawTail(ctl, exponent_hint=params.margin + 1.0)
    if method == "enumerate":
        total, mon, used, stopped, _, _ = triangular_sum(
            params.n, ctl, _lemma2_coef(params, ctl.max_weight + 1), monitor=monitor)
        return finalize(total, mon.est, 0.0, used, stopped, ctl)
    if method != "margins":
        raise ParameterError(f"unknown method {method!r}")
    # grow the truncation geometrically so easy cases stay cheap
    W = min(ctl.max_weight, 32)
    while True:
        shells = lemma2_shell_sums(params, W)
        monitor = PowerLawTail(ctl, exponent_hint=params.margin + 1.0)
        total = 0.0
        for w, sw in enumerate(shells):
            total += sw
            if monitor.update(abs(sw), total):
                return finalize(total, monitor.est, 0.0, w, True, ctl)
        if W == ctl.max_weight:
            return finalize(total, monitor.est, 0.0, W, False, ctl)
        W = min(2 * W, ctl.max_weight)


def _lemma2_coef(params, size):
    n, a, b = params.n, params.a, params.b
    la, sa = log_pochhammer_table(a, size)
    lf = log_factorial_table(size)
    lb = [log_pochhammer_table(bk, size) for bk in b]
    lab = [log_pochhammer_table(a - bk, size) for bk in b]

    def coef(E, A, B):
        D = A - B
        if np.any(D < 0):
            raise WeightSignError("encountered A(k, n) < B(k, n)")
        logs = la[A[:, n - 1]] - lf[E].sum(axis=1)
        signs = sa[A[:, n - 1]].astype(float)
        for k in range(n):
            logs = logs + lb[k][0][B[:, k]] + lab[k][0][D[:, k]] - la[A[:, k]]
            signs = signs * lb[k][1][B[:, k]] * lab[k][1][D[:, k]] * sa[A[:, k]]
        return logs, signs

    return coef


def lemma2_shell_sums(params: SummationParams, max_weight: int) -> np.ndarray:
    """Shell sums s_w (w = 0..max_weight) of T_n, without visiting each index.

    A term depends on its index only through the row sums R_i, the column
    sums C_k and prod 1/m!. Summed over all tables with given margins,
    prod 1/m! equals prod_i 1/R_i! * prod_k binom(P_k, C_k), where
    P_k = R_2 + ... + R_k - C_2 - ... - C_{k-1} counts the units still
    waiting for a column. Sweeping k = 1..n with state (A_{k-1}, P_k)
    turns the multi-sum into a chain of two-dimensional updates.

    Internally the state is stored times (a)_A to keep it in range.
    """
    n, a, b = params.n, params.a, params.b
    W = int(max_weight)
    size = W + 1
    la, sa = log_pochhammer_table(a, size)
    lf = log_factorial_table(size)
    lb = [log_pochhammer_table(bk, size) for bk in b]
    lab = [log_pochhammer_table(a - bk, size) for bk in b]
    idx = np.arange(size)

    # step 1: only row 2 contributes, P = A = R_2
    V = np.zeros((size, size))
    V[idx, idx] = lb[0][1] * np.exp(lb[0][0] - lf)

    with np.errstate(under="ignore"):
        for k in range(1, n - 1):
            lbk, sbk = lb[k]
            labk, sabk = lab[k]
            new = np.zeros_like(V)
            for C in range(size):
                P = idx[C:]
                binom = np.exp(lf[P] - lf[C] - lf[P - C])
                G = V[:, C:] * binom
                for R in range(size - C):
                    A = idx[C:size - R]
                    f = (sbk[C + R] * sabk[A - C] * sa[A]
                         * np.exp(lbk[C + R] + labk[A - C] - la[A] - lf[R]))
                    m = size - R - C
                    new[C + R:, R:R + m] += G[C:C + m, :m] * f[:, None]
            V = new
        # last column takes every pending unit: C_n = P_n
        lbn, sbn = lb[n - 1]
        labn, sabn = lab[n - 1]
        shells = np.zeros(size)
        for w in range(size):
            P = idx[:w + 1]
            g = sbn[P] * sabn[w - P] * sa[w] * np.exp(lbn[P] + labn[w - P] - la[w])
            shells[w] = float(V[w, :w + 1] @ g)
    if not np.all(np.isfinite(shells)):
        raise OverflowError(f"shell sums left the double range below weight {W}")
    return shells


def _log_gamma_product(plus, minus):
    lg, sg = 0.0, 1
    for x in plus:
        v, s = log_gamma(x)
        lg += v
        sg *= s
    for x in minus:
        v, s = log_gamma(x)
        lg -= v
        sg *= s
    return sg * math.exp(lg)


def lemma2_rhs(params: SummationParams) -> float:
    """Gamma(a - sum b) Gamma(a)^(n-1) / prod_k Gamma(a - b_k)."""
    a, b = params.a, params.b
    return _log_gamma_product([a - sum(b)] + [a] * (params.n - 1), [a - bk for bk in b])


@dataclass(frozen=True)
class RecurrenceCheck:
    lhs: EvalResult          # T_{n+1}(a; b_1..b_{n+1})
    reduced: EvalResult      # T_n(a - b_{n+1}; b_1..b_n)
    prefactor: float
    rhs: float
    gap: float               # |lhs - rhs| / |rhs|
    est_rel: float           # relative error budget of both truncated sums


def recurrence_prefactor(a: float, b) -> float:
    """prod_{k<=n} Gamma(a) Gamma(a - b_k - b_last) / (Gamma(a - b_last) Gamma(a - b_k))."""
    *head, last = b
    lg = 0.0
    sg = 1
    for bk in head:
        for x, s in ((a, 1), (a - bk - last, 1), (a - last, -1), (a - bk, -1)):
            v, sv = log_gamma(x)
            lg += s * v
            sg *= sv
    return sg * math.exp(lg)


def lemma2_recurrence(params: SummationParams,
                      ctl: SeriesControl = DEFAULT_CONTROL) -> RecurrenceCheck:
    if params.n < 3:
        raise ParameterError("the recurrence needs n + 1 >= 3 variables")
    *head, last = params.b
    lhs = lemma2_lhs(params, ctl)
    reduced = lemma2_lhs(SummationParams(params.a - last, tuple(head)), ctl)
    pref = recurrence_prefactor(params.a, params.b)
    rhs = pref * reduced.value
    gap = abs(lhs.value - rhs) / abs(rhs)
    return RecurrenceCheck(lhs, reduced, pref, rhs, gap, lhs.rel_error + reduced.rel_error)


def lemma2_recurrence_gap(params: SummationParams,
                          ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Relative mismatch of T_{n+1} against prefactor * T_n(a - b_{n+1}; ...)."""
    return lemma2_recurrence(params, ctl).gap


def lemma3_lhs(params: LauricellaParams, t, ctl: SeriesControl = DEFAULT_CONTROL
               ) -> EvalResult:
    """prod_k t_k^(-b_k) F_A(a, b; c; 1 - 1/t_1, ..., 1 - 1/t_n) for 0 < t_k <= 1.

    A scalar t puts every variable on the diagonal t_k = t; a sequence gives
    independent t_k. The t^b prefactor of the transformed series cancels
    analytically and is never formed.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if t.size == 1:
        t = np.repeat(t, params.n)
    return left_shifted_series(params, tuple(t), ctl)


def lemma3_rhs(params: LauricellaParams) -> float:
    """Gamma(a - sum b) / Gamma(a) * prod_k Gamma(c_k) / Gamma(c_k - b_k)."""
    a, b, c = params.a, params.b, params.c
    if not a > sum(b):
        raise ParameterError("the limit needs a > b_1 + ... + b_n")
    return _log_gamma_product([a - sum(b)] + list(c), [a] + [ck - bk for bk, ck in zip(b, c)])


def lemma3_sequence(params: LauricellaParams, exponents=range(4, 11),
                    ctl: SeriesControl = DEFAULT_CONTROL):
    """Evaluate the left side on t = 2^-j; returns [(t, EvalResult), ...]."""
    return [(2.0 ** -j, lemma3_lhs(params, 2.0 ** -j, ctl)) for j in exponents]


def richardson_zero(t1: float, v1: float, t2: float, v2: float) -> float:
    """Linear extrapolation of v(t) to t = 0 from two samples."""
    return (t1 * v2 - t2 * v1) / (t1 - t2)
