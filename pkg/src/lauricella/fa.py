"""Lauricella F_A^(n): direct series, recursive and closed decompositions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, ParameterError
from .multiindex import compositions, shell_array, weight_matrices
from .series import DEFAULT_CONTROL, EvalResult, GeometricTail, SeriesControl, finalize
from .special import (gauss_2f1, gauss_2f1_batch, is_nonpositive_integer,
                      log_factorial_table, log_pochhammer, log_pochhammer_table)


@dataclass(frozen=True)
class LauricellaParams:
    """Parameter block (a; b_1..b_n; c_1..c_n) of F_A^(n)."""

    a: float
    b: tuple[float, ...]
    c: tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(v) for v in np.atleast_1d(self.b))
        c = tuple(float(v) for v in np.atleast_1d(self.c))
        if len(b) != len(c):
            raise ParameterError(f"b has {len(b)} entries but c has {len(c)}")
        if not b:
            raise ParameterError("F_A needs at least one variable")
        for k, ck in enumerate(c, 1):
            if is_nonpositive_integer(ck):
                raise ParameterError(f"c_{k} = {ck!r} is a nonpositive integer")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return len(self.b)

    def permuted(self, order: Sequence[int]) -> "LauricellaParams":
        return LauricellaParams(self.a, tuple(self.b[i] for i in order),
                                tuple(self.c[i] for i in order))


def _as_args(params, z, name="z"):
    z = tuple(float(v) for v in np.atleast_1d(z))
    if len(z) != params.n:
        raise ParameterError(f"{name} has {len(z)} entries, expected n = {params.n}")
    return z


def _check_strict(z, strict):
    s = sum(abs(v) for v in z)
    if strict and not s < 1.0:
        raise DomainError(
            f"F_A series needs sum |z_i| < 1, got {s!r} (pass strict=False to override)")
    return s


# ---------------------------------------------------------------- direct series

def fa_direct(params: LauricellaParams, z, ctl: SeriesControl = DEFAULT_CONTROL,
              strict: bool = True) -> EvalResult:
    """Sum the defining multiple series over shells p_1 + ... + p_n = d.

    est_error is a geometric extrapolation of the last shell's absolute
    mass, using max(observed shell ratio, sum |z_i|) as the ratio.
    """
    z = _as_args(params, z)
    zsum = _check_strict(z, strict)
    n, size = params.n, ctl.max_weight + 1
    la, sa = log_pochhammer_table(params.a, size)
    lf = log_factorial_table(size)
    p = np.arange(size)
    lu, su = [], []
    with np.errstate(divide="ignore"):
        for bk, ck, zk in zip(params.b, params.c, z):
            lb, sb = log_pochhammer_table(bk, size)
            lc, sc = log_pochhammer_table(ck, size)
            if zk == 0.0:
                lz = np.where(p == 0, 0.0, -np.inf)
                sz = np.where(p == 0, 1, 0)
            else:
                lz = p * math.log(abs(zk))
                sz = np.where(p % 2 == 1, np.sign(zk), 1.0)
            lu.append(lb - lc - lf + lz)
            su.append(sb * sc * sz)
    monitor = GeometricTail(ctl, zsum if zsum < 1 else None)
    total = 0.0
    stopped = False
    for d in range(size):
        P = compositions(d, n)
        logs = np.full(P.shape[0], la[d])
        signs = np.full(P.shape[0], float(sa[d]))
        for k in range(n):
            logs = logs + lu[k][P[:, k]]
            signs = signs * su[k][P[:, k]]
        terms = signs * np.exp(logs)
        total += float(terms.sum())
        if monitor.update(float(np.abs(terms).sum()), total):
            stopped = True
            break
    return finalize(total, monitor.est, 0.0, d, stopped, ctl)


# ------------------------------------------------------ recursive decomposition

def fa_recursive(params: LauricellaParams, z, ctl: SeriesControl = DEFAULT_CONTROL,
                 strict: bool = True) -> EvalResult:
    """Peel off z_1 repeatedly:

    F_A^(n) = sum_{m_2..m_n} [(a)_M (b_1)_M prod_k (b_k)_{m_k}] /
              [m_2!..m_n! (c_1)_M prod_k (c_k)_{m_k}] z_1^M prod_k z_k^{m_k}
              F(a+M, b_1+M; c_1+M; z_1) F_A^(n-1)(a+M, b_k+m_k; c_k+m_k; z_2..z_n)

    with M = m_2 + ... + m_n, recursing down to a single Gauss function.
    Gauss factors are cached by (variable, a-shift, b/c-shift).
    """
    z = _as_args(params, z)
    if params.n < 2:
        raise ParameterError("fa_recursive needs n >= 2")
    _check_strict(z, strict)
    n = params.n
    a, b, c = params.a, params.b, params.c
    inner = ctl.tightened()
    gcache: dict = {}
    N = ctl.max_weight
    logz = [math.log(abs(v)) if v != 0 else None for v in z]

    def gauss(k, sa, s):
        key = (k, sa, s)
        g = gcache.get(key)
        if g is None:
            g = gauss_2f1(a + sa, b[k] + s, c[k] + s, z[k], inner)
            gcache[key] = g
        return g

    def power(k, m):
        if m == 0:
            return 0.0, 1
        if logz[k] is None:
            return -math.inf, 0
        return m * logz[k], (-1 if (z[k] < 0 and m % 2) else 1)

    def rec(k0, sa, shifts):
        if k0 == n - 1:
            g = gauss(k0, sa, shifts[0])
            return g.value, g.est_error, g.converged
        dims = n - 1 - k0
        floor = sum(abs(v) for v in z[k0:])
        monitor = GeometricTail(ctl, floor if floor < 1 else None)
        total = 0.0
        err_inner = 0.0
        ok = True
        stopped = False
        for M in range(N + 1):
            shell = 0.0
            shell_abs = 0.0
            l1, s1 = log_pochhammer(a + sa, M)
            l2, s2 = log_pochhammer(b[k0] + shifts[0], M)
            l3, s3 = log_pochhammer(c[k0] + shifts[0], M)
            l4, s4 = power(k0, M)
            base_sign = s1 * s2 * s3 * s4
            if base_sign:
                base_log = l1 + l2 - l3 + l4
                g = gauss(k0, sa + M, shifts[0] + M)
                ok = ok and g.converged
                for comp in compositions(M, dims).tolist():
                    lg, sg = base_log, base_sign
                    for j, m in enumerate(comp):
                        kk = k0 + 1 + j
                        lb, sb = log_pochhammer(b[kk] + shifts[j + 1], m)
                        lc, sc = log_pochhammer(c[kk] + shifts[j + 1], m)
                        lp, sp = power(kk, m)
                        lg += lb - lc + lp - math.lgamma(m + 1.0)
                        sg *= sb * sc * sp
                    if not sg:
                        continue
                    iv, ie, ic = rec(k0 + 1, sa + M,
                                     tuple(s + m for s, m in zip(shifts[1:], comp)))
                    ok = ok and ic
                    coef = sg * math.exp(lg)
                    term = coef * g.value * iv
                    shell += term
                    shell_abs += abs(term)
                    err_inner += abs(coef) * (abs(g.value) * ie + abs(iv) * g.est_error)
            total += shell
            if monitor.update(shell_abs, total):
                stopped = True
                break
        ok = ok and stopped
        return total, monitor.est + err_inner, ok

    value, err, ok = rec(0, 0, (0,) * n)
    return _recursive_result(value, err, ok, ctl, gcache)


def _recursive_result(value, err, ok, ctl, gcache):
    # weight_used reports the largest a-shift reached by any Gauss factor
    used = max((key[1] for key in gcache), default=0)
    return finalize(value, err, 0.0, used, ok, ctl)


# ------------------------------------------------ closed (triangular) decomposition

class _FactorCache:
    """Memoised batch evaluation of one variable's Gauss factors keyed by (A, B)."""

    def __init__(self, fn: Callable):
        self.fn = fn
        self.store: dict = {}

    def prefetch(self, A: np.ndarray, B: np.ndarray):
        keys = set(zip(A.tolist(), B.tolist())) - self.store.keys()
        if not keys:
            return
        keys = sorted(keys)
        kA = np.array([k[0] for k in keys])
        kB = np.array([k[1] for k in keys])
        vals, errs, conv = self.fn(kA, kB)
        for key, v, e, ok in zip(keys, vals.tolist(), errs.tolist(), conv.tolist()):
            self.store[key] = (v, e, ok)

    def get(self, A: np.ndarray, B: np.ndarray):
        pairs = np.stack([A, B], axis=1)
        uniq, inverse = np.unique(pairs, axis=0, return_inverse=True)
        got = [self.store[(int(p), int(q))] for p, q in uniq]
        vals = np.array([g[0] for g in got])[inverse.ravel()]
        errs = np.array([g[1] for g in got])[inverse.ravel()]
        ok = all(g[2] for g in got)
        return vals, errs, ok


def triangular_sum(n: int, ctl: SeriesControl, coef_fn: Callable,
                   factors: Sequence[_FactorCache] = (), monitor=None,
                   check_parity: bool = True):
    """Graded sum over triangular multi-indices of size n.

    ``coef_fn(E, A, B)`` returns (log|coef|, sign) per index row, where E is
    the shell's entry matrix and A, B the weight matrices (column k-1 holds
    A(k, n), B(k, n)). Optional per-variable ``factors`` multiply each term
    by a cached function of (A(k, n), B(k, n)).

    Returns (total, monitor, weight_used, stopped, inner_err, inner_ok).
    """
    ma, mb = weight_matrices(n)
    monitor = monitor or GeometricTail(ctl)
    total = 0.0
    inner_err = 0.0
    inner_ok = True
    w = 0
    block = 1
    stopped = False
    while w <= ctl.max_weight and not stopped:
        shells = []
        for ww in range(w, min(w + block, ctl.max_weight + 1)):
            E = shell_array(n, ww)
            A, B = E @ ma, E @ mb
            if check_parity and not np.all(B.sum(axis=1) == 2 * ww):
                raise AssertionError(f"parity of sum_k B(k, n) violated at weight {ww}")
            shells.append((ww, E, A, B))
        for k, fc in enumerate(factors):
            fc.prefetch(np.concatenate([s[2][:, k] for s in shells]),
                        np.concatenate([s[3][:, k] for s in shells]))
        for ww, E, A, B in shells:
            logs, signs = coef_fn(E, A, B)
            with np.errstate(under="ignore"):
                terms = signs * np.exp(logs)
            if factors:
                gv = []
                ge = []
                for k, fc in enumerate(factors):
                    v, e, ok = fc.get(A[:, k], B[:, k])
                    inner_ok = inner_ok and ok
                    gv.append(v)
                    ge.append(e)
                prod = np.prod(gv, axis=0)
                for k in range(len(factors)):
                    others = np.prod([gv[j] for j in range(len(factors)) if j != k], axis=0)
                    inner_err += float(np.sum(np.abs(terms * others) * ge[k]))
                terms = terms * prod
            total += float(terms.sum())
            if monitor.update(float(np.abs(terms).sum()), total):
                stopped = True
                w = ww
                break
            w = ww
        if not stopped:
            w += 1
            block = min(2 * block, 256)
    return total, monitor, min(w, ctl.max_weight), stopped, inner_err, inner_ok


def _shifted_tables(params, size):
    la, sa = log_pochhammer_table(params.a, size)
    lf = log_factorial_table(size)
    lb, sb, lc, sc = [], [], [], []
    for bk, ck in zip(params.b, params.c):
        t = log_pochhammer_table(bk, size)
        lb.append(t[0])
        sb.append(t[1])
        t = log_pochhammer_table(ck, size)
        lc.append(t[0])
        sc.append(t[1])
    return la, sa, lf, lb, sb, lc, sc


def _lemma1_coef(params, x, size):
    """Coefficient (a)_{A(n,n)}/prod m! prod_k (b_k)_B/(c_k)_B x_k^B of a term."""
    n = params.n
    la, sa, lf, lb, sb, lc, sc = _shifted_tables(params, size)
    lx = [math.log(abs(v)) if v != 0 else None for v in x]

    def coef(E, A, B):
        logs = la[A[:, n - 1]] - lf[E].sum(axis=1)
        signs = sa[A[:, n - 1]].astype(float)
        for k in range(n):
            Bk = B[:, k]
            logs = logs + lb[k][Bk] - lc[k][Bk]
            signs = signs * sb[k][Bk] * sc[k][Bk]
            if lx[k] is None:
                logs = np.where(Bk > 0, -np.inf, logs)
            else:
                logs = logs + Bk * lx[k]
                if x[k] < 0:
                    signs = signs * np.where(Bk % 2 == 1, -1.0, 1.0)
        return logs, signs

    return coef


def fa_decomposed(params: LauricellaParams, z, ctl: SeriesControl = DEFAULT_CONTROL,
                  strict: bool = True) -> EvalResult:
    """F_A^(n) as a sum over triangular indices m[i, j] of Gauss-function products.

    Each term is
    (a)_{A(n,n)} / prod m[i,j]! * prod_k (b_k)_{B_k}/(c_k)_{B_k} z_k^{B_k}
        * F(a + A(k,n), b_k + B_k; c_k + B_k; z_k),
    and shells of equal total index weight are summed in order.
    ``strict=False`` only requires max |z_k| < 1.
    """
    z = _as_args(params, z)
    if params.n < 2:
        raise ParameterError("fa_decomposed needs n >= 2")
    _check_strict(z, strict)
    if any(abs(v) >= 1.0 for v in z):
        raise DomainError("fa_decomposed needs |z_k| < 1 for every k")
    n = params.n
    inner = ctl.tightened()
    factors = [
        _FactorCache(lambda A, B, k=k: gauss_2f1_batch(
            params.a + A, params.b[k] + B, params.c[k] + B, z[k], inner))
        for k in range(n)
    ]
    coef = _lemma1_coef(params, z, ctl.max_weight + 1)
    total, mon, used, stopped, ierr, iok = triangular_sum(n, ctl, coef, factors)
    return finalize(total, mon.est, ierr, used, stopped, ctl, iok)


def decomposed_shell_terms(params: LauricellaParams, z, weight: int,
                           ctl: SeriesControl = DEFAULT_CONTROL):
    """Individual terms of the triangular decomposition at one total weight.

    Returns (entry_matrix, A, B, terms) in enumeration order.
    """
    z = _as_args(params, z)
    n = params.n
    ma, mb = weight_matrices(n)
    E = shell_array(n, weight)
    A, B = E @ ma, E @ mb
    logs, signs = _lemma1_coef(params, z, weight + 1)(E, A, B)
    terms = signs * np.exp(logs)
    for k in range(n):
        v, _, _ = gauss_2f1_batch(params.a + A[:, k], params.b[k] + B[:, k],
                                  params.c[k] + B[:, k], z[k], ctl.tightened())
        terms = terms * v
    return E, A, B, terms


# ----------------------------------------------- transformed (left-shifted) form

def _check_t(params, t):
    t = _as_args(params, t, "t")
    for k, v in enumerate(t, 1):
        if not 0.0 < v <= 1.0:
            raise DomainError(f"t_{k} = {v!r} must lie in (0, 1]")
    return t


def left_shifted_series(params: LauricellaParams, t, ctl: SeriesControl = DEFAULT_CONTROL
                        ) -> EvalResult:
    """prod_k t_k^(-b_k) F_A(a, b; c; 1 - 1/t_1, ..., 1 - 1/t_n).

    Every inner Gauss factor F(a + A, b_k + B; c_k + B; 1 - 1/t_k) is
    rewritten by the autotransformation as
    t_k^(b_k + B) F(c_k - a + B - A, b_k + B; c_k + B; 1 - t_k),
    so all inner arguments lie in [0, 1).
    """
    t = _check_t(params, t)
    n = params.n
    inner = ctl.tightened()
    if n == 1:
        return gauss_2f1(params.c[0] - params.a, params.b[0], params.c[0], 1.0 - t[0], ctl)
    factors = [
        _FactorCache(lambda A, B, k=k: gauss_2f1_batch(
            params.c[k] - params.a + B - A, params.b[k] + B, params.c[k] + B,
            1.0 - t[k], inner))
        for k in range(n)
    ]
    coef = _lemma1_coef(params, [v - 1.0 for v in t], ctl.max_weight + 1)
    total, mon, used, stopped, ierr, iok = triangular_sum(n, ctl, coef, factors)
    return finalize(total, mon.est, ierr, used, stopped, ctl, iok)


def fa_left_shifted(params: LauricellaParams, t, ctl: SeriesControl = DEFAULT_CONTROL
                    ) -> EvalResult:
    """F_A^(n)(a, b; c; 1 - 1/t_1, ..., 1 - 1/t_n) for 0 < t_k <= 1."""
    t = _check_t(params, t)
    pref = math.prod(tk ** bk for tk, bk in zip(t, params.b))
    return left_shifted_series(params, t, ctl).scaled(pref)
