"""Fundamental solutions of the singular elliptic operator

    L u = sum_{i=1}^m u_{x_i x_i} + sum_{j=1}^n (2 alpha_j / x_j) u_{x_j}

on the region x_1 > 0, ..., x_n > 0, and a finite-difference residual check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateGeometryError, ParameterError, PoleError
from .fa import LauricellaParams, fa_left_shifted
from .series import DEFAULT_CONTROL, EvalResult, SeriesControl
from .special import is_nonpositive_integer, log_gamma


@dataclass(frozen=True)
class SingularPdeConfig:
    m: int
    n: int
    alpha: tuple[float, ...] = ()

    def __post_init__(self):
        alpha = tuple(float(v) for v in np.atleast_1d(self.alpha)) if self.n else ()
        object.__setattr__(self, "alpha", alpha)
        if int(self.m) != self.m or self.m < 2:
            raise ParameterError(f"dimension m must be an integer >= 2, got {self.m!r}")
        if int(self.n) != self.n or not 0 <= self.n <= self.m:
            raise ParameterError(f"need 0 <= n <= m, got n = {self.n!r}, m = {self.m!r}")
        if len(alpha) != self.n:
            raise ParameterError(f"expected {self.n} alpha values, got {len(alpha)}")
        for j, a in enumerate(alpha, 1):
            if not 0.0 < 2.0 * a < 1.0:
                raise ParameterError(f"alpha_{j} = {a!r} violates 0 < 2 alpha < 1")

    def check_k(self, k: int) -> int:
        if int(k) != k or not 0 <= k <= self.n:
            raise ParameterError(f"k must be an integer in [0, {self.n}], got {k!r}")
        return int(k)


@dataclass(frozen=True)
class PointPair:
    x: tuple[float, ...]
    xi: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        object.__setattr__(self, "xi", tuple(float(v) for v in self.xi))
        if len(self.x) != len(self.xi):
            raise ParameterError("x and xi must have the same length")

    def validate(self, cfg: SingularPdeConfig) -> "PointPair":
        if len(self.x) != cfg.m:
            raise ParameterError(f"points must have m = {cfg.m} coordinates, got {len(self.x)}")
        for j in range(cfg.n):
            if not (self.x[j] > 0 and self.xi[j] > 0):
                raise DegenerateGeometryError(
                    f"coordinate {j + 1} of both points must be positive")
        if self.r2 == 0.0:
            raise DegenerateGeometryError("x and xi coincide")
        return self

    @property
    def r2(self) -> float:
        return math.fsum((a - b) ** 2 for a, b in zip(self.x, self.xi))

    def r2_reflected(self, k: int) -> float:
        """r^2 with the k-th (1-based) difference replaced by x_k + xi_k."""
        return math.fsum((a + b) ** 2 if i == k - 1 else (a - b) ** 2
                         for i, (a, b) in enumerate(zip(self.x, self.xi)))

    def swapped(self) -> "PointPair":
        return PointPair(self.xi, self.x)


def alpha_bar(cfg: SingularPdeConfig, k: int) -> float:
    """m/2 + k - 1 - sum_{i<=k} alpha_i + sum_{i>k} alpha_i."""
    k = cfg.check_k(k)
    value = cfg.m / 2 + k - 1 - math.fsum(cfg.alpha[:k]) + math.fsum(cfg.alpha[k:])
    if value <= 0:
        raise PoleError(f"alpha_bar_{k} = {value!r} is not positive")
    return value


def gamma_coeff(cfg: SingularPdeConfig, k: int) -> float:
    """Normalising constant gamma_k, assembled in log space."""
    k = cfg.check_k(k)
    m = cfg.m
    if is_nonpositive_integer(cfg.m / 2 + k - 1 - math.fsum(cfg.alpha[:k])
                              + math.fsum(cfg.alpha[k:])):
        raise PoleError(f"Gamma(alpha_bar_{k}) has a pole (m = {m}, n = {cfg.n})")
    ab = alpha_bar(cfg, k)
    lg = (2 * ab - m) * math.log(2.0) + log_gamma(ab)[0] - (m / 2) * math.log(math.pi)
    for a in cfg.alpha[k:]:
        lg += log_gamma(a)[0] - log_gamma(2 * a)[0]
    for a in cfg.alpha[:k]:
        lg += log_gamma(1 - a)[0] - log_gamma(2 - 2 * a)[0]
    return math.exp(lg)


def sigma_args(pp: PointPair, cfg: SingularPdeConfig) -> tuple[np.ndarray, np.ndarray]:
    """Return (sigma, t) with sigma_k = 1 - r_k^2 / r^2 and t_k = r^2 / r_k^2.

    sigma_k <= 0 on the admissible region; sigma/(sigma - 1) = 1 - t.
    """
    pp.validate(cfg)
    r2 = pp.r2
    rk2 = np.array([pp.r2_reflected(k) for k in range(1, cfg.n + 1)])
    return 1.0 - rk2 / r2, r2 / rk2


def _fa_params(cfg, k):
    al = cfg.alpha
    b = tuple(1 - a for a in al[:k]) + tuple(al[k:])
    c = tuple(2 - 2 * a for a in al[:k]) + tuple(2 * a for a in al[k:])
    return LauricellaParams(alpha_bar(cfg, k), b, c)


def fundamental_solution(cfg: SingularPdeConfig, k: int, pp: PointPair,
                         ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """q_k(x, xi) = gamma_k prod_{i<=k} (x_i xi_i)^(1-2 alpha_i) r^(-2 alpha_bar_k) F_A(...; sigma).

    The F_A factor has nonpositive arguments and is evaluated through
    autotransformed inner Gauss factors at 1 - t_k in [0, 1).
    """
    k = cfg.check_k(k)
    _, t = sigma_args(pp, cfg)
    ab = alpha_bar(cfg, k)
    pref = gamma_coeff(cfg, k) * pp.r2 ** (-ab)
    for i in range(k):
        pref *= (pp.x[i] * pp.xi[i]) ** (1 - 2 * cfg.alpha[i])
    if cfg.n == 0:
        return EvalResult(pref, 0.0, 0, True)
    return fa_left_shifted(_fa_params(cfg, k), t, ctl).scaled(pref)


RESIDUAL_TOL_CAP = 1e-12


def pde_residual(cfg: SingularPdeConfig, k: int, x, xi, h: float = 1e-3,
                 ctl: SeriesControl = DEFAULT_CONTROL, order: int = 4) -> float:
    """|L q_k|(x) / sum_i |d^2 q_k / dx_i^2|(x) by central differences.

    The step along x_i is h (1 + |x_i|). ``order`` selects the 3-point
    (2) or 5-point (4) central stencil; first and second derivatives always
    share the same stencil. x must stay 10 steps away from the singular
    hyperplanes and from xi.
    """
    k = cfg.check_k(k)
    if not h > 0:
        raise ParameterError(f"step h must be positive, got {h!r}")
    if order not in (2, 4):
        raise ParameterError(f"stencil order must be 2 or 4, got {order!r}")
    x = np.asarray(x, dtype=float)
    pp = PointPair(tuple(x), tuple(xi)).validate(cfg)
    steps = h * (1.0 + np.abs(x))
    for j in range(cfg.n):
        if x[j] < 10 * steps[j]:
            raise DegenerateGeometryError(
                f"x_{j + 1} = {x[j]!r} is closer than 10 steps to the singular hyperplane")
    if math.sqrt(pp.r2) < 10 * float(steps.max()):
        raise DegenerateGeometryError("x is closer than 10 steps to the source point")
    if ctl.rel_tol > RESIDUAL_TOL_CAP:
        ctl = replace(ctl, rel_tol=RESIDUAL_TOL_CAP)

    def q(point):
        return fundamental_solution(cfg, k, PointPair(tuple(point), pp.xi), ctl).value

    q0 = q(x)
    lap = 0.0
    scale = 0.0
    drift = 0.0
    for i in range(cfg.m):
        e = np.zeros(cfg.m)
        e[i] = s = steps[i]
        q1p, q1m = q(x + e), q(x - e)
        if order == 2:
            d2 = (q1p - 2 * q0 + q1m) / s ** 2
            d1 = (q1p - q1m) / (2 * s)
        else:
            q2p, q2m = q(x + 2 * e), q(x - 2 * e)
            d2 = (-q2p + 16 * q1p - 30 * q0 + 16 * q1m - q2m) / (12 * s ** 2)
            d1 = (-q2p + 8 * q1p - 8 * q1m + q2m) / (12 * s)
        lap += d2
        scale += abs(d2)
        if i < cfg.n:
            drift += 2 * cfg.alpha[i] / x[i] * d1
    if scale == 0.0:
        raise DegenerateGeometryError("second differences vanish; residual undefined")
    return float(abs(lap + drift) / scale)
