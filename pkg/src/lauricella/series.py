"""Truncation policy, result container and tail estimators for graded series."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import ParameterError


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy shared by every series in the package.

    A series is summed degree block by degree block ("shells"). Summation
    stops once ``plateau`` consecutive shells have an estimated remainder
    below ``rel_tol`` times the running sum, or when ``max_weight`` is hit.
    """

    max_weight: int = 500
    rel_tol: float = 1e-12
    plateau: int = 3

    def __post_init__(self):
        if int(self.max_weight) != self.max_weight or self.max_weight < 1:
            raise ParameterError(f"max_weight must be an integer >= 1, got {self.max_weight!r}")
        if not 0.0 < self.rel_tol < 1.0:
            raise ParameterError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}")
        if int(self.plateau) != self.plateau or self.plateau < 1:
            raise ParameterError(f"plateau must be an integer >= 1, got {self.plateau!r}")

    def tightened(self, factor: float = 1e-2, floor: float = 1e-15) -> "SeriesControl":
        """Control for inner factors of a product-of-series sum."""
        return replace(self, rel_tol=max(self.rel_tol * factor, floor))


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class EvalResult:
    value: float
    est_error: float
    weight_used: int
    converged: bool

    def __float__(self):
        return float(self.value)

    @property
    def rel_error(self) -> float:
        if self.value == 0:
            return 0.0 if self.est_error == 0 else math.inf
        return self.est_error / abs(self.value)

    def scaled(self, factor: float) -> "EvalResult":
        return EvalResult(self.value * factor, self.est_error * abs(factor),
                          self.weight_used, self.converged)


def finalize(value: float, tail: float, extra_err: float, weight_used: int,
             stopped: bool, ctl: SeriesControl, inner_ok: bool = True) -> EvalResult:
    """Build an EvalResult whose ``converged`` flag honours the tolerance."""
    est = tail + extra_err
    ok = stopped and inner_ok and est <= ctl.rel_tol * abs(value)
    if value == 0 and est == 0:
        ok = stopped and inner_ok
    return EvalResult(float(value), float(est), int(weight_used), bool(ok))


class GeometricTail:
    """Plateau stopping rule with a geometric remainder estimate.

    ``ratio_floor`` is a known lower bound on the asymptotic shell ratio
    (e.g. the radius quantity of the series); using max(observed, floor)
    keeps the estimate on the safe side while the local ratio is still
    climbing toward its limit.
    """

    def __init__(self, ctl: SeriesControl, ratio_floor: float | None = None):
        self.ctl = ctl
        self.ratio_floor = ratio_floor if ratio_floor is not None and ratio_floor < 1 else None
        self.prev = None
        self.streak = 0
        self.est = math.inf

    def _tail(self, shell_abs: float) -> float:
        if shell_abs == 0.0:
            return 0.0
        if not self.prev:
            if self.ratio_floor is None:
                return math.inf
            q = self.ratio_floor
        else:
            q = shell_abs / self.prev
            if self.ratio_floor is not None:
                q = max(q, self.ratio_floor)
        if q >= 1.0:
            return math.inf
        return shell_abs * q / (1.0 - q)

    def update(self, shell_abs: float, total: float) -> bool:
        """Register one shell; True means stop."""
        self.est = self._tail(shell_abs)
        self.prev = shell_abs
        if self.est <= self.ctl.rel_tol * abs(total):
            self.streak += 1
        else:
            self.streak = 0
        return self.streak >= self.ctl.plateau


class PowerLawTail(GeometricTail):
    """Remainder estimate for shells decaying like w**(-p).

    The local exponent is fitted from shells w and 3w/4 and capped by
    ``exponent_hint`` (the smaller exponent gives the larger tail). The
    remainder sum_{j>w} C j**(-p) ~ s_w * w / (p - 1) is then inflated by
    ``safety``: multi-index sums mix several exponents, and the local fit
    drifts upward, which otherwise makes the estimate run 5-10% low.
    """

    def __init__(self, ctl: SeriesControl, exponent_hint: float, safety: float = 1.5):
        super().__init__(ctl)
        self.hint = exponent_hint
        self.safety = safety
        self.history: list[float] = []

    def _tail(self, shell_abs: float) -> float:
        w = len(self.history)
        self.history.append(shell_abs)
        if shell_abs == 0.0:
            return 0.0
        if w < 4:
            return math.inf
        w0 = (3 * w) // 4
        ref = self.history[w0]
        if ref <= 0.0:
            p = self.hint
        else:
            p = min(math.log(ref / shell_abs) / math.log(w / w0), self.hint)
        if p <= 1.0:
            return math.inf
        return self.safety * shell_abs * w / (p - 1.0)
