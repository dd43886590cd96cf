"""Continuum limit of the symmetric ratio tree and the exchange-option formula.

Everything here is expressed in terms of the ratio ``W = X/Y`` and its
lognormal volatility ``sigma``. Two pricing measures appear: the one using
Y as numeraire (``"Y"``), under which W is a martingale, and the one using
X (``"X"``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal as Lit

import numpy as np
from scipy.stats import binom

from . import lattice, payoff_expr
from .errors import ConfigurationError, NonHomotheticPayoffError
from .one_period import TwoAssetOneStep, two_asset_probs

Measure = Lit["X", "Y"]


@dataclass(frozen=True, slots=True)
class MomentSpec:
    lam: float
    sigma: float
    maturity: float
    steps: int = 1
    measure: Measure = "Y"
    x0: float = 1.0
    y0: float = 1.0

    def __post_init__(self) -> None:
        if self.sigma < 0 or self.maturity < 0:
            raise ConfigurationError("sigma and maturity must be non-negative")
        if self.steps < 1:
            raise ConfigurationError("steps must be at least 1")
        if self.measure not in ("X", "Y"):
            raise ConfigurationError(f"unknown measure {self.measure!r}")


@dataclass(frozen=True, slots=True)
class LognormalLaw:
    mean_log: float
    var_log: float

    def pdf(self, z):
        return np.exp(-0.5 * (z - self.mean_log) ** 2 / self.var_log) / np.sqrt(
            2 * np.pi * self.var_log
        )

    def mgf(self, lam: float) -> float:
        return math.exp(self.mean_log * lam + 0.5 * self.var_log * lam * lam)


@dataclass(frozen=True, slots=True)
class ExchangeOptionInputs:
    x0: float
    y0: float
    sigma: float
    maturity: float

    def __post_init__(self) -> None:
        if not (self.x0 > 0 and self.y0 > 0):
            raise ConfigurationError("x0 and y0 must be positive")
        if self.sigma < 0 or self.maturity < 0:
            raise ConfigurationError("sigma and maturity must be non-negative")

    @property
    def total_vol(self) -> float:
        return self.sigma * math.sqrt(self.maturity)


def symmetric_tree_factors(sigma: float, maturity: float, steps: int) -> tuple[float, float]:
    """``u, d = 1 +/- sigma*sqrt(T/n)``, giving a Y-measure up-probability of 1/2.

    ``sigma == 0`` returns the degenerate pair ``(1.0, 1.0)``; callers that
    build a tree from it must treat it as the deterministic case.
    """
    h = sigma * math.sqrt(maturity / steps)
    if h >= 1.0:
        raise ConfigurationError(
            f"step too coarse: sigma*sqrt(T/n) = {h:.6g} >= 1 makes the down factor non-positive"
        )
    return 1.0 + h, 1.0 - h


def _half_sum_minus_one(lam: float, h: float) -> float:
    # ((1+h)^lam + (1-h)^lam)/2 - 1 = sum over even k >= 2 of C(lam, k) h^k.
    # The series is exact (terminates) for non-negative integer lam and
    # avoids cancellation when h is small.
    if h == 0.0:
        return 0.0
    if h > 0.5:
        return 0.5 * (math.pow(1.0 + h, lam) + math.pow(1.0 - h, lam)) - 1.0
    coef = 1.0  # C(lam, k)
    total = 0.0
    h2 = h * h
    hk = 1.0
    for k in range(1, 4000):
        coef *= (lam - (k - 1)) / k
        if k % 2:
            continue
        hk *= h2
        term = coef * hk
        total += term
        if coef == 0.0 or abs(term) <= 1e-18 * abs(total):
            break
    return total


def finite_n_moment(ms: MomentSpec) -> float:
    """``(x0/y0)^lam * ((u^lam + d^lam)/2)^n`` on the symmetric ratio tree.

    Only the Y measure is supported: there the up-probability is exactly 1/2
    and the correction term ``(p - 1/2)(u^lam - d^lam)`` vanishes. The
    power is taken in log space so that n up to 1e6 neither overflows nor
    underflows.
    """
    if ms.measure != "Y":
        raise ConfigurationError("finite_n_moment is defined on the Y-numeraire tree; use tree_moment")
    u, _ = symmetric_tree_factors(ms.sigma, ms.maturity, ms.steps)
    c = _half_sum_minus_one(ms.lam, u - 1.0)
    growth = 1.0 if c == 0.0 else math.exp(ms.steps * math.log1p(c))
    return (ms.x0 / ms.y0) ** ms.lam * growth


def limit_moment(ms: MomentSpec) -> float:
    """Continuum limit of ``E[(X_T/Y_T)^lam]`` under the chosen numeraire."""
    shift = -1.0 if ms.measure == "Y" else 1.0
    lam = ms.lam
    return (ms.x0 / ms.y0) ** lam * math.exp(lam * (lam + shift) * ms.sigma**2 * ms.maturity / 2)


def normalized_moment(lam: float, sigma: float, maturity: float, measure: Measure) -> float:
    """``M(lam)``: the limit moment with the ``(x0/y0)^lam`` prefactor removed."""
    return limit_moment(MomentSpec(lam, sigma, maturity, measure=measure))


def moment_relation_residual(lam: float, sigma: float, maturity: float) -> float:
    """``|M^X(lam) - M^Y(lam + 1)|``, evaluated from the two closed forms independently."""
    return abs(
        normalized_moment(lam, sigma, maturity, "X")
        - normalized_moment(lam + 1.0, sigma, maturity, "Y")
    )


def tree_measure_probs(u: float, d: float) -> dict[str, float]:
    """Per-step up-probabilities of the ratio tree under each numeraire.

    Both come from the one-period two-asset formula: with Y as numeraire the
    traded ratio is ``X/Y``; with X as numeraire it is ``Y/X``, whose "up"
    state is the one in which X/Y falls.
    """
    p_y = two_asset_probs(TwoAssetOneStep(1.0, 1.0, u, d, 1.0, 1.0))
    # In Y/X terms the W-up state is the lower one, hence the swap.
    p_x = two_asset_probs(TwoAssetOneStep(1.0, 1.0, 1.0 / d, 1.0 / u, 1.0, 1.0))
    return {"Y": p_y, "X": 1.0 - p_x}


def tree_moment(lam: float, u: float, d: float, steps: int, measure: Measure) -> float:
    """``M(lam)`` on an n-step ratio tree by direct summation over terminal nodes."""
    p = tree_measure_probs(u, d)[measure]
    j = np.arange(steps + 1)
    w = np.power(u, j) * np.power(d, steps - j)
    return float(np.sum(binom.pmf(j, steps, p) * np.power(w, lam)))


def lognormal_law(measure: Measure, x0: float, y0: float, sigma: float, maturity: float) -> LognormalLaw:
    """Distribution of ``ln(X_T/Y_T)`` under the chosen numeraire."""
    v = sigma * sigma * maturity
    shift = -0.5 * v if measure == "Y" else 0.5 * v
    return LognormalLaw(math.log(x0 / y0) + shift, v)


def norm_cdf(z: float) -> float:
    """Standard normal CDF through the complementary error function."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def margrabe_price(inp: ExchangeOptionInputs) -> tuple[float, float, float]:
    """Value of ``max(X_T - Y_T, 0)``: returns ``(call, d_plus, d_minus)``.

    When ``sigma*sqrt(T)`` is zero the payoff is deterministic and ``d_plus``,
    ``d_minus`` are returned as signed infinities (0 at the money).
    """
    s = inp.total_vol
    log_m = math.log(inp.x0 / inp.y0)
    if s == 0.0:
        dd = 0.0 if log_m == 0.0 else math.copysign(math.inf, log_m)
        return max(inp.x0 - inp.y0, 0.0), dd, dd
    d_plus = (log_m + 0.5 * s * s) / s
    d_minus = (log_m - 0.5 * s * s) / s
    call = inp.x0 * norm_cdf(d_plus) - inp.y0 * norm_cdf(d_minus)
    return call, d_plus, d_minus


def exchange_put(inp: ExchangeOptionInputs) -> float:
    """Value of ``max(Y_T - X_T, 0)``."""
    _, d_plus, d_minus = margrabe_price(inp)
    if inp.total_vol == 0.0:
        return max(inp.y0 - inp.x0, 0.0)
    return inp.y0 * norm_cdf(-d_minus) - inp.x0 * norm_cdf(-d_plus)


def exchange_delta(inp: ExchangeOptionInputs) -> tuple[float, float]:
    """Sensitivities of the call to ``x0`` and ``y0``: ``(Phi(d+), -Phi(d-))``."""
    _, d_plus, d_minus = margrabe_price(inp)
    return norm_cdf(d_plus), -norm_cdf(d_minus)


def black_scholes_call(spot: float, strike: float, rate: float, sigma: float, maturity: float) -> float:
    """European call on a non-dividend stock: the exchange option against cash."""
    y0 = strike * math.exp(-rate * maturity)
    if y0 == 0.0:
        return float(spot)
    return margrabe_price(ExchangeOptionInputs(spot, y0, sigma, maturity))[0]


def exchange_tree_price(inp: ExchangeOptionInputs, steps: int, payoff="max(X - Y, 0)") -> float:
    """Homothetic claim (default: the exchange option) on the symmetric ratio tree."""
    if inp.total_vol == 0.0:
        # X/Y never moves, so the payoff is known today
        node = payoff_expr.parse(payoff) if isinstance(payoff, str) else payoff
        if not payoff_expr.check_homothetic(node).is_homothetic:
            raise NonHomotheticPayoffError(f"payoff {payoff_expr.render(node)!r} is not homothetic")
        return payoff_expr.evaluate(node, inp.x0, inp.y0)
    u, d = symmetric_tree_factors(inp.sigma, inp.maturity, steps)
    return lattice.numeraire_tree_price(inp.x0, inp.y0, u, d, steps, payoff)
