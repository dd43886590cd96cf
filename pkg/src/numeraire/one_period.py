"""One-period replication with cash or with a second risky asset as numeraire."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ArbitrageError, StructuralError


@dataclass(frozen=True, slots=True)
class OneStepMarket:
    x_fwd: float  # forward price of X for delivery at the end of the period
    x_up: float
    x_dn: float
    df: float = 1.0  # discount factor over the period

    def __post_init__(self) -> None:
        if self.x_up == self.x_dn:
            raise StructuralError("degenerate market: x_up == x_dn")
        if not self.df > 0:
            raise StructuralError(f"discount factor must be positive, got {self.df}")


@dataclass(frozen=True, slots=True)
class TwoAssetOneStep:
    x0: float
    y0: float
    x_up: float
    x_dn: float
    y_up: float
    y_dn: float

    def __post_init__(self) -> None:
        if not (self.y0 > 0 and self.y_up > 0 and self.y_dn > 0):
            raise StructuralError("numeraire Y must be strictly positive in every state")
        if self.w_up == self.w_dn:
            raise StructuralError("degenerate market: X/Y identical in both states")

    @property
    def w0(self) -> float:
        return self.x0 / self.y0

    @property
    def w_up(self) -> float:
        return self.x_up / self.y_up

    @property
    def w_dn(self) -> float:
        return self.x_dn / self.y_dn


@dataclass(frozen=True, slots=True)
class BinaryClaim:
    v_up: float
    v_dn: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.v_up) and math.isfinite(self.v_dn)):
            raise ValueError("claim payoffs must be finite")


def _check_probability(p: float, what: str) -> float:
    if not 0.0 <= p <= 1.0:
        side = "buying" if p > 1.0 else "shorting"
        raise ArbitrageError(f"{what} outside [0, 1]: riskfree profit from {side} the asset", p)
    return p


def martingale_probs(m: OneStepMarket) -> tuple[float, float]:
    """Return ``(p_up, p_dn)`` making the forward of X a martingale."""
    spread = m.x_up - m.x_dn
    p_up = _check_probability((m.x_fwd - m.x_dn) / spread, "martingale probability")
    return p_up, 1.0 - p_up


def replication_weights(m: OneStepMarket, c: BinaryClaim) -> tuple[float, float]:
    """Units of X and cash amount replicating ``c`` in both states.

    The cash leg is quoted in end-of-period currency, so today's value of
    the portfolio is ``df * (a_x * x_fwd + a_rf)``.
    """
    spread = m.x_up - m.x_dn
    a_x = (c.v_up - c.v_dn) / spread
    a_rf = (c.v_dn * m.x_up - c.v_up * m.x_dn) / spread
    return a_x, a_rf


def price_one_step(m: OneStepMarket, c: BinaryClaim) -> float:
    p_up, p_dn = martingale_probs(m)
    return m.df * (p_up * c.v_up + p_dn * c.v_dn)


def two_asset_probs(t: TwoAssetOneStep) -> float:
    """Up-probability under the measure that uses Y as numeraire."""
    return _check_probability(
        (t.w0 - t.w_dn) / (t.w_up - t.w_dn), "Y-numeraire martingale probability"
    )


def two_asset_replication(t: TwoAssetOneStep, c: BinaryClaim) -> tuple[float, float]:
    """Units ``(a_x, a_y)`` of X and Y replicating ``c``."""
    det = t.x_up * t.y_dn - t.x_dn * t.y_up
    a_x = (c.v_up * t.y_dn - c.v_dn * t.y_up) / det
    a_y = (c.v_dn * t.x_up - c.v_up * t.x_dn) / det
    return a_x, a_y


def two_asset_price(t: TwoAssetOneStep, c: BinaryClaim) -> float:
    """Price a claim on (X, Y) in units of Y, then convert back to currency.

    The caller is responsible for ``c`` being homothetic, i.e. ``V/Y`` being
    a function of ``X/Y``; otherwise the result is not a replication price.
    """
    p_y = two_asset_probs(t)
    return t.y0 * (p_y * (c.v_up / t.y_up) + (1.0 - p_y) * (c.v_dn / t.y_dn))
