"""Recombining geometric binomial trees.

Levels are stored as flat numpy arrays ordered top (all up-moves) to
bottom (all down-moves), the way the tree is usually tabulated: entry
``i`` of level ``k`` is the node reached by ``k - i`` up-moves and ``i``
down-moves. Use :meth:`Lattice.node` to address nodes by up-move count.
"""
from __future__ import annotations

import warnings
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import binom

from . import payoff_expr
from .errors import (
    ArbitrageError,
    NonHomotheticPayoffError,
    StructuralError,
    UnsupportedConfigurationError,
)


class EmptyScheduleWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TreeSpec:
    x0: float
    u: float
    d: float
    steps: int
    step_df: float | Sequence[float] = 1.0
    real_world_p: float | None = None  # reporting only, never used for pricing

    def __post_init__(self) -> None:
        if int(self.steps) != self.steps or self.steps < 1:
            raise StructuralError(f"steps must be a positive integer, got {self.steps}")
        if self.u == self.d:
            raise StructuralError("degenerate tree: u == d")
        if self.u < self.d:
            raise StructuralError(
                f"up factor {self.u} is below down factor {self.d}; "
                "martingale probabilities would be quoted for mislabelled states"
            )
        if not self.d > 0:
            raise StructuralError(f"down factor must be positive, got {self.d}")
        dfs = self.discount_schedule
        if dfs.shape != (self.steps,):
            raise StructuralError(
                f"discount schedule has {dfs.size} entries, expected {self.steps}"
            )
        if not np.all(dfs > 0):
            raise StructuralError("discount factors must be positive")
        if self.real_world_p is not None and not 0.0 <= self.real_world_p <= 1.0:
            raise StructuralError("real_world_p must lie in [0, 1]")

    @property
    def discount_schedule(self) -> np.ndarray:
        if np.ndim(self.step_df) == 0:
            return np.full(int(self.steps), float(self.step_df))
        return np.asarray(self.step_df, dtype=float)

    @property
    def constant_df(self) -> bool:
        dfs = self.discount_schedule
        return bool(np.all(dfs == dfs[0]))

    def step_probs(self) -> np.ndarray:
        """Martingale up-probability for each step, ``(1/df - d) / (u - d)``."""
        p = (1.0 / self.discount_schedule - self.d) / (self.u - self.d)
        bad = (p < 0.0) | (p > 1.0)
        if np.any(bad):
            k = int(np.argmax(bad))
            raise ArbitrageError(f"martingale probability outside [0, 1] at step {k + 1}", float(p[k]))
        return p


@dataclass
class Lattice:
    levels: list[np.ndarray]

    def __post_init__(self) -> None:
        for k, level in enumerate(self.levels):
            if len(level) != k + 1:
                raise StructuralError(f"level {k} has {len(level)} entries, expected {k + 1}")

    @property
    def steps(self) -> int:
        return len(self.levels) - 1

    def node(self, k: int, j: int) -> float:
        """Value at level ``k`` after ``j`` up-moves."""
        return float(self.levels[k][k - j])

    @property
    def root(self) -> float:
        return float(self.levels[0][0])

    @property
    def terminal(self) -> np.ndarray:
        return self.levels[-1]


@dataclass(frozen=True)
class TerminalDistribution:
    values: np.ndarray  # top-down
    probabilities: np.ndarray
    up_moves: np.ndarray = field(repr=False)

    def expectation(self, payoff_values) -> float:
        return float(np.dot(self.probabilities, payoff_values))

    @property
    def outcomes(self) -> list[tuple[float, float]]:
        return list(zip(self.values.tolist(), self.probabilities.tolist()))


def _level_values(x0: float, u: float, d: float, k: int) -> np.ndarray:
    ups = np.arange(k, -1, -1)
    return x0 * np.power(u, ups) * np.power(d, k - ups)


def build_lattice(spec: TreeSpec) -> Lattice:
    return Lattice([_level_values(spec.x0, spec.u, spec.d, k) for k in range(spec.steps + 1)])


def terminal_values(spec: TreeSpec) -> np.ndarray:
    return _level_values(spec.x0, spec.u, spec.d, spec.steps)


def mma_discount(schedule) -> float:
    """Total discount factor ``1/B_T`` from per-step factors ``1/(1 + r_i tau)``."""
    dfs = np.atleast_1d(np.asarray(schedule, dtype=float))
    if dfs.size == 0:
        warnings.warn("empty discount schedule; using 1", EmptyScheduleWarning, stacklevel=2)
        return 1.0
    if not np.all(dfs > 0):
        raise StructuralError("discount factors must be positive")
    return float(np.prod(dfs))


def forward_induction(spec: TreeSpec) -> TerminalDistribution:
    """Terminal Binomial(n, p) masses under the martingale measure."""
    if not spec.constant_df:
        raise UnsupportedConfigurationError(
            "forward induction needs the same martingale probability at every step; "
            "use backward_induction for a varying discount schedule"
        )
    p = float(spec.step_probs()[0])
    n = spec.steps
    ups = np.arange(n, -1, -1)
    probs = binom.pmf(ups, n, p)
    return TerminalDistribution(terminal_values(spec), probs, ups)


def real_world_distribution(spec: TreeSpec) -> TerminalDistribution:
    if spec.real_world_p is None:
        raise ValueError("spec carries no real-world probability")
    n = spec.steps
    ups = np.arange(n, -1, -1)
    return TerminalDistribution(terminal_values(spec), binom.pmf(ups, n, spec.real_world_p), ups)


def _payoff_values(spec: TreeSpec, payoff) -> np.ndarray:
    xs = terminal_values(spec)
    if isinstance(payoff, (payoff_expr.Literal, payoff_expr.Var, payoff_expr.BinOp, payoff_expr.Call)):
        return payoff_expr.evaluate(payoff, xs)
    if isinstance(payoff, str):
        return payoff_expr.evaluate(payoff_expr.parse(payoff), xs)
    if callable(payoff):
        return np.asarray(payoff(xs), dtype=float)
    vals = np.asarray(payoff, dtype=float)
    if vals.shape != xs.shape:
        raise StructuralError(f"expected {xs.size} terminal payoffs, got {vals.size}")
    return vals


def backward_induction(spec: TreeSpec, terminal_payoffs) -> tuple[float, Lattice]:
    """Roll terminal payoffs back to the root, keeping every level.

    Each interior node is ``df_k * (p_k * up_child + (1 - p_k) * down_child)``
    with ``p_k`` recomputed from the discount factor of step ``k``.
    """
    vals = np.asarray(terminal_payoffs, dtype=float)
    if vals.shape != (spec.steps + 1,):
        raise StructuralError(f"expected {spec.steps + 1} terminal payoffs, got {vals.size}")
    probs = spec.step_probs()
    dfs = spec.discount_schedule
    levels = [vals]
    for k in range(spec.steps - 1, -1, -1):
        vals = dfs[k] * (probs[k] * vals[:-1] + (1.0 - probs[k]) * vals[1:])
        levels.append(vals)
    levels.reverse()
    return float(levels[0][0]), Lattice(levels)


def rollback(spec: TreeSpec, terminal_payoffs) -> float:
    """Root value only, in O(n) working memory."""
    vals = np.array(terminal_payoffs, dtype=float)
    if vals.shape != (spec.steps + 1,):
        raise StructuralError(f"expected {spec.steps + 1} terminal payoffs, got {vals.size}")
    probs = spec.step_probs()
    dfs = spec.discount_schedule
    for k in range(spec.steps - 1, -1, -1):
        m = k + 1
        vals[:m] = dfs[k] * (probs[k] * vals[:m] + (1.0 - probs[k]) * vals[1 : m + 1])
    return float(vals[0])


def expected_payoff(spec: TreeSpec, payoff) -> float:
    """Undiscounted martingale expectation of the terminal payoff."""
    return forward_induction(spec).expectation(_payoff_values(spec, payoff))


def price_forward(spec: TreeSpec, payoff) -> float:
    """Discounted expectation over the terminal Binomial distribution.

    ``payoff`` is a parsed expression, expression text, a callable of the
    terminal prices, or a sequence of terminal payoffs ordered top-down.
    """
    return mma_discount(spec.discount_schedule) * expected_payoff(spec, payoff)


def price_backward(spec: TreeSpec, payoff) -> float:
    return rollback(spec, _payoff_values(spec, payoff))


def numeraire_tree_price(
    x0: float,
    y0: float,
    u: float,
    d: float,
    steps: int,
    payoff: payoff_expr.Node | str | Callable,
) -> float:
    """Price a homothetic claim on (X, Y) on a tree for the ratio W = X/Y.

    ``u`` and ``d`` are the per-step factors of W. With Y as numeraire W is
    a martingale and no discounting is needed, so the price is
    ``y0 * E^Y[V_T / Y_T]`` with ``V/Y = f(W, 1)``. Expression payoffs are
    checked for homotheticity before any tree work is done.
    """
    if isinstance(payoff, str):
        payoff = payoff_expr.parse(payoff)
    if callable(payoff):
        ratio_payoff = lambda w: np.asarray(payoff(w, np.ones_like(w)), dtype=float)  # noqa: E731
    else:
        verdict = payoff_expr.check_homothetic(payoff)
        if not verdict.is_homothetic:
            raise NonHomotheticPayoffError(
                f"payoff {payoff_expr.render(payoff)!r} is {verdict.verdict.value}; "
                "two-asset replication weights are undefined"
            )
        ratio_payoff = lambda w: payoff_expr.evaluate(payoff, w, np.ones_like(w))  # noqa: E731
    spec = TreeSpec(x0 / y0, u, d, steps, 1.0)
    return y0 * price_forward(spec, ratio_payoff)
