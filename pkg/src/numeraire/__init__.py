"""Binomial-tree and change-of-numeraire pricing, up to the exchange-option formula."""

from .analytic import (
    ExchangeOptionInputs,
    LognormalLaw,
    MomentSpec,
    black_scholes_call,
    exchange_delta,
    exchange_put,
    exchange_tree_price,
    finite_n_moment,
    limit_moment,
    lognormal_law,
    margrabe_price,
    moment_relation_residual,
    norm_cdf,
    symmetric_tree_factors,
    tree_moment,
)
from .errors import (
    ArbitrageError,
    ConfigurationError,
    NonHomotheticPayoffError,
    PayoffEvaluationError,
    PayoffSyntaxError,
    PricingError,
    StructuralError,
    UnsupportedConfigurationError,
)
from .lattice import (
    Lattice,
    TerminalDistribution,
    TreeSpec,
    backward_induction,
    build_lattice,
    expected_payoff,
    forward_induction,
    mma_discount,
    numeraire_tree_price,
    price_backward,
    price_forward,
)
from .one_period import (
    BinaryClaim,
    OneStepMarket,
    TwoAssetOneStep,
    martingale_probs,
    price_one_step,
    replication_weights,
    two_asset_price,
    two_asset_probs,
    two_asset_replication,
)
from .payoff_expr import check_homothetic, evaluate, parse, render

__version__ = "0.1.0"
