"""Exact PnL accounting and delayed-execution dominance simulation."""

from ._core import (
    Order,
    Side,
    default_config,
    delay_eligible,
    estimate_hitting_time,
    execution_ready,
    gravity_center,
    match_lots,
    minmax,
    pnl_decomposed,
    pnl_direct,
    pnl_via_position,
    price_to_currency,
    run_simulation,
    side_sign,
    verify_run,
)

__all__ = [
    "Order",
    "Side",
    "default_config",
    "delay_eligible",
    "estimate_hitting_time",
    "execution_ready",
    "gravity_center",
    "match_lots",
    "minmax",
    "pnl_decomposed",
    "pnl_direct",
    "pnl_via_position",
    "price_to_currency",
    "run_simulation",
    "side_sign",
    "verify_run",
]
