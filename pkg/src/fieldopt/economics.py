"""Season cost/revenue closed forms and the piecewise per-round profit series.

Each activity cost is log-linear in the plant count n, cost(n) =
a * ln(n) + c * n, with activity-specific coefficients; selling earns
sell_price * n - sell_discount * ln(n) (bulk sales depress the unit value).
A season of T rounds pays seeding plus growing in round 1, growing in every
intermediate round, and collects sale revenue minus harvesting cost on the
surviving plants in round T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .scenario import EconomicParams, ValidationError


def _log_linear(log_coeff: float, linear_coeff: float, n: float) -> float:
    return log_coeff * math.log(n) + linear_coeff * n


def _check_count(n: float) -> None:
    if n < 1:
        raise ValidationError("invariant violated: n >= 1")


def seeding_cost(n: float, econ: EconomicParams) -> float:
    """Cost of seeding n plants."""
    _check_count(n)
    return _log_linear(econ.seed_per_plant, econ.seed_overhead_coeff, n)


def growing_cost(n: float, econ: EconomicParams) -> float:
    """Cost of growing n plants for one round."""
    _check_count(n)
    return _log_linear(econ.grow_per_plant, econ.grow_overhead_coeff, n)


def harvesting_cost(n: float, econ: EconomicParams) -> float:
    """Cost of harvesting n plants at the end of the season."""
    _check_count(n)
    return _log_linear(econ.harvest_per_plant, econ.harvest_overhead_coeff, n)


def sell_revenue(n: float, econ: EconomicParams) -> float:
    """Revenue from selling n plants; 0 for an empty harvest."""
    if n < 0:
        raise ValidationError("invariant violated: n >= 0")
    if n == 0:
        return 0.0
    return econ.sell_price * n - econ.sell_discount * math.log(n)


@dataclass(frozen=True)
class EconomicSeries:
    """Per-round economic output for t in [1, T] and its sum."""

    per_round_output: tuple[float, ...]
    total_profit: float


def economic_series(
    n_t: Sequence[float],
    econ: EconomicParams,
    n_initial: float | None = None,
    died_early: bool = False,
) -> EconomicSeries:
    """Piecewise season economics over the surviving-count series n_t.

    n_t[0] is the population in round 1 and n_t[-1] the sellable count at
    harvest. Round 1 pays seeding + growing, rounds 1 < t < T pay growing,
    round T earns sale revenue minus harvesting. Rounds where n_t < 1
    contribute 0 (nothing left to tend, harvest, or sell; also keeps the
    analytic route well defined when the removal bound exceeds N).
    died_early models sub-minimum spacing: the seeding cost of the initial
    population is lost and every later round outputs 0.
    """
    t_final = len(n_t)
    if t_final < 2:
        raise ValidationError("invariant violated: series covers t in [1, T], T >= 2")
    if n_initial is None:
        n_initial = n_t[0]

    if died_early:
        outputs = [-seeding_cost(n_initial, econ)] + [0.0] * (t_final - 1)
        return EconomicSeries(tuple(outputs), sum(outputs))

    outputs = []
    for t, n in enumerate(n_t, start=1):
        if n < 1:
            outputs.append(0.0)
        elif t == 1:
            outputs.append(-seeding_cost(n, econ) - growing_cost(n, econ))
        elif t < t_final:
            outputs.append(-growing_cost(n, econ))
        else:
            outputs.append(sell_revenue(n, econ) - harvesting_cost(n, econ))
    return EconomicSeries(tuple(outputs), sum(outputs))
