"""Stochastic agent-based epidemic engine on the plant lattice.

Plants move S -> I -> R in synchronous rounds. In each round, every plant
infected at the start of the round is removed with probability gamma, and
every susceptible plant j is infected with probability
1 - prod_i (1 - min(1, beta0 / d_ij)) over the start-of-round infected i
within the cutoff radius. Pairs with infection probability below epsilon_p
are skipped (cutoff radius beta0 / epsilon_p), which is what makes the
spatial index effective.

The RNG consumption order is part of the engine contract so trajectories
are reproducible: first one removal draw per start-of-round infected plant
in ascending index order, then one infection draw per susceptible plant
with positive combined probability in ascending index order. Zero infected
plants therefore consume zero infection draws.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .analytics import R0Series, r0_series
from .economics import EconomicSeries, economic_series
from .field import PlantGrid, lattice_capacity, layout_grid
from .scenario import PathogenParams, PlacementMode, Scenario, ValidationError
from .worstcase import kcenter_greedy


class Status(enum.IntEnum):
    SUSCEPTIBLE = 0
    INFECTED = 1
    REMOVED = 2


@dataclass(frozen=True)
class PlantState:
    """Per-plant view: epidemiological status and the round of infection
    (set exactly when the plant has ever been infected)."""

    status: Status
    infected_at: int | None


class PlantStates:
    """Mutable state arrays for the whole population."""

    __slots__ = ("status", "infected_at")

    def __init__(self, count: int):
        self.status = np.zeros(count, dtype=np.int8)
        self.infected_at = np.full(count, -1, dtype=np.int32)

    @property
    def count(self) -> int:
        return len(self.status)

    def infect(self, indices, round_index: int) -> None:
        self.status[indices] = Status.INFECTED
        self.infected_at[indices] = round_index

    def counts(self) -> tuple[int, int, int]:
        c = np.bincount(self.status, minlength=3)
        return int(c[Status.SUSCEPTIBLE]), int(c[Status.INFECTED]), int(c[Status.REMOVED])

    def plant(self, index: int) -> PlantState:
        at = int(self.infected_at[index])
        return PlantState(
            status=Status(int(self.status[index])),
            infected_at=at if at >= 0 else None,
        )

    def copy(self) -> "PlantStates":
        dup = PlantStates.__new__(PlantStates)
        dup.status = self.status.copy()
        dup.infected_at = self.infected_at.copy()
        return dup


@dataclass(frozen=True)
class EpidemicTrajectory:
    """S/I/R counts and surviving counts N_t for rounds t in [1, T]."""

    s_count: tuple[int, ...]
    i_count: tuple[int, ...]
    r_count: tuple[int, ...]
    n_t: tuple[int, ...]

    def __post_init__(self):
        total = self.s_count[0] + self.i_count[0] + self.r_count[0]
        series = (self.s_count, self.i_count, self.r_count, self.n_t)
        if len({len(s) for s in series}) != 1:
            raise ValidationError("invariant violated: equal series lengths")
        for t in range(len(self.s_count)):
            if self.s_count[t] + self.i_count[t] + self.r_count[t] != total:
                raise ValidationError("invariant violated: S+I+R constant")
            if t and self.r_count[t] < self.r_count[t - 1]:
                raise ValidationError("invariant violated: R non-decreasing")
            if self.n_t[t] != total - self.r_count[t]:
                raise ValidationError("invariant violated: n_t == N - R(t)")


@dataclass(frozen=True)
class SimulationResult:
    """One season: trajectory, priced economics, R0 series, and the
    initially infected plant indices (empty if the run died early)."""

    trajectory: EpidemicTrajectory
    economics: EconomicSeries
    r0: R0Series
    initial_infected: tuple[int, ...]
    died_early: bool

    @property
    def total_profit(self) -> float:
        return self.economics.total_profit

    @property
    def mean_r0(self) -> float:
        return self.r0.mean_r0


def pairwise_infection_prob(beta0: float, distance_m: float) -> float:
    """Infection probability between one infected/susceptible pair,
    min(1, beta0 / distance)."""
    if not 0.0 <= beta0 <= 1.0:
        raise ValidationError("invariant violated: 0 <= beta0 <= 1")
    if distance_m <= 0:
        raise ValidationError(
            "invariant violated: distance_m > 0 (co-located plants are a layout bug)"
        )
    return min(1.0, beta0 / distance_m)


def place_initial_infected(
    grid: PlantGrid, k: int, mode: PlacementMode, rng: np.random.Generator
) -> np.ndarray:
    """Indices of the k initially infected plants, ascending.

    Random mode draws k distinct indices uniformly from the RNG stream;
    WorstCase mode is the deterministic greedy k-center placement and
    consumes no draws.
    """
    if not 1 <= k <= grid.count:
        raise ValidationError(
            f"invariant violated: 1 <= k <= plant count ({grid.count})"
        )
    if mode is PlacementMode.WORST_CASE:
        return np.sort(np.asarray(kcenter_greedy(grid.positions, k), dtype=np.int64))
    return np.sort(rng.choice(grid.count, size=k, replace=False).astype(np.int64))


def _draw_infections(
    grid: PlantGrid,
    status: np.ndarray,
    infected: np.ndarray,
    params: PathogenParams,
    rng: np.random.Generator,
    epsilon_p: float,
) -> np.ndarray:
    if infected.size == 0 or params.beta0 <= 0.0:
        return np.empty(0, dtype=np.int64)
    cutoff = params.beta0 / epsilon_p if epsilon_p > 0 else math.inf
    survival = np.ones(grid.count)
    touched = np.zeros(grid.count, dtype=bool)
    for i in infected:
        idx, dist = grid.neighbor_arrays(int(i), cutoff)
        if idx.size == 0:
            continue
        p = np.minimum(1.0, params.beta0 / dist)
        survival[idx] *= 1.0 - p
        touched[idx] = True
    at_risk = touched & (status == Status.SUSCEPTIBLE) & (survival < 1.0)
    candidates = np.flatnonzero(at_risk)  # ascending: fixes the draw order
    if candidates.size == 0:
        return candidates
    return candidates[rng.random(candidates.size) < 1.0 - survival[candidates]]


def step(
    grid: PlantGrid,
    states: PlantStates,
    params: PathogenParams,
    rng: np.random.Generator,
    round_index: int = 1,
    *,
    epsilon_p: float = 1e-6,
    deterministic_duration: bool = False,
) -> PlantStates:
    """Advance one round in place (states is mutated and returned).

    Removal applies to the start-of-round infected set, so a plant infected
    this round is first eligible for removal next round. With
    deterministic_duration, infected plants are removed after exactly
    ceil(1/gamma) rounds instead of by per-round draws (no removal
    randomness is consumed in that mode).
    """
    if states.count != grid.count:
        raise ValidationError("invariant violated: states length == grid count")
    status = states.status
    infected = np.flatnonzero(status == Status.INFECTED)
    if deterministic_duration:
        sojourn = math.ceil(1.0 / params.gamma)
        age = round_index + 1 - states.infected_at[infected]
        removed = infected[age >= sojourn]
    else:
        removed = infected[rng.random(infected.size) < params.gamma]
    fresh = _draw_infections(grid, status, infected, params, rng, epsilon_p)
    status[removed] = Status.REMOVED
    if fresh.size:
        states.infect(fresh, round_index + 1)
    return states


def _died_early_result(scenario: Scenario, n: int) -> SimulationResult:
    horizon = scenario.horizon_steps
    trajectory = EpidemicTrajectory(
        s_count=(n,) + (0,) * (horizon - 1),
        i_count=(0,) * horizon,
        r_count=(0,) + (n,) * (horizon - 1),
        n_t=(n,) + (0,) * (horizon - 1),
    )
    return SimulationResult(
        trajectory=trajectory,
        economics=economic_series(
            trajectory.n_t, scenario.economics, n_initial=n, died_early=True
        ),
        r0=r0_series(trajectory.i_count, trajectory.r_count),
        initial_infected=(),
        died_early=True,
    )


def run(
    scenario: Scenario,
    *,
    epsilon_p: float = 1e-6,
    deterministic_duration: bool = False,
) -> SimulationResult:
    """Simulate one full season: layout, initial infections at t = 1,
    T - 1 stochastic rounds, then economics and R0 metrics.

    Fully deterministic given scenario.rng_seed. Spacing below the minimal
    seeding distance short-circuits: every plant dies before harvest, the
    seeding cost is lost, and no RNG draws are consumed.
    """
    field, strategy = scenario.field, scenario.strategy
    pathogen = scenario.pathogen
    n = (
        scenario.explicit_count
        if scenario.explicit_count is not None
        else lattice_capacity(field, strategy)
    )
    if strategy.dx_m < field.min_spacing_m or strategy.dy_m < field.min_spacing_m:
        return _died_early_result(scenario, n)

    rng = np.random.default_rng(scenario.rng_seed)
    cutoff = pathogen.beta0 / epsilon_p if pathogen.beta0 > 0 and epsilon_p > 0 else None
    grid = layout_grid(field, strategy, scenario.explicit_count, cutoff_radius_m=cutoff)
    initial = place_initial_infected(
        grid, pathogen.initial_infected, scenario.placement_mode, rng
    )
    states = PlantStates(grid.count)
    states.infect(initial, 1)

    s_list, i_list, r_list = [], [], []
    s, i, r = states.counts()
    s_list.append(s), i_list.append(i), r_list.append(r)
    for t in range(1, scenario.horizon_steps):
        step(
            grid,
            states,
            pathogen,
            rng,
            round_index=t,
            epsilon_p=epsilon_p,
            deterministic_duration=deterministic_duration,
        )
        s, i, r = states.counts()
        s_list.append(s), i_list.append(i), r_list.append(r)

    trajectory = EpidemicTrajectory(
        s_count=tuple(s_list),
        i_count=tuple(i_list),
        r_count=tuple(r_list),
        n_t=tuple(grid.count - r for r in r_list),
    )
    return SimulationResult(
        trajectory=trajectory,
        economics=economic_series(trajectory.n_t, scenario.economics),
        r0=r0_series(trajectory.i_count, trajectory.r_count),
        initial_infected=tuple(int(x) for x in initial),
        died_early=False,
    )
