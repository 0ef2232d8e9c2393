"""Acceptance gate: one test per release criterion.

Each test prints a single PASS/FAIL line (run with `pytest -s` to see them
on success; pytest shows captured output on failure). Statistical checks
use pinned seeds so the suite is deterministic. Frozen numeric oracles were
computed once by hand/REPL from the closed forms and are asserted at tight
tolerances.
"""

import itertools
import math
import time
from dataclasses import replace

import numpy as np
import pytest

from fieldopt import (
    BoundVariant,
    EconomicParams,
    ExperimentSpec,
    FieldSpec,
    PathogenParams,
    PlacementMode,
    PlantStates,
    Scenario,
    ScoreMode,
    SearchMethod,
    SeedingStrategy,
    Status,
    analytic_profit,
    coverage_radius,
    derive_seed,
    fit_plane,
    growing_cost,
    harvesting_cost,
    kcenter_greedy,
    layout_grid,
    optimize,
    paired_t_test,
    removal_bound,
    run,
    run_baseline,
    run_economic_sweep,
    run_pathogen_sweep,
    scenario_default,
    seeding_cost,
    sell_revenue,
    step,
)

MASTER = 0


def _report(num: int, description: str, ok: bool) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {description}"
    print(line, flush=True)
    assert ok, line


def _close(a: float, b: float, rel: float) -> bool:
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


# -- criterion 1: conservation and determinism over random scenarios --------


def _random_scenario(index: int) -> Scenario:
    rng = np.random.default_rng(derive_seed(MASTER, "acc1", index))
    width = rng.uniform(2.0, 8.0)
    height = rng.uniform(2.0, 8.0)
    dx = rng.uniform(0.12, 0.5)
    dy = rng.uniform(0.12, 0.5)
    beta0 = rng.uniform(0.0, 0.008)
    gamma = rng.uniform(0.01, 0.9)
    k = int(rng.integers(1, 6))
    horizon = int(rng.integers(2, 6))
    mode = PlacementMode.RANDOM if rng.random() < 0.5 else PlacementMode.WORST_CASE
    seed = int(rng.integers(0, 2**32))
    if index % 10 == 9:
        dx = 0.05  # below the minimal seeding distance: early-death path
    return Scenario(
        field=FieldSpec(width_m=width, height_m=height),
        pathogen=PathogenParams(beta0=beta0, gamma=gamma, initial_infected=k),
        economics=EconomicParams(),
        strategy=SeedingStrategy(dx_m=dx, dy_m=dy),
        horizon_steps=horizon,
        placement_mode=mode,
        rng_seed=seed,
    )


def test_criterion_01_conservation_and_determinism():
    start = time.perf_counter()
    for i in range(200):
        scenario = _random_scenario(i)
        first = run(scenario)
        second = run(scenario)
        traj = first.trajectory
        n = traj.s_count[0] + traj.i_count[0] + traj.r_count[0]
        for t in range(len(traj.s_count)):
            assert traj.s_count[t] + traj.i_count[t] + traj.r_count[t] == n
            assert traj.n_t[t] == n - traj.r_count[t]
            if t > 0:
                assert traj.r_count[t] >= traj.r_count[t - 1]
        assert second.trajectory.s_count == traj.s_count
        assert second.trajectory.i_count == traj.i_count
        assert second.trajectory.r_count == traj.r_count
        assert second.total_profit == first.total_profit
        assert second.r0.r0_t == first.r0.r0_t
    elapsed = time.perf_counter() - start
    _report(
        1,
        f"conservation, monotone removals, bit-identical reruns over 200 "
        f"random scenarios ({elapsed:.1f} s < 30 s)",
        elapsed < 30.0,
    )


# -- criterion 2: closed-form economics against frozen oracles --------------


def test_criterion_02_economics_closed_forms():
    econ = EconomicParams()
    # frozen: a*ln(n) + c*n and psi1*n - psi2*ln(n) evaluated by hand/REPL
    oracles = {
        1: (0.14, 0.019, 0.11, 5.32),
        100: (14.046051701859882, 2.051970616137607, 11.276310211159286, 524.1251589819603),
        25000: (3500.101266311039, 475.33417882642703, 2750.607597866231, 132982.6834608124),
    }
    ok = True
    for n, (seed_c, grow_c, harv_c, sell_r) in oracles.items():
        ok = ok and _close(seeding_cost(n, econ), seed_c, 1e-9)
        ok = ok and _close(growing_cost(n, econ), grow_c, 1e-9)
        ok = ok and _close(harvesting_cost(n, econ), harv_c, 1e-9)
        ok = ok and _close(sell_revenue(n, econ), sell_r, 1e-9)
    _report(2, "cost/revenue closed forms at N in {1, 100, 25000} (1e-9 rel)", ok)


# -- criterion 3: removal bound equals the explicit loop --------------------


def _loop_bound(beta0, gamma, k, r_m, horizon):
    q = beta0 / r_m
    return math.fsum(gamma * k * q**t for t in range(horizon))


def test_criterion_03_removal_bound_oracle():
    rng = np.random.default_rng(derive_seed(MASTER, "acc3"))
    ok = True
    for i in range(10_000):
        beta0 = rng.uniform(1e-4, 0.01)
        r_m = rng.uniform(1e-4, 2.0)
        gamma = rng.uniform(0.005, 1.0)
        k = int(rng.integers(1, 11))
        horizon = int(rng.integers(1, 21))
        if i % 100 == 0:
            r_m = beta0  # exact q = 1 degenerate branch
        closed = removal_bound(beta0, gamma, k, r_m, horizon)
        ok = ok and _close(closed, _loop_bound(beta0, gamma, k, r_m, horizon), 1e-12)
        q = beta0 / r_m
        if abs(q - 1.0) >= 1e-12:
            exact = removal_bound(beta0, gamma, k, r_m, horizon, BoundVariant.PAPER_EXACT)
            ok = ok and _close(exact, closed / q, 1e-12)
    _report(3, "geometric removal bound == term loop over 1e4 tuples (1e-12)", ok)


# -- criterion 4: two-plant infection calibration ----------------------------


def test_criterion_04_two_plant_calibration():
    start = time.perf_counter()
    field = FieldSpec(width_m=0.2, height_m=0.1)
    grid = layout_grid(field, SeedingStrategy(dx_m=0.2, dy_m=0.2))
    assert grid.count == 2
    params = PathogenParams(beta0=0.003, gamma=1 / 42, initial_infected=1)
    rng = np.random.default_rng(derive_seed(MASTER, "acc4"))
    trials = 100_000
    hits = 0
    for _ in range(trials):
        states = PlantStates(2)
        states.infect([0], 1)
        step(grid, states, params, rng, round_index=1)
        hits += int(states.status[1] == Status.INFECTED)
    p = 0.015
    sigma = math.sqrt(p * (1 - p) / trials)
    phat = hits / trials
    elapsed = time.perf_counter() - start
    _report(
        4,
        f"two-plant infection frequency {phat:.5f} within 3 sigma of "
        f"{p} ({elapsed:.1f} s < 10 s)",
        abs(phat - p) <= 3 * sigma and elapsed < 10.0,
    )


# -- criterion 5: greedy k-center within 2x of exhaustive optimum -----------


def _exhaustive_radius(points: np.ndarray, k: int) -> float:
    best = math.inf
    for combo in itertools.combinations(range(len(points)), k):
        best = min(best, coverage_radius(points, list(combo)))
    return best


def test_criterion_05_kcenter_quality():
    rng = np.random.default_rng(derive_seed(MASTER, "acc5"))
    instances = [rng.uniform(0.0, 10.0, size=(n, 2)) for n in range(4, 13) for _ in range(3)]
    instances.append(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]))
    instances.append(np.column_stack([np.arange(8.0), np.zeros(8)]))
    gx, gy = np.meshgrid(np.arange(4.0), np.arange(3.0))
    instances.append(np.column_stack([gx.ravel(), gy.ravel()]))
    ok = True
    for points in instances:
        for k in (1, 2, 3):
            centers = kcenter_greedy(points, k)
            greedy = coverage_radius(points, centers)
            ok = ok and greedy <= 2.0 * _exhaustive_radius(points, k) + 1e-9
    _report(5, "greedy k-center radius <= 2x exhaustive optimum (n <= 12, k <= 3)", ok)


# -- criterion 6: pathogen sensitivity trends and fitted signs ---------------


def _non_decreasing(values, tol=0.0):
    return all(b >= a - tol for a, b in zip(values, values[1:]))


def _non_increasing(values, tol=0.0):
    return all(b <= a + tol for a, b in zip(values, values[1:]))


def test_criterion_06_pathogen_sensitivity(tmp_path):
    start = time.perf_counter()
    spec = ExperimentSpec(master_seed=MASTER, out_dir=str(tmp_path))
    rows, fits = run_pathogen_sweep(spec)
    betas = sorted(spec.beta0_values)
    ok = True
    for g in spec.gamma_values:
        by_beta = {r["beta0"]: r for r in rows if r["gamma"] == g}
        ok = ok and _non_decreasing([by_beta[b]["mean_r0"] for b in betas])
        ok = ok and _non_increasing([by_beta[b]["mean_profit"] for b in betas])
    marginal = [
        np.mean([r["mean_profit"] for r in rows if r["beta0"] == b]) for b in betas
    ]
    ok = ok and _non_increasing(marginal)
    ok = ok and fits["mean_r0"].coeff_beta0 > 0
    ok = ok and fits["mean_profit"].coeff_beta0 < 0
    elapsed = time.perf_counter() - start
    _report(
        6,
        f"R0 rises and profit falls with beta0; plane signs +/- "
        f"({elapsed:.1f} s < 120 s)",
        ok and elapsed < 120.0,
    )


# -- criterion 7: economic ratio trends --------------------------------------


def test_criterion_07_economic_ratio_trends(tmp_path):
    spec = ExperimentSpec(master_seed=MASTER, out_dir=str(tmp_path))
    rows = run_economic_sweep(spec)

    def profits(family):
        fam = sorted(
            (r for r in rows if r["ratio_family"] == family),
            key=lambda r: r["ratio_value"],
        )
        return [r["mean_profit"] for r in fam]

    price = profits("price_discount_ratio")
    grow_price = profits("grow_price_ratio")
    ok = all(b > a for a, b in zip(price, price[1:]))
    ok = ok and _non_increasing(grow_price)
    _report(
        7,
        "profit strictly increasing in sell/discount ratio, "
        "non-increasing in grow/price ratio",
        ok,
    )


# -- criterion 8: optimizer dominance over the default spacing ---------------


def _dominance_instance(tag: str, index: int) -> Scenario:
    rng = np.random.default_rng(derive_seed(MASTER, tag, index))
    width = rng.uniform(4.0, 10.0)
    height = rng.uniform(4.0, 10.0)
    beta0 = rng.uniform(0.001, 0.005)
    gamma = rng.uniform(1.0 / 65.0, 1.0 / 21.0)
    return replace(
        scenario_default(),
        field=FieldSpec(width_m=width, height_m=height),
        pathogen=PathogenParams(beta0=beta0, gamma=gamma, initial_infected=3),
    )


def test_criterion_08_optimizer_dominance():
    start = time.perf_counter()
    default = SeedingStrategy()
    analytic_wins = 0
    for i in range(200):
        scenario = _dominance_instance("acc8-analytic", i)
        result = optimize(
            scenario, search=SearchMethod.GRID, mode=ScoreMode.ANALYTIC, delta=0.1
        )
        base = analytic_profit(
            scenario.field,
            default,
            scenario.pathogen,
            scenario.economics,
            scenario.horizon_steps,
        )
        analytic_wins += int(result.best_profit >= base - 1e-9)

    sim_wins = 0
    for i in range(50):
        scenario = _dominance_instance("acc8-simulated", i)
        optimal = optimize(
            scenario, search=SearchMethod.GRID, mode=ScoreMode.ANALYTIC, delta=0.1
        ).best_strategy
        means = {}
        for label, strategy in (("optimal", optimal), ("default", default)):
            profits = [
                run(
                    replace(
                        scenario,
                        strategy=strategy,
                        rng_seed=derive_seed(MASTER, "acc8-sim", i, rep),
                    )
                ).total_profit
                for rep in range(30)
            ]
            means[label] = sum(profits) / len(profits)
        sim_wins += int(means["optimal"] >= means["default"] - 1e-9)
    elapsed = time.perf_counter() - start
    _report(
        8,
        f"analytic dominance {analytic_wins}/200, simulated {sim_wins}/50 "
        f"(need 200 and >= 45; {elapsed:.0f} s < 300 s)",
        analytic_wins == 200 and sim_wins >= 45 and elapsed < 300.0,
    )


# -- criterion 9: plane fit recovers planted coefficients --------------------


def test_criterion_09_plane_recovery():
    xs = [(b, g) for b in (0.001, 0.003, 0.005) for g in (0.02, 0.05, 0.08)]
    ys = [2.0 * b - 5.0 * g + 1.0 for b, g in xs]
    fit = fit_plane(xs, ys)
    ok = (
        abs(fit.coeff_beta0 - 2.0) <= 1e-8
        and abs(fit.coeff_gamma - (-5.0)) <= 1e-8
        and abs(fit.intercept - 1.0) <= 1e-8
        and abs(fit.r_squared - 1.0) <= 1e-10
    )
    _report(9, "planted plane (2, -5, 1) recovered within 1e-8, R^2 = 1", ok)


# -- criterion 10: infection pressure grows with planting density ------------


def test_criterion_10_baseline_density_trend(tmp_path):
    start = time.perf_counter()
    spec = ExperimentSpec(master_seed=MASTER, out_dir=str(tmp_path))
    rows = run_baseline(spec)
    means = []
    for size in spec.sizes:
        r0s = [
            r["mean_r0"]
            for r in rows
            if r["size_label"] == str(size) and r["mean_r0"] is not None
        ]
        means.append(sum(r0s) / len(r0s))
    elapsed = time.perf_counter() - start
    _report(
        10,
        f"mean R0 non-decreasing in N {tuple(spec.sizes)}: "
        f"{[round(m, 3) for m in means]} ({elapsed:.1f} s < 120 s)",
        _non_decreasing(means) and elapsed < 120.0,
    )


# -- criterion 11: paired t-test on the documented example -------------------


def test_criterion_11_paired_t_test_example():
    result = paired_t_test([1.0, 2.0, 3.0, 4.0, 5.0], [0.0, 1.0, 2.0, 3.0, 3.0])
    ok = abs(result.t_statistic - 6.0) <= 1e-9 and result.dof == 4
    scipy_stats = pytest.importorskip("scipy.stats")
    expected_p = scipy_stats.ttest_rel(
        [1.0, 2.0, 3.0, 4.0, 5.0], [0.0, 1.0, 2.0, 3.0, 3.0]
    ).pvalue
    ok = ok and abs(result.p_two_sided - expected_p) <= 1e-9
    _report(11, "paired t-test gives t = 6.0, dof = 4 on the 5-pair example", ok)
