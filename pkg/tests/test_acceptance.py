"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The experiment batteries are deterministic (seeded trial derivation), so
every assertion here is reproducible run over run.
"""

import math

import numpy as np
import pytest

from bestarm import (
    BonusContext,
    KlBall,
    Mode,
    RunConfig,
    SimplexVector,
    bernstein_structured,
    el_lower,
    el_upper,
    get_scenario,
    hoeffding_nonstructured,
    hoeffding_structured,
    kl_bernoulli,
    klinf_lower,
    klinf_upper,
    run_experiment,
    sample_complexity_bound,
)
from bestarm.cli import main as cli_main
from bestarm.lowerbound import characteristic_time
from oracles import (
    el_extreme_mean_grid,
    klinf_lower_plane_grid,
    klinf_upper_plane_grid,
    tstar_inv_grid_3,
)

ACCEPT_SEED = 1000
DELTA = 0.05
ALL_MODES = (Mode.NONSTRUCTURED, Mode.STRUCTURED, Mode.EMPIRICAL_LIKELIHOOD)


def _criterion(number: int, description: str, ok: bool) -> None:
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {description}")
    assert ok, f"criterion {number} failed: {description}"


def _config() -> RunConfig:
    return RunConfig(delta=DELTA, mode=Mode.STRUCTURED, alpha=0.5, seed=ACCEPT_SEED)


@pytest.fixture(scope="module")
def exp_small():
    return run_experiment(get_scenario("small-values"), ALL_MODES, 100, _config())


@pytest.fixture(scope="module")
def exp_large():
    return run_experiment(get_scenario("large-values"), ALL_MODES, 100, _config())


@pytest.fixture(scope="module")
def exp_close_gap_el():
    el = (Mode.EMPIRICAL_LIKELIHOOD,)
    return {
        label: run_experiment(get_scenario(label), el, 100, _config())
        for label in ("wide-range", "narrow-range")
    }


@pytest.fixture(scope="module")
def pac_battery():
    return {
        label: run_experiment(get_scenario(label), ALL_MODES, 500, _config())
        for label in ("small-values", "large-values", "wide-range", "narrow-range")
    }


def _significant_gap(report, faster: Mode, slower: Mode) -> tuple[bool, str]:
    a = report.summaries[faster]
    b = report.summaries[slower]
    diff = b.mean_tau - a.mean_tau
    se = math.sqrt(a.std_tau**2 / a.trials + b.std_tau**2 / b.trials)
    ok = diff > se
    detail = (
        f"mean {a.mean_tau:.0f} ({faster.value}) vs {b.mean_tau:.0f} "
        f"({slower.value}), gap {diff:.0f} vs one standard error {se:.0f}"
    )
    return ok, detail


def test_criterion_1_structured_wins_on_small_values(exp_small):
    ok, detail = _significant_gap(exp_small, Mode.STRUCTURED, Mode.NONSTRUCTURED)
    _criterion(1, f"small-values ordering: {detail}", ok)


def test_criterion_2_nonstructured_wins_on_large_values(exp_large):
    ok, detail = _significant_gap(exp_large, Mode.NONSTRUCTURED, Mode.STRUCTURED)
    _criterion(2, f"large-values ordering: {detail}", ok)


def test_criterion_3_el_dominates_and_handles_close_gaps(
    exp_small, exp_large, exp_close_gap_el
):
    el = Mode.EMPIRICAL_LIKELIHOOD
    ok = True
    details = []
    for label, report in (("small-values", exp_small), ("large-values", exp_large)):
        el_mean = report.summaries[el].mean_tau
        for other in (Mode.NONSTRUCTURED, Mode.STRUCTURED):
            other_mean = report.summaries[other].mean_tau
            ok &= el_mean < other_mean
        details.append(f"{label} el mean {el_mean:.0f}")
    for label, report in exp_close_gap_el.items():
        summary = report.summaries[el]
        ok &= summary.truncated_count == 0
        ok &= summary.error_count == 0
        details.append(
            f"{label} el mean {summary.mean_tau:.0f} "
            f"({summary.error_count} errors, {summary.truncated_count} truncated)"
        )
    _criterion(3, "; ".join(details), ok)


def test_criterion_4_delta_pac_error_rates(pac_battery):
    threshold = DELTA + 2.0 * math.sqrt(DELTA * (1.0 - DELTA) / 500.0)
    ok = True
    worst = 0.0
    for report in pac_battery.values():
        for summary in report.summaries.values():
            worst = max(worst, summary.error_rate)
            ok &= summary.error_rate <= threshold
    _criterion(
        4,
        f"12 scenario/mode pairs x 500 trials, worst error rate "
        f"{worst:.4f} <= {threshold:.4f}",
        ok,
    )


def _random_case(rng):
    d = 2 if rng.random() < 0.5 else 3
    p = 0.85 * rng.dirichlet(np.ones(d)) + 0.15 / d
    p /= p.sum()
    while True:
        v = np.sort(rng.random(d))
        if np.all(np.diff(v) >= 0.08):
            break
    return p, v


def test_criterion_5_dual_matches_primal_grids():
    rng = np.random.default_rng(31415)
    worst_klinf = 0.0
    worst_el = 0.0
    for _ in range(100):
        p, v = _random_case(rng)
        mean = float(p @ v)
        x_up = mean + rng.uniform(0.1, 0.55) * (v.max() - mean)
        x_lo = mean - rng.uniform(0.1, 0.55) * (mean - v.min())
        worst_klinf = max(
            worst_klinf,
            abs(klinf_upper(p, v, x_up) - klinf_upper_plane_grid(p, v, x_up)),
            abs(klinf_lower(p, v, x_lo) - klinf_lower_plane_grid(p, v, x_lo)),
        )
        radius = float(rng.uniform(0.02, 0.3))
        ball = KlBall(SimplexVector(p), radius)
        worst_el = max(
            worst_el,
            abs(el_upper(ball, v) - el_extreme_mean_grid(p, v, radius, maximize=True)),
            abs(el_lower(ball, v) - el_extreme_mean_grid(p, v, radius, maximize=False)),
        )
    ok = worst_klinf <= 1e-4 and worst_el <= 2e-3
    _criterion(
        5,
        f"100 random instances: worst klinf deviation {worst_klinf:.2e} <= 1e-4, "
        f"worst el deviation {worst_el:.2e} <= 2e-3",
        ok,
    )


def test_criterion_6_binary_support_reduction():
    worst = 0.0
    for p2 in np.linspace(0.05, 0.95, 10):
        p = np.array([1.0 - p2, p2])
        v = np.array([0.0, 1.0])
        for x in np.linspace(p2, 0.999, 10):
            worst = max(worst, abs(klinf_upper(p, v, x) - kl_bernoulli(p2, x)))
    ok = worst <= 1e-8
    _criterion(6, f"100-point binary sweep, worst deviation {worst:.2e} <= 1e-8", ok)


def test_criterion_7_bonus_formula_spot_checks():
    ctx = BonusContext(t=10, K=3, d=3, delta=0.05, n=5)
    # independent direct evaluations of the three formulas
    oracle_nonstructured = math.sqrt(math.log(2 * 3 * 10 / 0.05) / (2 * 5))
    oracle_structured = math.sqrt(math.log(2 * 3 * 3 * 10 / 0.05) / (2 * 5))
    oracle_bernstein = (
        math.sqrt(2 * 0.25) * math.sqrt(math.log(3600.0) / 10)
        + math.log(3600.0) / 15
    )
    got = (
        hoeffding_nonstructured(ctx),
        hoeffding_structured(ctx),
        bernstein_structured(ctx, 0.5),
    )
    ok = (
        abs(got[0] - oracle_nonstructured) <= 1e-4
        and abs(got[1] - oracle_structured) <= 1e-4
        and abs(got[2] - oracle_bernstein) <= 1e-4
        and abs(got[0] - 0.8420) <= 1e-4
        and abs(got[1] - 0.9049) <= 1e-4
    )
    _criterion(
        7,
        f"bonuses {got[0]:.6f}, {got[1]:.6f}, {got[2]:.6f} match direct "
        f"evaluations within 1e-4",
        ok,
    )


def test_criterion_8_scenario_means_and_gaps():
    small = get_scenario("small-values").instance
    wide = get_scenario("wide-range").instance
    narrow = get_scenario("narrow-range").instance
    means_ok = bool(
        np.all(np.abs(small.means - np.array([0.28, 0.23, 0.17])) <= 1e-12)
    )
    gaps_ok = abs(wide.gap - 0.04) <= 5e-3 and abs(narrow.gap - 0.014) <= 5e-3
    _criterion(
        8,
        f"small-values means {tuple(round(m, 6) for m in small.means)}, "
        f"gaps {wide.gap:.4f} and {narrow.gap:.4f}",
        means_ok and gaps_ok,
    )


def test_criterion_9_lower_bound_sanity(exp_small):
    instance = get_scenario("small-values").instance
    ct = characteristic_time(instance.means)
    solver = 1.0 / ct.t_star
    grid = tstar_inv_grid_3(instance.means)
    grid_ok = abs(solver - grid) <= 0.01 * grid
    bound = sample_complexity_bound(ct, DELTA)
    means_ok = all(
        exp_small.summaries[mode].mean_tau >= 0.8 * bound for mode in ALL_MODES
    )
    taus = {m.value: round(exp_small.summaries[m].mean_tau) for m in ALL_MODES}
    _criterion(
        9,
        f"T* {ct.t_star:.1f} within 1% of grid, bound {bound:.0f}, "
        f"mean taus {taus} all >= {0.8 * bound:.0f}",
        grid_ok and means_ok,
    )


def test_criterion_10_byte_identical_reruns(tmp_path):
    args = [
        "run",
        "--scenario", "small-values",
        "--mode", "structured,el",
        "--trials", "20",
        "--delta", "0.05",
        "--seed", "77",
    ]
    dir_a = tmp_path / "a"
    dir_b = tmp_path / "b"
    assert cli_main(args + ["--out", str(dir_a)]) == 0
    assert cli_main(args + ["--out", str(dir_b)]) == 0
    names = ("trials.csv", "summary.json", "hist_structured.csv", "hist_el.csv")
    ok = all((dir_a / n).read_bytes() == (dir_b / n).read_bytes() for n in names)
    _criterion(10, "two seeded invocations wrote byte-identical reports", ok)
