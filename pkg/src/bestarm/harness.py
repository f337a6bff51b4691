"""Benchmark harness: builtin scenarios, seeded trial batches, and reports.

Per-trial seeds come from a counter construction over (base seed, mode id,
trial index), so trials are independent of worker scheduling and a report
is reproducible byte for byte from its configuration.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .engine import Mode, RunConfig, mode_index, parse_mode, run
from .lowerbound import characteristic_time, sample_complexity_bound
from .model import ProblemInstance, SimplexVector, SupportVector

__all__ = [
    "ConfigError",
    "Scenario",
    "TrialRecord",
    "ModeSummary",
    "ReferenceBound",
    "ExperimentReport",
    "RunPlan",
    "builtin_scenarios",
    "get_scenario",
    "instance_config",
    "trial_seed",
    "run_experiment",
    "emit_report",
    "load_config",
]

TRIALS_CSV_HEADER = ("seed", "mode", "scenario", "tau", "correct", "truncated")
HISTOGRAM_CSV_HEADER = ("bin_lo", "bin_hi", "count")
DEFAULT_HISTOGRAM_BINS = 20


class ConfigError(ValueError):
    """A configuration file failed validation; the message names the key."""


@dataclass(frozen=True)
class Scenario:
    instance: ProblemInstance
    label: str


# Three arms over three outcomes; the two supports below share these
# distributions but reward them very differently.
_ARMS_3X3 = (
    (0.5, 0.3, 0.2),
    (0.4, 0.3, 0.3),
    (0.3, 0.2, 0.5),
)

# Two close arms over four outcomes; rows are off unit sum by ~3e-3 and are
# renormalized explicitly when the scenario is built.
_ARMS_2X4 = (
    (0.142, 0.311, 0.153, 0.391),
    (0.386, 0.114, 0.154, 0.344),
)

_SCENARIO_SPECS = (
    ("small-values", _ARMS_3X3, (0.5, 0.1, 0.0)),
    ("large-values", _ARMS_3X3, (0.9, 0.6, 0.4)),
    ("wide-range", _ARMS_2X4, (0.144, 0.152, 0.505, 0.984)),
    ("narrow-range", _ARMS_2X4, (0.573, 0.518, 0.409, 0.505)),
)


def builtin_scenarios() -> list[Scenario]:
    """The four bundled benchmark scenarios."""
    scenarios = []
    for label, rows, values in _SCENARIO_SPECS:
        instance = ProblemInstance(
            arms=tuple(SimplexVector.from_weights(row) for row in rows),
            support=SupportVector(np.array(values)),
            name=label,
        )
        scenarios.append(Scenario(instance=instance, label=label))
    return scenarios


def get_scenario(label: str) -> Scenario:
    for scenario in builtin_scenarios():
        if scenario.label == label:
            return scenario
    known = ", ".join(s.label for s in builtin_scenarios())
    raise ValueError(f"unknown scenario {label!r}; available: {known}")


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    mode: Mode
    scenario: str
    tau: int
    correct: bool
    truncated: bool


@dataclass(frozen=True)
class ModeSummary:
    trials: int
    mean_tau: float
    std_tau: float
    median_tau: float
    min_tau: int
    max_tau: int
    error_count: int
    error_rate: float
    truncated_count: int


@dataclass(frozen=True)
class ReferenceBound:
    t_star: float
    weights: tuple[float, ...]
    value: float


@dataclass(frozen=True)
class ExperimentReport:
    scenario: str
    delta: float
    alpha: float
    epsilon_slack: float
    max_steps: int
    base_seed: int
    trials: int
    modes: tuple[Mode, ...]
    summaries: dict[Mode, ModeSummary]
    records: tuple[TrialRecord, ...]
    lower_bound: ReferenceBound | None


def trial_seed(base_seed: int, mode: Mode, trial_index: int) -> int:
    """Derive one trial's 64-bit seed from (base seed, mode id, trial index)."""
    seq = np.random.SeedSequence([int(base_seed), mode_index(mode), int(trial_index)])
    return int(seq.generate_state(1, np.uint64)[0])


def _summarize(records: list[TrialRecord]) -> ModeSummary:
    taus = np.array([r.tau for r in records], dtype=np.int64)
    errors = sum(1 for r in records if not r.correct)
    return ModeSummary(
        trials=len(records),
        mean_tau=float(taus.mean()),
        std_tau=float(taus.std(ddof=1)) if len(records) > 1 else 0.0,
        median_tau=float(np.median(taus)),
        min_tau=int(taus.min()),
        max_tau=int(taus.max()),
        error_count=errors,
        error_rate=errors / len(records),
        truncated_count=sum(1 for r in records if r.truncated),
    )


def _reference_bound(instance: ProblemInstance, delta: float) -> ReferenceBound | None:
    try:
        ct = characteristic_time(instance.means)
    except ValueError:
        # degenerate means (0, 1, or ties): no finite binary-projection bound
        return None
    return ReferenceBound(
        t_star=ct.t_star,
        weights=ct.weights,
        value=sample_complexity_bound(ct, delta),
    )


def run_experiment(
    scenario: Scenario,
    modes,
    trials: int,
    base_config: RunConfig,
    workers: int | None = None,
) -> ExperimentReport:
    """Run ``trials`` independent seeded runs per mode and aggregate them.

    Trials execute on a thread pool (the run kernels release the GIL); the
    report ordering is canonical in (mode, trial index) regardless of the
    worker count. Truncated runs are counted, never dropped.
    """
    modes = tuple(modes)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not modes:
        raise ValueError("need at least one mode")

    jobs = [
        (mode, trial, trial_seed(base_config.seed, mode, trial))
        for mode in modes
        for trial in range(trials)
    ]

    def one(job) -> TrialRecord:
        mode, _, seed = job
        config = replace(base_config, mode=mode, seed=seed, trace=False)
        result = run(scenario.instance, config)
        return TrialRecord(
            seed=seed,
            mode=mode,
            scenario=scenario.label,
            tau=result.tau,
            correct=result.correct,
            truncated=result.truncated,
        )

    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1:
        records = [one(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(one, jobs))

    summaries = {
        mode: _summarize([r for r in records if r.mode is mode]) for mode in modes
    }
    return ExperimentReport(
        scenario=scenario.label,
        delta=base_config.delta,
        alpha=base_config.alpha,
        epsilon_slack=base_config.epsilon_slack,
        max_steps=base_config.max_steps,
        base_seed=base_config.seed,
        trials=trials,
        modes=modes,
        summaries=summaries,
        records=tuple(records),
        lower_bound=_reference_bound(scenario.instance, base_config.delta),
    )


def _bool_token(flag: bool) -> str:
    return "true" if flag else "false"


def _histogram_rows(taus: np.ndarray, bins: int) -> list[tuple[float, float, int]]:
    lo = float(taus.min())
    hi = float(taus.max())
    if hi == lo:
        # degenerate range: center one unit around the common value
        lo, hi = lo - 0.5, hi + 0.5
    counts, edges = np.histogram(taus, bins=bins, range=(lo, hi))
    return [
        (float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(bins)
    ]


def emit_report(
    report: ExperimentReport,
    out_dir,
    histogram_bins: int = DEFAULT_HISTOGRAM_BINS,
) -> list[Path]:
    """Write trials.csv, summary.json, and one histogram CSV per mode.

    Returns the written paths. Output is deterministic byte for byte for a
    fixed report.
    """
    if histogram_bins < 1:
        raise ValueError("histogram_bins must be at least 1")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    trials_path = out / "trials.csv"
    lines = [",".join(TRIALS_CSV_HEADER)]
    for r in report.records:
        lines.append(
            f"{r.seed},{r.mode.value},{r.scenario},{r.tau},"
            f"{_bool_token(r.correct)},{_bool_token(r.truncated)}"
        )
    trials_path.write_text("\n".join(lines) + "\n")
    written.append(trials_path)

    summary = {
        "scenario": report.scenario,
        "delta": report.delta,
        "alpha": report.alpha,
        "epsilon_slack": report.epsilon_slack,
        "max_steps": report.max_steps,
        "base_seed": report.base_seed,
        "trials": report.trials,
        "modes": [m.value for m in report.modes],
        "lower_bound": None
        if report.lower_bound is None
        else {
            "t_star": report.lower_bound.t_star,
            "weights": list(report.lower_bound.weights),
            "value": report.lower_bound.value,
        },
        "summaries": {
            mode.value: {
                "trials": s.trials,
                "mean_tau": s.mean_tau,
                "std_tau": s.std_tau,
                "median_tau": s.median_tau,
                "min_tau": s.min_tau,
                "max_tau": s.max_tau,
                "error_count": s.error_count,
                "error_rate": s.error_rate,
                "truncated_count": s.truncated_count,
            }
            for mode, s in report.summaries.items()
        },
    }
    summary_path = out / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    written.append(summary_path)

    for mode in report.modes:
        taus = np.array(
            [r.tau for r in report.records if r.mode is mode], dtype=np.int64
        )
        rows = _histogram_rows(taus, histogram_bins)
        hist_path = out / f"hist_{mode.value}.csv"
        lines = [",".join(HISTOGRAM_CSV_HEADER)]
        for bin_lo, bin_hi, count in rows:
            lines.append(f"{bin_lo!r},{bin_hi!r},{count}")
        hist_path.write_text("\n".join(lines) + "\n")
        written.append(hist_path)

    return written


@dataclass(frozen=True)
class RunPlan:
    """A fully validated experiment description loaded from a config file."""

    scenario: Scenario
    base_config: RunConfig
    trials: int
    modes: tuple[Mode, ...]
    out_dir: str | None
    histogram_bins: int
    workers: int | None


def instance_config(instance: ProblemInstance) -> dict:
    """JSON-ready config fragment (name, P, V) describing an instance.

    Round-trips through :func:`load_config` once the experiment keys
    (``delta`` at minimum) are added.
    """
    return {
        "name": instance.name,
        "P": [list(map(float, arm.probabilities)) for arm in instance.arms],
        "V": list(map(float, instance.support.values)),
    }


_KNOWN_KEYS = {
    "name",
    "P",
    "V",
    "delta",
    "alpha",
    "epsilon_slack",
    "trials",
    "seed",
    "modes",
    "max_steps",
    "out",
    "histogram_bins",
    "workers",
    "renormalize",
    "el_radius_scale",
}


def _config_number(raw: dict, key: str, default=None):
    if key not in raw:
        if default is None:
            raise ConfigError(f"missing required key '{key}'")
        return default
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"key '{key}' must be a number, got {value!r}")
    return value


def load_config(path) -> RunPlan:
    """Parse and validate a JSON experiment config.

    Required keys: ``P`` (list of arm rows), ``V`` (support values), and
    ``delta`` (the risk, never defaulted). Rows must sum to one within the
    simplex tolerance unless ``renormalize`` is true, in which case they are
    rescaled explicitly.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    for key in ("P", "V"):
        if key not in raw:
            raise ConfigError(f"missing required key '{key}'")
    try:
        support = SupportVector(np.asarray(raw["V"], dtype=np.float64))
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"key 'V': {exc}") from exc

    rows = raw["P"]
    if not isinstance(rows, list) or len(rows) < 2:
        raise ConfigError("key 'P' must be a list of at least two arm rows")
    renormalize = raw.get("renormalize", False)
    if not isinstance(renormalize, bool):
        raise ConfigError("key 'renormalize' must be a boolean")
    arms = []
    for i, row in enumerate(rows):
        try:
            if renormalize:
                arms.append(SimplexVector.from_weights(np.asarray(row, dtype=np.float64)))
            else:
                arms.append(SimplexVector(np.asarray(row, dtype=np.float64)))
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"key 'P' row {i}: {exc}") from exc

    name = raw.get("name", path.stem)
    if not isinstance(name, str) or not name:
        raise ConfigError("key 'name' must be a nonempty string")
    try:
        instance = ProblemInstance(arms=tuple(arms), support=support, name=name)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    delta = _config_number(raw, "delta")
    alpha = _config_number(raw, "alpha", 0.5)
    epsilon_slack = _config_number(raw, "epsilon_slack", 0.0)
    max_steps = _config_number(raw, "max_steps", 10_000_000)
    seed = _config_number(raw, "seed", 0)
    trials = _config_number(raw, "trials", 100)
    histogram_bins = _config_number(raw, "histogram_bins", DEFAULT_HISTOGRAM_BINS)
    el_radius_scale = _config_number(raw, "el_radius_scale", 1.0)
    if int(trials) != trials or trials < 1:
        raise ConfigError("key 'trials' must be a positive integer")
    if int(max_steps) != max_steps or max_steps < 1:
        raise ConfigError("key 'max_steps' must be a positive integer")
    if int(seed) != seed:
        raise ConfigError("key 'seed' must be an integer")
    if int(histogram_bins) != histogram_bins or histogram_bins < 1:
        raise ConfigError("key 'histogram_bins' must be a positive integer")

    mode_tokens = raw.get("modes", [m.value for m in Mode])
    if isinstance(mode_tokens, str):
        mode_tokens = [tok for tok in mode_tokens.split(",") if tok.strip()]
    if not isinstance(mode_tokens, list) or not mode_tokens:
        raise ConfigError("key 'modes' must be a nonempty list or comma string")
    try:
        modes = tuple(parse_mode(tok) for tok in mode_tokens)
    except ValueError as exc:
        raise ConfigError(f"key 'modes': {exc}") from exc
    if len(set(modes)) != len(modes):
        raise ConfigError("key 'modes' contains duplicates")

    workers = raw.get("workers")
    if workers is not None and (not isinstance(workers, int) or workers < 1):
        raise ConfigError("key 'workers' must be a positive integer")
    out_dir = raw.get("out")
    if out_dir is not None and not isinstance(out_dir, str):
        raise ConfigError("key 'out' must be a string path")

    try:
        base_config = RunConfig(
            delta=float(delta),
            mode=modes[0],
            alpha=float(alpha),
            epsilon_slack=float(epsilon_slack),
            max_steps=int(max_steps),
            seed=int(seed),
            el_radius_scale=float(el_radius_scale),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    return RunPlan(
        scenario=Scenario(instance=instance, label=name),
        base_config=base_config,
        trials=int(trials),
        modes=modes,
        out_dir=out_dir,
        histogram_bins=int(histogram_bins),
        workers=workers,
    )
