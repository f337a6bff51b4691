"""The leader-challenger identification loop, generic over the bound family.

Every mode runs the same skeleton: pull each arm once, then repeat
{build one confidence interval per arm, pick the leader (highest lower
bound) and the challenger (highest upper bound among the rest), stop when
the leader's lower bound clears the challenger's upper bound by the slack,
otherwise sample the leader with probability alpha and the challenger
otherwise}. The recommended arm is the leader at stopping time.

The untraced path runs entirely inside a compiled kernel; the traced path
is a Python loop that calls the same compiled interval routines and
consumes randomness in the same order, so both paths produce identical
results for a given seed.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .bounds import MeanInterval, _nonstructured_interval, _structured_interval
from .kl import _el_max_mean, _el_radius
from .model import ArmStatistics, ProblemInstance, _sample_index, sample_outcome

__all__ = [
    "Mode",
    "parse_mode",
    "RunConfig",
    "TraceRecord",
    "RunResult",
    "initialize",
    "select_leader_challenger",
    "sample_choice",
    "should_stop",
    "run",
    "write_trace_csv",
]

TRACE_CSV_HEADER = ("step", "arm", "leader", "challenger", "lcb_leader", "ucb_challenger")


class Mode(enum.Enum):
    """Which confidence-interval family drives the loop."""

    NONSTRUCTURED = "nonstructured"
    STRUCTURED = "structured"
    EMPIRICAL_LIKELIHOOD = "el"


_MODE_CODES = {
    Mode.NONSTRUCTURED: 0,
    Mode.STRUCTURED: 1,
    Mode.EMPIRICAL_LIKELIHOOD: 2,
}

_MODE_ALIASES = {
    "nonstructured": Mode.NONSTRUCTURED,
    "non-structured": Mode.NONSTRUCTURED,
    "non_structured": Mode.NONSTRUCTURED,
    "structured": Mode.STRUCTURED,
    "el": Mode.EMPIRICAL_LIKELIHOOD,
    "empirical-likelihood": Mode.EMPIRICAL_LIKELIHOOD,
    "empirical_likelihood": Mode.EMPIRICAL_LIKELIHOOD,
}


def parse_mode(token: str) -> Mode:
    try:
        return _MODE_ALIASES[token.strip().lower()]
    except KeyError:
        raise ValueError(
            f"unknown mode {token!r}; expected one of "
            f"{sorted(set(_MODE_ALIASES))}"
        ) from None


def mode_index(mode: Mode) -> int:
    """Stable integer id of a mode, used for seed derivation."""
    return _MODE_CODES[mode]


@dataclass(frozen=True)
class RunConfig:
    """Parameters of a single identification run. ``delta`` has no default."""

    delta: float
    mode: Mode
    alpha: float = 0.5
    epsilon_slack: float = 0.0
    max_steps: int = 10_000_000
    seed: int = 0
    trace: bool = False
    el_radius_scale: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.epsilon_slack < 0.0:
            raise ValueError("epsilon_slack must be nonnegative")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")
        if self.el_radius_scale <= 0.0:
            raise ValueError("el_radius_scale must be positive")


@dataclass(frozen=True)
class TraceRecord:
    """One sampling step: who led, who challenged, and what was pulled."""

    step: int
    arm: int
    leader: int
    challenger: int
    lcb_leader: float
    ucb_challenger: float
    intervals: tuple[MeanInterval, ...]


@dataclass(frozen=True)
class RunResult:
    recommended: int
    tau: int
    correct: bool
    truncated: bool
    trace: tuple[TraceRecord, ...] | None = None


def initialize(
    instance: ProblemInstance, rng: np.random.Generator
) -> list[ArmStatistics]:
    """Pull every arm once, in index order."""
    stats = [ArmStatistics.empty(instance.d) for _ in range(instance.K)]
    for a, arm in enumerate(instance.arms):
        stats[a].update(sample_outcome(arm, rng))
    return stats


def select_leader_challenger(intervals) -> tuple[int, int]:
    """Leader = argmax lower bound; challenger = argmax upper bound elsewhere.

    Ties break toward the lowest index.
    """
    if len(intervals) < 2:
        raise ValueError("need at least two intervals")
    leader = 0
    best_lcb = intervals[0][0]
    for a in range(1, len(intervals)):
        if intervals[a][0] > best_lcb:
            best_lcb = intervals[a][0]
            leader = a
    challenger = -1
    best_ucb = -math.inf
    for a in range(len(intervals)):
        if a != leader and intervals[a][1] > best_ucb:
            best_ucb = intervals[a][1]
            challenger = a
    return leader, challenger


def sample_choice(
    leader: int, challenger: int, alpha: float, rng: np.random.Generator
) -> int:
    """Return the leader with probability alpha, the challenger otherwise."""
    return leader if rng.random() < alpha else challenger


def should_stop(
    leader_interval: MeanInterval,
    challenger_interval: MeanInterval,
    epsilon_slack: float,
) -> bool:
    return leader_interval[0] - challenger_interval[1] >= epsilon_slack


@njit(cache=True, nogil=True)
def _el_interval(counts, pulls, values, neg_values, t, K, delta, radius_scale):
    d = counts.shape[0]
    p_hat = np.empty(d)
    for i in range(d):
        p_hat[i] = counts[i] / pulls
    radius = radius_scale * _el_radius(t, K, delta, pulls)
    hi = _el_max_mean(p_hat, values, radius)
    lo = -_el_max_mean(p_hat, neg_values, radius)
    return lo, hi


@njit(cache=True, nogil=True)
def _run_loop(P, values, mode_code, delta, alpha, epsilon_slack, max_steps,
              radius_scale, rng):
    K, d = P.shape
    counts = np.zeros((K, d), dtype=np.int64)
    pulls = np.zeros(K, dtype=np.int64)
    t = 0
    for a in range(K):
        idx = _sample_index(P[a], rng)
        counts[a, idx] += 1
        pulls[a] += 1
        t += 1
    neg_values = -values
    lcb = np.empty(K)
    ucb = np.empty(K)
    while True:
        for a in range(K):
            if mode_code == 0:
                lo, hi = _nonstructured_interval(counts[a], pulls[a], values, t, K, delta)
            elif mode_code == 1:
                lo, hi = _structured_interval(counts[a], pulls[a], values, t, K, d, delta)
            else:
                lo, hi = _el_interval(counts[a], pulls[a], values, neg_values,
                                      t, K, delta, radius_scale)
            lcb[a] = lo
            ucb[a] = hi
        leader = 0
        best_lcb = lcb[0]
        for a in range(1, K):
            if lcb[a] > best_lcb:
                best_lcb = lcb[a]
                leader = a
        challenger = -1
        best_ucb = -np.inf
        for a in range(K):
            if a != leader and ucb[a] > best_ucb:
                best_ucb = ucb[a]
                challenger = a
        if lcb[leader] - ucb[challenger] >= epsilon_slack:
            return t, leader, False
        if t >= max_steps:
            return t, leader, True
        u = rng.random()
        chosen = leader if u < alpha else challenger
        idx = _sample_index(P[chosen], rng)
        counts[chosen, idx] += 1
        pulls[chosen] += 1
        t += 1


def _traced_run(
    instance: ProblemInstance, config: RunConfig, rng: np.random.Generator
) -> tuple[int, int, bool, tuple[TraceRecord, ...]]:
    # Mirrors _run_loop step for step; all float math goes through the same
    # compiled routines, so the two paths agree exactly.
    P = instance.matrix
    values = instance.support.values
    neg_values = -values
    K, d = P.shape
    mode_code = _MODE_CODES[config.mode]
    counts = np.zeros((K, d), dtype=np.int64)
    pulls = np.zeros(K, dtype=np.int64)
    t = 0
    for a in range(K):
        idx = int(_sample_index(P[a], rng))
        counts[a, idx] += 1
        pulls[a] += 1
        t += 1
    trace: list[TraceRecord] = []
    while True:
        intervals = []
        for a in range(K):
            if mode_code == 0:
                lo, hi = _nonstructured_interval(
                    counts[a], pulls[a], values, t, K, config.delta
                )
            elif mode_code == 1:
                lo, hi = _structured_interval(
                    counts[a], pulls[a], values, t, K, d, config.delta
                )
            else:
                lo, hi = _el_interval(
                    counts[a], pulls[a], values, neg_values,
                    t, K, config.delta, config.el_radius_scale,
                )
            intervals.append(MeanInterval(float(lo), float(hi)))
        leader, challenger = select_leader_challenger(intervals)
        if should_stop(intervals[leader], intervals[challenger], config.epsilon_slack):
            return t, leader, False, tuple(trace)
        if t >= config.max_steps:
            return t, leader, True, tuple(trace)
        chosen = sample_choice(leader, challenger, config.alpha, rng)
        idx = int(_sample_index(P[chosen], rng))
        counts[chosen, idx] += 1
        pulls[chosen] += 1
        t += 1
        trace.append(
            TraceRecord(
                step=t,
                arm=chosen,
                leader=leader,
                challenger=challenger,
                lcb_leader=intervals[leader].lcb,
                ucb_challenger=intervals[challenger].ucb,
                intervals=tuple(intervals),
            )
        )


def run(instance: ProblemInstance, config: RunConfig) -> RunResult:
    """Execute one identification run; deterministic given the seed.

    Hitting ``max_steps`` is reported through ``truncated``, never raised.
    """
    if config.max_steps < instance.K:
        raise ValueError(
            f"max_steps={config.max_steps} cannot cover the "
            f"{instance.K}-pull initialization"
        )
    rng = np.random.default_rng(config.seed)
    if config.trace:
        tau, leader, truncated, trace = _traced_run(instance, config, rng)
    else:
        tau, leader, truncated = _run_loop(
            instance.matrix,
            instance.support.values,
            _MODE_CODES[config.mode],
            config.delta,
            config.alpha,
            config.epsilon_slack,
            config.max_steps,
            config.el_radius_scale,
            rng,
        )
        trace = None
    recommended = int(leader)
    return RunResult(
        recommended=recommended,
        tau=int(tau),
        correct=recommended in instance.optimal_arms,
        truncated=bool(truncated),
        trace=trace,
    )


def write_trace_csv(trace, fileobj) -> None:
    """Write trace records as CSV rows (step, arm, leader, challenger, bounds)."""
    writer = csv.writer(fileobj, lineterminator="\n")
    writer.writerow(TRACE_CSV_HEADER)
    for record in trace:
        writer.writerow(
            (
                record.step,
                record.arm,
                record.leader,
                record.challenger,
                repr(record.lcb_leader),
                repr(record.ucb_challenger),
            )
        )
