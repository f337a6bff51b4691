"""Closed-form confidence bonuses and the interval constructions built on them.

Two bonus families are provided. The mean-level bonus treats an arm's reward
as a single bounded variable:

    beta_mean = sqrt( log(2*K*t / delta) / (2*n) )

The per-outcome bonuses bound each probability component separately, paying
an extra union-bound factor d inside the logarithm:

    beta_hoeffding = sqrt( log(2*d*K*t / delta) / (2*n) )
    beta_bernstein = sqrt(2 * phat * (1 - phat)) * sqrt( log(2*d*K*t / delta) / (2*n) )
                     + log(2*d*K*t / delta) / (3*n)

Intervals take the componentwise minimum of the two and clip probability
bounds to [0, 1] before weighting by the support values; clipping only
tightens the interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .model import ArmStatistics, SupportVector

__all__ = [
    "BonusContext",
    "MeanInterval",
    "hoeffding_nonstructured",
    "hoeffding_structured",
    "bernstein_structured",
    "combined_structured_bonus",
    "structured_interval",
    "nonstructured_interval",
]


@dataclass(frozen=True)
class BonusContext:
    """Everything a bonus formula needs besides the empirical estimate.

    ``t`` is the global sample count (total draws so far across all arms),
    ``n`` the pull count of the arm being bounded.
    """

    t: int
    K: int
    d: int
    delta: float
    n: int

    def __post_init__(self) -> None:
        if self.t < 1:
            raise ValueError("t must be at least 1")
        if self.K < 1 or self.d < 1:
            raise ValueError("K and d must be at least 1")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if 2.0 * self.K * self.t / self.delta <= 1.0:
            raise ValueError("log argument 2*K*t/delta must exceed 1")


class MeanInterval(NamedTuple):
    """A lower/upper confidence bracket around an arm's expected value."""

    lcb: float
    ucb: float

    @property
    def width(self) -> float:
        return self.ucb - self.lcb


@njit(cache=True, nogil=True)
def _hoeffding_bonus(t, m, delta, n):
    """sqrt(log(2*m*t/delta) / (2n)); m is K or d*K depending on the union bound."""
    return np.sqrt(np.log(2.0 * m * t / delta) / (2.0 * n))


@njit(cache=True, nogil=True)
def _bernstein_bonus(t, m, delta, n, p_hat):
    log_term = np.log(2.0 * m * t / delta)
    variance = p_hat * (1.0 - p_hat)
    return np.sqrt(2.0 * variance) * np.sqrt(log_term / (2.0 * n)) + log_term / (3.0 * n)


@njit(cache=True, nogil=True)
def _nonstructured_interval(counts, pulls, values, t, K, delta):
    d = counts.shape[0]
    mean = 0.0
    for i in range(d):
        mean += (counts[i] / pulls) * values[i]
    bonus = _hoeffding_bonus(t, K, delta, pulls)
    lo = mean - bonus
    hi = mean + bonus
    if lo < 0.0:
        lo = 0.0
    if hi > 1.0:
        hi = 1.0
    return lo, hi


@njit(cache=True, nogil=True)
def _structured_interval(counts, pulls, values, t, K, d, delta):
    log_term = np.log(2.0 * d * K * t / delta)
    hoeffding = np.sqrt(log_term / (2.0 * pulls))
    lo = 0.0
    hi = 0.0
    for i in range(d):
        p_hat = counts[i] / pulls
        variance = p_hat * (1.0 - p_hat)
        bernstein = (
            np.sqrt(2.0 * variance) * np.sqrt(log_term / (2.0 * pulls))
            + log_term / (3.0 * pulls)
        )
        bonus = min(hoeffding, bernstein)
        p_lo = p_hat - bonus
        if p_lo < 0.0:
            p_lo = 0.0
        p_hi = p_hat + bonus
        if p_hi > 1.0:
            p_hi = 1.0
        lo += p_lo * values[i]
        hi += p_hi * values[i]
    return lo, hi


def hoeffding_nonstructured(ctx: BonusContext) -> float:
    """Mean-level Hoeffding bonus with a 2*K*t union bound."""
    return float(_hoeffding_bonus(ctx.t, ctx.K, ctx.delta, ctx.n))


def hoeffding_structured(ctx: BonusContext) -> float:
    """Per-outcome Hoeffding bonus with a 2*d*K*t union bound."""
    return float(_hoeffding_bonus(ctx.t, ctx.d * ctx.K, ctx.delta, ctx.n))


def bernstein_structured(ctx: BonusContext, p_hat_i: float) -> float:
    """Per-outcome empirical-Bernstein bonus using variance phat*(1-phat)."""
    if not 0.0 <= p_hat_i <= 1.0:
        raise ValueError(f"p_hat_i must lie in [0, 1], got {p_hat_i}")
    return float(_bernstein_bonus(ctx.t, ctx.d * ctx.K, ctx.delta, ctx.n, p_hat_i))


def combined_structured_bonus(ctx: BonusContext, p_hat_i: float) -> float:
    """Componentwise minimum of the Hoeffding and Bernstein bonuses."""
    return min(hoeffding_structured(ctx), bernstein_structured(ctx, p_hat_i))


def _check_stats(stats: ArmStatistics, v: SupportVector, ctx: BonusContext) -> None:
    if stats.pulls < 1:
        raise ValueError("no samples: the arm has never been pulled")
    if stats.d != v.d:
        raise ValueError(f"dimension mismatch: counts have {stats.d}, support {v.d}")
    if ctx.n != stats.pulls:
        raise ValueError(
            f"context says n={ctx.n} but the statistics carry {stats.pulls} pulls"
        )


def structured_interval(
    stats: ArmStatistics, v: SupportVector, ctx: BonusContext
) -> MeanInterval:
    """Per-outcome interval: clip(phat_i -/+ bonus_i, 0, 1) dotted with the values."""
    _check_stats(stats, v, ctx)
    lo, hi = _structured_interval(
        stats.counts, stats.pulls, v.values, ctx.t, ctx.K, ctx.d, ctx.delta
    )
    return MeanInterval(float(lo), float(hi))


def nonstructured_interval(
    stats: ArmStatistics, v: SupportVector, ctx: BonusContext
) -> MeanInterval:
    """Mean-level interval: empirical mean +/- Hoeffding bonus, clipped to [0, 1]."""
    _check_stats(stats, v, ctx)
    lo, hi = _nonstructured_interval(
        stats.counts, stats.pulls, v.values, ctx.t, ctx.K, ctx.delta
    )
    return MeanInterval(float(lo), float(hi))
