"""Characteristic time and the sample-complexity floor for binary projections.

For arm means mu (each in (0, 1), unique best arm), the inverse
characteristic time is

    T_inv = max over pull proportions w of
            min over suboptimal a of
            inf over x of [ w_best * kl(mu_best, x) + w_a * kl(mu_a, x) ]

and any strategy that is correct with probability 1 - delta must satisfy
E[tau] >= T * kl(delta, 1 - delta).

The solver exploits the structure instead of generic optimization: each
challenger term depends only on (w_best, w_a) and increases in w_a, so for
a fixed leader weight the optimum equalizes all challenger terms at a
common level found by root-finding, and that level is a concave function
of the leader weight, so a scalar golden-section pass finishes the job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .kl import _kl_bernoulli, kl_bernoulli

__all__ = ["CharacteristicTime", "characteristic_time", "sample_complexity_bound"]

_X_TOL = 1e-9
_LEVEL_ITERS = 60
_WEIGHT_ITERS = 60
_LEADER_W_TOL = 1e-7


@dataclass(frozen=True)
class CharacteristicTime:
    """T* and the pull proportions that attain it."""

    t_star: float
    weights: tuple[float, ...]


@njit(cache=True, nogil=True)
def _pair_objective(w_best, w_a, mu_best, mu_a):
    """inf over x in [mu_a, mu_best] of the weighted two-point divergence.

    The integrand is convex in x; ternary search on the bracket.
    """
    lo = mu_a
    hi = mu_best
    while hi - lo > _X_TOL:
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        f1 = w_best * _kl_bernoulli(mu_best, m1) + w_a * _kl_bernoulli(mu_a, m1)
        f2 = w_best * _kl_bernoulli(mu_best, m2) + w_a * _kl_bernoulli(mu_a, m2)
        if f1 <= f2:
            hi = m2
        else:
            lo = m1
    x = 0.5 * (lo + hi)
    return w_best * _kl_bernoulli(mu_best, x) + w_a * _kl_bernoulli(mu_a, x)


@njit(cache=True, nogil=True)
def _weight_for_level(w_best, level, mu_best, mu_a):
    """Smallest w_a whose pair objective reaches the level (it grows with w_a)."""
    if level <= 0.0:
        return 0.0
    hi = 1.0
    while _pair_objective(w_best, hi, mu_best, mu_a) < level:
        hi *= 2.0
        if hi > 1e12:
            return np.inf
    lo = 0.0
    for _ in range(_WEIGHT_ITERS):
        mid = 0.5 * (lo + hi)
        if _pair_objective(w_best, mid, mu_best, mu_a) < level:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@njit(cache=True, nogil=True)
def _level_for_leader(w_best, mu_best, others):
    """Common challenger level whose equalizing weights spend budget 1 - w_best."""
    budget = 1.0 - w_best
    cap = np.inf
    for j in range(others.shape[0]):
        c = w_best * _kl_bernoulli(mu_best, others[j])
        if c < cap:
            cap = c
    lo = 0.0
    hi = cap * (1.0 - 1e-12)
    for _ in range(_LEVEL_ITERS):
        mid = 0.5 * (lo + hi)
        used = 0.0
        for j in range(others.shape[0]):
            used += _weight_for_level(w_best, mid, mu_best, others[j])
            if used > budget:
                break
        if used > budget:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def characteristic_time(means) -> CharacteristicTime:
    """Solve for T* and the optimal pull proportions.

    Raises for means outside (0, 1) or when the best arm is not unique
    (the identification problem is degenerate in that case).
    """
    mu = np.asarray(means, dtype=np.float64)
    if mu.ndim != 1 or mu.size < 2:
        raise ValueError("need a one-dimensional list of at least two means")
    if np.any(mu <= 0.0) or np.any(mu >= 1.0):
        raise ValueError("means must lie strictly inside (0, 1)")
    order = np.argsort(mu)
    if mu[order[-1]] == mu[order[-2]]:
        raise ValueError("degenerate instance: the best mean is not unique")
    best = int(np.argmax(mu))
    mu_best = float(mu[best])
    others_idx = [a for a in range(mu.size) if a != best]
    others = mu[others_idx]

    # golden-section maximization of the (concave) level over the leader weight
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = 1e-9, 1.0 - 1e-9
    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1 = _level_for_leader(x1, mu_best, others)
    f2 = _level_for_leader(x2, mu_best, others)
    while hi - lo > _LEADER_W_TOL:
        if f1 < f2:
            lo = x1
            x1, f1 = x2, f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = _level_for_leader(x2, mu_best, others)
        else:
            hi = x2
            x2, f2 = x1, f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = _level_for_leader(x1, mu_best, others)
    w_best = 0.5 * (lo + hi)
    level = _level_for_leader(w_best, mu_best, others)
    if level <= 0.0:
        raise ValueError("characteristic-time solver failed to find a positive level")

    weights = np.empty(mu.size)
    weights[best] = w_best
    for idx, mu_a in zip(others_idx, others):
        weights[idx] = _weight_for_level(w_best, level, mu_best, float(mu_a))
    weights = np.maximum(weights, 0.0)
    weights /= weights.sum()
    return CharacteristicTime(
        t_star=1.0 / level, weights=tuple(float(w) for w in weights)
    )


def sample_complexity_bound(ct: CharacteristicTime, delta: float) -> float:
    """Expected-sample floor T* times kl(delta, 1 - delta) for risk delta."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    return ct.t_star * kl_bernoulli(delta, 1.0 - delta)
