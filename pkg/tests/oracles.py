"""Brute-force reference computations used to pin the library's numerics.

Everything here is deliberately independent of the library's solvers:
direct formula evaluation, exhaustive grids, and linear algebra only.
"""

from __future__ import annotations

import math

import numpy as np


def kl_ber(a: float, b: float) -> float:
    total = 0.0
    if a > 0.0:
        total += a * math.log(a / b)
    if a < 1.0:
        total += (1.0 - a) * math.log((1.0 - a) / (1.0 - b))
    return total


def _kl_rows(p: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """KL(p, q) for every row q of Q; +inf where q misses mass p needs."""
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(Q > 0.0, p[None, :] / Q, np.inf)
        terms = np.where(p[None, :] > 0.0, p[None, :] * np.log(ratios), 0.0)
    return terms.sum(axis=1)


def klinf_upper_plane_grid(p, v, x: float, step: float = 1e-3) -> float:
    """min KL(p, q) over the simplex slice {q . v = x}.

    The minimizer of the mean-constrained problem sits on the constraint
    plane, so gridding the plane (exact for d = 2, a one-dimensional sweep
    for d = 3) avoids the first-order error a full-simplex grid would pay
    for violating the constraint.
    """
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    d = p.size
    if d == 2:
        q1 = (x - v[0]) / (v[1] - v[0])
        q = np.array([1.0 - q1, q1])
        if np.any(q < -1e-12):
            return math.inf
        q = np.clip(q, 0.0, 1.0)
        return float(_kl_rows(p, q[None, :])[0])
    if d != 3:
        raise ValueError("plane grid oracle supports d in {2, 3}")
    q1 = np.arange(0.0, 1.0 + step / 2.0, step)
    q3 = (x - q1 * v[0] - (1.0 - q1) * v[1]) / (v[2] - v[1])
    q2 = 1.0 - q1 - q3
    ok = (q2 >= 0.0) & (q3 >= 0.0) & (q2 <= 1.0) & (q3 <= 1.0)
    if not np.any(ok):
        return math.inf
    Q = np.stack([q1, q2, q3], axis=1)[ok]
    return float(_kl_rows(p, Q).min())


def klinf_lower_plane_grid(p, v, x: float, step: float = 1e-3) -> float:
    v = np.asarray(v, dtype=float)
    return klinf_upper_plane_grid(p, -v, -x, step)


_GRID_CACHE: dict[tuple[int, int], np.ndarray] = {}


def simplex_grid(d: int, step: float = 1e-3) -> np.ndarray:
    """All lattice points with spacing ``step`` on the d-simplex."""
    n = int(round(1.0 / step))
    key = (d, n)
    if key in _GRID_CACHE:
        return _GRID_CACHE[key]
    if d == 2:
        i = np.arange(n + 1)
        grid = np.stack([i, n - i], axis=1) / n
    elif d == 3:
        blocks = []
        for i in range(n + 1):
            j = np.arange(n + 1 - i)
            blocks.append(np.stack([np.full_like(j, i), j, n - i - j], axis=1))
        grid = np.concatenate(blocks) / n
    else:
        raise ValueError("simplex grid oracle supports d in {2, 3}")
    _GRID_CACHE[key] = grid
    return grid


def el_extreme_mean_grid(
    p, v, radius: float, step: float = 1e-3, maximize: bool = True
) -> float:
    """Extreme mean q . v over the KL ball, by exhaustive simplex grid."""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    Q = simplex_grid(p.size, step)
    feasible = _kl_rows(p, Q) <= radius
    means = Q @ v
    selected = means[feasible]
    return float(selected.max() if maximize else selected.min())


def tstar_inv_grid_2(mu_best: float, mu_other: float,
                     w_step: float = 1e-3, x_step: float = 1e-3) -> float:
    """Grid value of the inverse characteristic time for two arms."""
    xs = np.arange(mu_other + x_step, mu_best, x_step)
    kl_best = np.array([kl_ber(mu_best, x) for x in xs])
    kl_other = np.array([kl_ber(mu_other, x) for x in xs])
    best = 0.0
    for w1 in np.arange(w_step, 1.0, w_step):
        value = float(np.min(w1 * kl_best + (1.0 - w1) * kl_other))
        if value > best:
            best = value
    return best


def tstar_inv_grid_3(means, w_step: float = 2e-3, x_step: float = 1e-3) -> float:
    """Grid value of the inverse characteristic time for three arms."""
    mus = np.asarray(means, dtype=float)
    best_arm = int(np.argmax(mus))
    others = [a for a in range(3) if a != best_arm]
    mu1 = float(mus[best_arm])
    tables = {}
    for a in others:
        xs = np.arange(float(mus[a]) + x_step, mu1, x_step)
        tables[a] = (
            np.array([kl_ber(mu1, x) for x in xs]),
            np.array([kl_ber(float(mus[a]), x) for x in xs]),
        )
    best = 0.0
    for w1 in np.arange(w_step, 1.0, w_step):
        for w2 in np.arange(w_step, 1.0 - w1, w_step):
            w3 = 1.0 - w1 - w2
            if w3 <= 0.0:
                continue
            k1a, k2a = tables[others[0]]
            k1b, k3b = tables[others[1]]
            value = min(
                float(np.min(w1 * k1a + w2 * k2a)),
                float(np.min(w1 * k1b + w3 * k3b)),
            )
            if value > best:
                best = value
    return best
