"""KL-divergence geometry on the simplex.

The confidence region here is a KL ball around the empirical distribution,
KL(phat, q) <= radius, and the interval endpoints are the extreme means q.v
over that ball. Two equivalent scalar problems do all the work:

* ``klinf_upper(phat, v, x)`` — the cheapest KL move that lifts the mean to
  at least ``x``. Solved through its concave dual: maximize
  ``sum_i phat_i * log(1 - lam*(v_i - x))`` over ``lam`` in
  ``[0, 1/(max(v) - x))``, where the optimizer may push mass onto
  unobserved high-value outcomes (the boundary of the lambda range).

* ``el_upper(ball, v)`` — the largest mean inside the ball. Stationarity
  gives ``q_i = theta * p_i / (nu - v_i)`` for a scalar ``nu > max(v)``;
  the active KL constraint pins ``nu`` as the root of a monotone function
  and the maximum mean is ``nu - theta``. When the root would fall below
  ``max(v)`` the leftover mass sits on the best outcome and ``nu = max(v)``.

Lower-tail versions are the upper-tail versions on the negated support.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .bounds import BonusContext
from .model import SimplexVector, SupportVector

__all__ = [
    "KlBall",
    "kl_divergence",
    "kl_bernoulli",
    "klinf_upper",
    "klinf_lower",
    "el_upper",
    "el_lower",
    "el_radius",
]

_LAMBDA_TOL = 1e-12
_LAMBDA_CAP = 200
_NU_TOL = 1e-12
_NU_CAP = 200


@dataclass(frozen=True)
class KlBall:
    """KL(center, .) <= radius confidence region around an empirical estimate."""

    center: SimplexVector
    radius: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.radius) or self.radius < 0.0:
            raise ValueError("radius must be a finite nonnegative real")


def _probs(p) -> np.ndarray:
    if isinstance(p, SimplexVector):
        return p.probabilities
    return np.asarray(p, dtype=np.float64)


def _values(v) -> np.ndarray:
    if isinstance(v, SupportVector):
        return v.values
    return np.asarray(v, dtype=np.float64)


@njit(cache=True, nogil=True)
def _el_radius(t, K, delta, n):
    return np.log(2.0 * K * t / delta) / n


@njit(cache=True, nogil=True)
def _kl_divergence(p, q):
    total = 0.0
    for i in range(p.shape[0]):
        if p[i] > 0.0:
            if q[i] <= 0.0:
                return np.inf
            total += p[i] * np.log(p[i] / q[i])
    return total if total > 0.0 else 0.0


@njit(cache=True, nogil=True)
def _kl_bernoulli(x, y):
    total = 0.0
    if x > 0.0:
        total += x * np.log(x / y)
    if x < 1.0:
        total += (1.0 - x) * np.log((1.0 - x) / (1.0 - y))
    return total if total > 0.0 else 0.0


@njit(cache=True, nogil=True)
def _klinf_dual(p, v, x):
    """min KL(p, q) over q on the simplex with q.v >= x, via the lambda dual."""
    d = p.shape[0]
    mu = 0.0
    v_max = v[0]
    for i in range(d):
        mu += p[i] * v[i]
        if v[i] > v_max:
            v_max = v[i]
    if x <= mu:
        return 0.0
    if x >= v_max:
        # only the point masses on argmax(v) reach this mean, and p is not one
        return np.inf
    lam_hi = (1.0 - _LAMBDA_TOL) / (v_max - x)
    # derivative of the concave dual objective at lam_hi
    slope = 0.0
    for i in range(d):
        if p[i] > 0.0:
            slope += p[i] * (x - v[i]) / (1.0 - lam_hi * (v[i] - x))
    if slope >= 0.0:
        lam = lam_hi
    else:
        lo = 0.0
        hi = lam_hi
        for _ in range(_LAMBDA_CAP):
            if hi - lo <= _LAMBDA_TOL:
                break
            mid = 0.5 * (lo + hi)
            slope = 0.0
            for i in range(d):
                if p[i] > 0.0:
                    slope += p[i] * (x - v[i]) / (1.0 - mid * (v[i] - x))
            if slope > 0.0:
                lo = mid
            else:
                hi = mid
        lam = 0.5 * (lo + hi)
    value = 0.0
    for i in range(d):
        if p[i] > 0.0:
            value += p[i] * np.log(1.0 - lam * (v[i] - x))
    return value if value > 0.0 else 0.0


@njit(cache=True, nogil=True)
def _el_max_mean(p, v, radius):
    """max q.v over the KL ball KL(p, q) <= radius, q on the known support."""
    d = p.shape[0]
    mu = 0.0
    v_max = v[0]
    for i in range(d):
        mu += p[i] * v[i]
        if v[i] > v_max:
            v_max = v[i]
    if radius <= 0.0:
        return mu
    if mu >= v_max:
        return v_max
    # g(nu) = sum_i p_i*log(nu - v_i) + log(sum_i p_i/(nu - v_i)) decreases
    # from g(v_max+) to 0 on (v_max, inf); the KL constraint reads g(nu) = radius.
    mass_at_max = False
    for i in range(d):
        if p[i] > 0.0 and v[i] == v_max:
            mass_at_max = True
            break
    if not mass_at_max:
        log_part = 0.0
        inv_sum = 0.0
        for i in range(d):
            if p[i] > 0.0:
                log_part += p[i] * np.log(v_max - v[i])
                inv_sum += p[i] / (v_max - v[i])
        if log_part + np.log(inv_sum) <= radius:
            # constraint slack at nu = v_max: leftover mass moves to the best outcome
            return v_max - np.exp(log_part - radius)
    lo = v_max
    width = 1.0
    hi = v_max + width
    for _ in range(_NU_CAP):
        g = 0.0
        inv_sum = 0.0
        for i in range(d):
            if p[i] > 0.0:
                g += p[i] * np.log(hi - v[i])
                inv_sum += p[i] / (hi - v[i])
        g += np.log(inv_sum)
        if g < radius:
            break
        lo = hi
        width *= 2.0
        hi = v_max + width
    for _ in range(_NU_CAP):
        if hi - lo <= _NU_TOL * (1.0 + hi):
            break
        mid = 0.5 * (lo + hi)
        g = 0.0
        inv_sum = 0.0
        for i in range(d):
            if p[i] > 0.0:
                g += p[i] * np.log(mid - v[i])
                inv_sum += p[i] / (mid - v[i])
        g += np.log(inv_sum)
        if g > radius:
            lo = mid
        else:
            hi = mid
    nu = 0.5 * (lo + hi)
    inv_sum = 0.0
    for i in range(d):
        if p[i] > 0.0:
            inv_sum += p[i] / (nu - v[i])
    return nu - 1.0 / inv_sum


def kl_divergence(p, q) -> float:
    """KL(p, q) on a shared finite support; +inf when p charges a q-null outcome."""
    p_arr = _probs(p)
    q_arr = _probs(q)
    if p_arr.shape != q_arr.shape:
        raise ValueError(
            f"dimension mismatch: {p_arr.shape[0]} versus {q_arr.shape[0]}"
        )
    return float(_kl_divergence(p_arr, q_arr))


def kl_bernoulli(x: float, y: float) -> float:
    """Binary KL divergence kl(x, y) with the 0*log(0) = 0 convention."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"y must lie in [0, 1], got {y}")
    if y in (0.0, 1.0):
        return 0.0 if x == y else float("inf")
    return float(_kl_bernoulli(x, y))


def _check_threshold(p_arr: np.ndarray, v_arr: np.ndarray, x: float) -> None:
    if p_arr.shape != v_arr.shape:
        raise ValueError(
            f"dimension mismatch: {p_arr.shape[0]} versus {v_arr.shape[0]}"
        )
    if not v_arr.min() <= x <= v_arr.max():
        raise ValueError(
            f"threshold {x} outside the support range "
            f"[{v_arr.min()}, {v_arr.max()}]"
        )


def klinf_upper(p_hat, v, x: float) -> float:
    """Smallest KL(p_hat, q) over distributions q with mean q.v at least x."""
    p_arr = _probs(p_hat)
    v_arr = _values(v)
    _check_threshold(p_arr, v_arr, x)
    return float(_klinf_dual(p_arr, v_arr, x))


def klinf_lower(p_hat, v, x: float) -> float:
    """Smallest KL(p_hat, q) over distributions q with mean q.v at most x."""
    p_arr = _probs(p_hat)
    v_arr = _values(v)
    _check_threshold(p_arr, v_arr, x)
    return float(_klinf_dual(p_arr, -v_arr, -x))


def el_upper(ball: KlBall, v) -> float:
    """Largest mean q.v over the KL ball; at least the center's mean."""
    v_arr = _values(v)
    p_arr = ball.center.probabilities
    if p_arr.shape != v_arr.shape:
        raise ValueError(
            f"dimension mismatch: {p_arr.shape[0]} versus {v_arr.shape[0]}"
        )
    return float(_el_max_mean(p_arr, v_arr, ball.radius))


def el_lower(ball: KlBall, v) -> float:
    """Smallest mean q.v over the KL ball; at most the center's mean."""
    v_arr = _values(v)
    p_arr = ball.center.probabilities
    if p_arr.shape != v_arr.shape:
        raise ValueError(
            f"dimension mismatch: {p_arr.shape[0]} versus {v_arr.shape[0]}"
        )
    return float(-_el_max_mean(p_arr, -v_arr, ball.radius))


def el_radius(ctx: BonusContext) -> float:
    """KL-ball radius log(2*K*t/delta) / n.

    This matches the union-bound rate used by the Hoeffding bonuses so the
    three interval constructions differ only in geometry. The schedule is a
    convention, not a law; the run configuration exposes a scale knob
    (``el_radius_scale``) for overriding it.
    """
    return float(_el_radius(ctx.t, ctx.K, ctx.delta, ctx.n))
