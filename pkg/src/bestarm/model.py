"""Problem instances, arm sampling, and per-arm outcome statistics.

An arm is a multinomial distribution over ``d`` outcomes whose values are
known up front (the support). Sampling an arm returns the index of the
outcome that occurred; counts of those indices are the sufficient statistic
for everything downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = [
    "SIMPLEX_SUM_TOL",
    "SupportVector",
    "SimplexVector",
    "ProblemInstance",
    "ArmStatistics",
    "expected_value",
    "sample_outcome",
]

# Absolute tolerance on the probability sum accepted by the SimplexVector
# constructor. Inputs inside the tolerance are rescaled to an exact unit sum
# once, at construction; nothing is renormalized after that.
SIMPLEX_SUM_TOL = 1e-9


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class SupportVector:
    """The known values of the d possible outcomes, each in [0, 1]."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = _as_float_array(self.values, "support values").copy()
        if arr.size < 2:
            raise ValueError("support needs at least two outcomes")
        if not np.all(np.isfinite(arr)):
            raise ValueError("support values must be finite")
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise ValueError("support values must lie in [0, 1]")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def d(self) -> int:
        return int(self.values.size)

    @property
    def max_value(self) -> float:
        return float(self.values.max())

    @property
    def min_value(self) -> float:
        return float(self.values.min())

    @property
    def value_range(self) -> float:
        return self.max_value - self.min_value

    @property
    def l1_norm(self) -> float:
        return float(np.abs(self.values).sum())


@dataclass(frozen=True)
class SimplexVector:
    """A probability vector over d outcomes.

    The constructor accepts entries whose sum is within ``SIMPLEX_SUM_TOL``
    of one and rescales them to an exact unit sum. Use
    :meth:`from_weights` to build a distribution from arbitrary
    nonnegative weights (an explicit, non-silent renormalization).
    """

    probabilities: np.ndarray

    def __post_init__(self) -> None:
        arr = _as_float_array(self.probabilities, "probabilities").copy()
        if arr.size < 1:
            raise ValueError("probability vector must be nonempty")
        if not np.all(np.isfinite(arr)):
            raise ValueError("probabilities must be finite")
        if np.any(arr < 0.0):
            raise ValueError("probabilities must be nonnegative")
        total = float(arr.sum())
        if abs(total - 1.0) > SIMPLEX_SUM_TOL:
            raise ValueError(
                f"probabilities sum to {total:.12g}, not 1 within {SIMPLEX_SUM_TOL:g}"
            )
        arr /= total
        arr.setflags(write=False)
        object.__setattr__(self, "probabilities", arr)

    @classmethod
    def from_weights(cls, weights) -> "SimplexVector":
        """Build a distribution by explicitly renormalizing nonnegative weights."""
        arr = _as_float_array(weights, "weights")
        if not np.all(np.isfinite(arr)):
            raise ValueError("weights must be finite")
        if np.any(arr < 0.0):
            raise ValueError("weights must be nonnegative")
        total = float(arr.sum())
        if total <= 0.0:
            raise ValueError("weights must have a positive sum")
        return cls(arr / total)

    @property
    def d(self) -> int:
        return int(self.probabilities.size)


@dataclass(frozen=True)
class ProblemInstance:
    """Ground truth for a simulation: K arm distributions on one support."""

    arms: tuple[SimplexVector, ...]
    support: SupportVector
    name: str = "instance"

    def __post_init__(self) -> None:
        arms = tuple(self.arms)
        if len(arms) < 2:
            raise ValueError("an instance needs at least two arms")
        d = self.support.d
        for a, arm in enumerate(arms):
            if arm.d != d:
                raise ValueError(
                    f"arm {a} has {arm.d} outcomes but the support has {d}"
                )
        object.__setattr__(self, "arms", arms)

    @property
    def K(self) -> int:
        return len(self.arms)

    @property
    def d(self) -> int:
        return self.support.d

    @property
    def matrix(self) -> np.ndarray:
        """Arm distributions stacked as a (K, d) matrix."""
        return np.stack([arm.probabilities for arm in self.arms])

    @property
    def means(self) -> np.ndarray:
        return self.matrix @ self.support.values

    @property
    def best_arm(self) -> int:
        """Index of the arm with the highest expected value (lowest index on ties)."""
        return int(np.argmax(self.means))

    @property
    def optimal_arms(self) -> frozenset[int]:
        means = self.means
        best = means.max()
        return frozenset(int(a) for a in np.flatnonzero(means == best))

    @property
    def gap(self) -> float:
        """Difference between the best and second-best expected values."""
        means = np.sort(self.means)
        return float(means[-1] - means[-2])


@dataclass
class ArmStatistics:
    """Outcome counts for a single arm; the only mutable state in a run."""

    counts: np.ndarray
    pulls: int = 0

    def __post_init__(self) -> None:
        arr = np.asarray(self.counts, dtype=np.int64)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("counts must be a nonempty one-dimensional array")
        if np.any(arr < 0):
            raise ValueError("counts must be nonnegative")
        if int(arr.sum()) != self.pulls:
            raise ValueError(
                f"counts sum to {int(arr.sum())} but pulls is {self.pulls}"
            )
        self.counts = arr

    @classmethod
    def empty(cls, d: int) -> "ArmStatistics":
        return cls(counts=np.zeros(d, dtype=np.int64), pulls=0)

    @property
    def d(self) -> int:
        return int(self.counts.size)

    def update(self, outcome: int) -> None:
        """Record one observed outcome index (0-based)."""
        if not 0 <= outcome < self.d:
            raise ValueError(f"outcome index {outcome} out of range [0, {self.d})")
        self.counts[outcome] += 1
        self.pulls += 1

    def empirical_distribution(self) -> SimplexVector:
        if self.pulls < 1:
            raise ValueError("no samples: the arm has never been pulled")
        return SimplexVector(self.counts / self.pulls)


def expected_value(p: SimplexVector, v: SupportVector) -> float:
    """Dot product of a distribution with the support values."""
    if p.d != v.d:
        raise ValueError(f"dimension mismatch: distribution has {p.d}, support {v.d}")
    return float(np.dot(p.probabilities, v.values))


@njit(cache=True, nogil=True)
def _sample_index(probs, rng):
    """Inverse-CDF draw over running sums; consumes exactly one uniform."""
    u = rng.random()
    acc = 0.0
    for i in range(probs.shape[0] - 1):
        acc += probs[i]
        if u < acc:
            return i
    return probs.shape[0] - 1


def sample_outcome(p: SimplexVector, rng: np.random.Generator) -> int:
    """Draw one outcome index from ``p`` (0-based) using one uniform draw."""
    return int(_sample_index(p.probabilities, rng))
