import math

import numpy as np
import pytest

from bestarm import (
    characteristic_time,
    kl_bernoulli,
    sample_complexity_bound,
)
from oracles import kl_ber, tstar_inv_grid_2, tstar_inv_grid_3

KL_005_095 = 2.649995081249796  # 0.9 * ln(19)


def _pair_value(w_best, w_a, mu_best, mu_a):
    """Test-local evaluation of one challenger term by dense x sampling."""
    xs = np.linspace(mu_a, mu_best, 4001)
    vals = [w_best * kl_ber(mu_best, x) + w_a * kl_ber(mu_a, x) for x in xs]
    return min(vals)


class TestCharacteristicTime:
    def test_two_arm_sandwich_against_grid(self):
        ct = characteristic_time([0.6, 0.4])
        solver = 1.0 / ct.t_star
        grid = tstar_inv_grid_2(0.6, 0.4)
        assert solver >= grid - 1e-3
        assert abs(solver - grid) <= 0.01 * grid

    def test_symmetric_weights(self):
        ct = characteristic_time([0.6, 0.4])
        assert ct.weights[0] == pytest.approx(0.5, abs=1e-2)
        assert ct.weights[1] == pytest.approx(0.5, abs=1e-2)

    def test_three_arm_sandwich_against_grid(self):
        means = [0.28, 0.23, 0.17]
        ct = characteristic_time(means)
        solver = 1.0 / ct.t_star
        grid = tstar_inv_grid_3(means)
        assert solver >= grid - 1e-3
        assert abs(solver - grid) <= 0.01 * grid

    def test_weights_reproduce_the_objective(self):
        means = [0.28, 0.23, 0.17]
        ct = characteristic_time(means)
        w = ct.weights
        value = min(
            _pair_value(w[0], w[1], 0.28, 0.23),
            _pair_value(w[0], w[2], 0.28, 0.17),
        )
        assert value == pytest.approx(1.0 / ct.t_star, rel=0.01)

    def test_weights_form_a_distribution(self):
        ct = characteristic_time([0.7, 0.5, 0.3, 0.2])
        assert sum(ct.weights) == pytest.approx(1.0, abs=1e-9)
        assert all(w >= 0.0 for w in ct.weights)

    def test_extra_arm_never_helps(self):
        base = characteristic_time([0.6, 0.4])
        extended = characteristic_time([0.6, 0.4, 0.05])
        assert extended.t_star > base.t_star

    def test_rejects_non_unique_best(self):
        with pytest.raises(ValueError, match="degenerate"):
            characteristic_time([0.5, 0.5, 0.3])

    @pytest.mark.parametrize("means", [[0.0, 0.4], [0.6, 1.0], [1.2, 0.5]])
    def test_rejects_means_outside_open_unit_interval(self, means):
        with pytest.raises(ValueError):
            characteristic_time(means)

    def test_best_arm_position_does_not_matter(self):
        a = characteristic_time([0.6, 0.4])
        b = characteristic_time([0.4, 0.6])
        assert a.t_star == pytest.approx(b.t_star, rel=1e-6)
        assert a.weights[0] == pytest.approx(b.weights[1], abs=1e-4)


class TestSampleComplexityBound:
    def test_risk_factor(self):
        ct = characteristic_time([0.6, 0.4])
        bound = sample_complexity_bound(ct, 0.05)
        assert bound == pytest.approx(ct.t_star * KL_005_095, rel=1e-9)

    def test_uninformative_risk_gives_zero(self):
        ct = characteristic_time([0.6, 0.4])
        assert sample_complexity_bound(ct, 0.5) == 0.0

    def test_monotone_in_delta(self):
        ct = characteristic_time([0.6, 0.4])
        bounds = [sample_complexity_bound(ct, d) for d in (0.4, 0.1, 0.01, 0.001)]
        assert all(a < b for a, b in zip(bounds, bounds[1:]))

    def test_rejects_bad_delta(self):
        ct = characteristic_time([0.6, 0.4])
        with pytest.raises(ValueError):
            sample_complexity_bound(ct, 0.0)

    def test_kl_factor_value(self):
        assert kl_bernoulli(0.05, 0.95) == pytest.approx(
            0.9 * math.log(19.0), abs=1e-12
        )
