"""TVD metric properties and estimator behavior across regimes."""

import numpy as np
import pytest

from ringtherm import (
    DomainWallPmf,
    EmpiricalHistogram,
    RingSpec,
    classify_regime,
    domain_wall_pmf,
    empirical_histogram,
    estimate_temperature,
    sample_counts,
    tvd,
)
from ringtherm.errors import RingMismatchError
from ringtherm.thermometry import (
    FLAG_HIGH_T_SATURATION,
    FLAG_POOR_FIT,
    FLAG_ZERO_TEMPERATURE,
    EstimatorOptions,
)


def hist_from_pmf(pmf):
    return EmpiricalHistogram(RingSpec(pmf.n_qb), pmf.probs.copy())


def hist_from_freq(n, freq):
    return EmpiricalHistogram(RingSpec(n), np.asarray(freq, dtype=float))


class TestTvd:
    def test_identity_is_zero(self):
        pmf = domain_wall_pmf(1.0, RingSpec(11))
        assert tvd(hist_from_pmf(pmf), pmf) == 0.0

    def test_disjoint_point_masses(self):
        hist = hist_from_freq(3, [1.0, 0.0])
        pmf = DomainWallPmf(3, np.array([1, 3]), np.array([0.0, 1.0]))
        assert tvd(hist, pmf) == 1.0

    def test_three_ring_frozen_example(self):
        # 0.5 * (|0.9 - p1| + |0.1 - p3|) with p from the enumeration oracle
        hist = hist_from_freq(3, [0.9, 0.1])
        assert tvd(hist, domain_wall_pmf(1.0, RingSpec(3))) == pytest.approx(
            0.0939318344798831, abs=1e-12
        )

    def test_metric_properties(self):
        rng = np.random.default_rng(42)
        ring = RingSpec(21)
        support = ring.support
        for _ in range(40):
            a, b, c = (rng.dirichlet(np.ones(support.size)) for _ in range(3))
            pa, pb, pc = (DomainWallPmf(21, support, p) for p in (a, b, c))
            ha, hb = hist_from_freq(21, a), hist_from_freq(21, b)
            dab = tvd(ha, pb)
            dba = tvd(hb, pa)
            assert dab == pytest.approx(dba, abs=1e-15)  # symmetry
            assert 0.0 <= dab <= 1.0
            assert tvd(ha, pc) <= dab + tvd(hb, pc) + 1e-12  # triangle

    def test_ring_mismatch(self):
        with pytest.raises(RingMismatchError):
            tvd(hist_from_freq(3, [1.0, 0.0]), domain_wall_pmf(1.0, RingSpec(5)))


class TestEstimateTemperature:
    def test_noiseless_self_consistency(self):
        ring = RingSpec(101)
        result = estimate_temperature(hist_from_pmf(domain_wall_pmf(1.0, ring)))
        assert result.t_eff == pytest.approx(1.0, abs=1e-4)
        assert result.epsilon <= 1e-10
        assert not result.flags

    def test_sampled_round_trip(self):
        ring = RingSpec(301)
        hist = empirical_histogram(sample_counts(0.8, ring, 10**5, seed=42))
        result = estimate_temperature(hist)
        assert abs(result.t_eff - 0.8) <= 0.02
        assert result.epsilon <= 0.01
        assert result.iterations <= 30

    def test_point_mass_flags_zero_temperature(self):
        n = 51
        freq = np.zeros((n + 1) // 2)
        freq[0] = 1.0
        result = estimate_temperature(hist_from_freq(n, freq))
        assert FLAG_ZERO_TEMPERATURE in result.flags
        assert result.t_eff == 0.0
        assert result.epsilon == 0.0

    def test_consistency_error_decreases_with_shots(self):
        ring = RingSpec(101)
        t_true = 0.8
        medians = []
        for shots in (10**3, 10**4, 10**5):
            errs = []
            for seed in range(20):
                hist = empirical_histogram(sample_counts(t_true, ring, shots, seed=seed))
                errs.append(abs(estimate_temperature(hist).t_eff - t_true))
            medians.append(np.median(errs))
        assert medians[0] >= medians[1] >= medians[2]

    def test_size_independence_at_fixed_t(self):
        for n in (101, 301, 1001, 4001):
            hist = empirical_histogram(sample_counts(1.0, RingSpec(n), 10**5, seed=31))
            result = estimate_temperature(hist)
            assert abs(result.t_eff - 1.0) <= 0.03
            assert result.epsilon <= 0.02

    def test_poor_fit_flag_on_distorted_histogram(self):
        ring = RingSpec(101)
        pmf = domain_wall_pmf(1.0, ring)
        freq = 0.5 * pmf.probs + 0.5 * domain_wall_pmf(8.0, ring).probs
        result = estimate_temperature(hist_from_freq(101, freq / freq.sum()))
        assert FLAG_POOR_FIT in result.flags
        assert result.epsilon > 0.05

    def test_iteration_cap_respected(self):
        ring = RingSpec(101)
        hist = empirical_histogram(sample_counts(1.0, ring, 2000, seed=5))
        opts = EstimatorOptions(max_iterations=3)
        assert estimate_temperature(hist, options=opts).iterations <= 3


class TestClassifyRegime:
    def test_all_ones_is_zero_temperature(self):
        n = 11
        freq = np.zeros(6)
        freq[0] = 1.0
        assert classify_regime(hist_from_freq(n, freq)) == {FLAG_ZERO_TEMPERATURE}

    def test_hot_histogram_is_saturated(self):
        hist = hist_from_pmf(domain_wall_pmf(1e6, RingSpec(101)))
        assert classify_regime(hist) == {FLAG_HIGH_T_SATURATION}

    def test_moderate_histogram_is_clean(self):
        hist = hist_from_pmf(domain_wall_pmf(1.0, RingSpec(101)))
        assert classify_regime(hist) == frozenset()

    def test_poor_fit_uses_epsilon(self):
        hist = hist_from_pmf(domain_wall_pmf(1.0, RingSpec(101)))
        assert classify_regime(hist, epsilon=0.2) == {FLAG_POOR_FIT}
        assert classify_regime(hist, epsilon=0.01) == frozenset()


class TestConvergenceBudget:
    def test_battery_iterations(self):
        # spot-check of the acceptance battery corner cells
        over = 0
        cells = 0
        for t_true in (0.3, 1.0, 3.0):
            for n in (101, 1001):
                hist = empirical_histogram(
                    sample_counts(t_true, RingSpec(n), 10**4, seed=cells)
                )
                result = estimate_temperature(hist)
                cells += 1
                if result.iterations > 30:
                    over += 1
        assert over == 0
