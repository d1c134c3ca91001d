import numpy as np
import pytest

from hypoexp import (
    HypoexpDistribution,
    convolve_numeric,
    exponentiality_test,
    ks_critical,
    ks_distance,
    mc_weighted_sum,
    validate_scales,
)
from hypoexp.errors import (
    GridTooCoarseError,
    InsufficientDataError,
    NonPositiveObservationError,
)

MU2 = validate_scales([1.0, 0.5])


class TestConvolveNumeric:
    def test_single_rate_reproduces_exponential(self):
        gd = convolve_numeric([2.0], step=1e-3)
        assert gd.sup_distance_to(lambda x: 2.0 * np.exp(-2.0 * x)) < 1e-8

    def test_two_rates(self):
        gd = convolve_numeric([1.0, 2.0], step=1e-3, t_max=20.0)
        dist = HypoexpDistribution.from_rates([1.0, 2.0])
        assert gd.sup_distance_to(dist.pdf) < 1e-5

    def test_three_rates(self):
        gd = convolve_numeric([1.0, 2.0, 3.0], step=1e-3)
        dist = HypoexpDistribution.from_rates([1.0, 2.0, 3.0])
        assert gd.sup_distance_to(dist.pdf) < 1e-4

    def test_mass_close_to_one(self):
        gd = convolve_numeric([1.0, 2.0], step=1e-3)
        assert gd.integral() == pytest.approx(1.0, abs=1e-6)

    def test_coarse_grid_rejected(self):
        with pytest.raises(GridTooCoarseError):
            convolve_numeric([1.0, 2.0], step=0.5, t_max=20.0)


class TestKsDistance:
    def test_single_sample_at_median(self):
        dist = HypoexpDistribution.from_rates([1.0, 2.0])
        assert ks_distance([dist.quantile(0.5)], dist.cdf) == pytest.approx(0.5)

    def test_null_distribution(self):
        dist = HypoexpDistribution.from_rates([1.0, 2.0])
        n = 10**5
        draws = dist.sample(n, seed=5)
        assert ks_distance(draws, dist.cdf) < ks_critical(0.01, n)

    def test_separated_exponentials(self):
        rng = np.random.default_rng(9)
        draws = rng.exponential(1.0, 10**3)
        # analytic sup distance between Exp(1) and Exp(2) cdfs is 1/4
        stat = ks_distance(draws, lambda x: 1.0 - np.exp(-2.0 * x))
        assert stat > 0.2

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            ks_distance([], lambda x: x)

    def test_critical_values(self):
        assert ks_critical(0.05, 100) == pytest.approx(0.136)
        assert ks_critical(0.01, 100) == pytest.approx(0.163)
        # outside the table: asymptotic formula, close to the 1% constant
        assert ks_critical(0.01 + 1e-12, 100) == pytest.approx(0.163, rel=0.01)


def exp_sampler(rate):
    def sampler(count, rng):
        return rng.exponential(1.0 / rate, count)

    return sampler


class TestMcWeightedSum:
    def test_deterministic(self):
        a = mc_weighted_sum(exp_sampler(1.0), MU2, 1000, seed=3)
        b = mc_weighted_sum(exp_sampler(1.0), MU2, 1000, seed=3)
        assert np.array_equal(a, b)

    def test_single_draw_is_weighted_sum(self):
        draw = mc_weighted_sum(exp_sampler(1.0), MU2, 1, seed=8)
        streams = np.random.SeedSequence(8).spawn(2)
        expected = sum(
            m * float(np.random.default_rng(s).exponential(1.0, 1)[0])
            for m, s in zip(MU2.scales, streams)
        )
        assert draw[0] == pytest.approx(expected, rel=1e-14)

    def test_matches_hypoexponential(self):
        n = 10**6
        draws = mc_weighted_sum(exp_sampler(1.0), MU2, n, seed=13)
        dist = HypoexpDistribution.from_rates([1.0, 2.0])
        assert ks_distance(draws, dist.cdf) < ks_critical(0.01, n)

    def test_mixture_density_identity_on_histogram(self):
        # the signed mixture of scaled component densities reproduces the
        # empirical law of the weighted sum
        n = 10**6
        draws = mc_weighted_sum(exp_sampler(1.0), MU2, n, seed=21)
        edges = np.linspace(0.0, 8.0, 81)
        width = edges[1] - edges[0]
        counts, _ = np.histogram(draws, bins=edges, density=True)
        centers = 0.5 * (edges[:-1] + edges[1:])
        mixture = 2.0 * np.exp(-centers) - 2.0 * np.exp(-2.0 * centers)
        se = np.sqrt(np.maximum(mixture, 1e-12) / (n * width))
        assert np.max(np.abs(counts - mixture)) < 5.0 * np.max(se)


class TestExponentialityTest:
    def test_null_not_rejected(self):
        rng = np.random.default_rng(100)
        data = rng.exponential(1.0 / 3.0, 10**5)
        report = exponentiality_test(data, MU2, alpha=0.01, seed=0)
        assert not report.rejected
        assert report.fitted_lambda == pytest.approx(3.0, rel=0.05)

    def test_gamma_rejected(self):
        rng = np.random.default_rng(101)
        data = rng.exponential(1.0, 10**5) + rng.exponential(1.0, 10**5)
        report = exponentiality_test(data, MU2, alpha=0.01, seed=0)
        assert report.rejected

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(102)
        data = rng.exponential(1.0, 10**4)
        a = exponentiality_test(data, MU2, seed=7)
        b = exponentiality_test(data, MU2, seed=7)
        assert a.statistic == b.statistic

    def test_nonpositive_data_rejected(self):
        with pytest.raises(NonPositiveObservationError):
            exponentiality_test([1.0, 0.0] + [1.0] * 200, MU2)

    def test_insufficient_data(self):
        with pytest.raises(InsufficientDataError):
            exponentiality_test([1.0] * 20, MU2)

    def test_report_serializes(self):
        rng = np.random.default_rng(103)
        data = rng.exponential(2.0, 10**4)
        report = exponentiality_test(data, MU2, seed=1)
        payload = report.to_dict()
        assert payload["verdict"] in ("reject", "consistent")
        assert payload["n_tuples"] == 5000


class TestSamplingAgreementSweep:
    def test_ks_across_ten_seeds(self):
        # binomially consistent with the 1% level: allow at most one failure
        n = 10**6
        dist = HypoexpDistribution.from_rates([1.0, 2.0])
        failures = 0
        for seed in range(10):
            draws = mc_weighted_sum(exp_sampler(1.0), MU2, n, seed=seed)
            if ks_distance(draws, dist.cdf) >= ks_critical(0.01, n):
                failures += 1
        assert failures <= 1
