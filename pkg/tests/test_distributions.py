import math

import numpy as np
import pytest
from scipy import stats

from ineqindex import distributions as dist
from ineqindex.distributions import DistributionSpec, Status
from ineqindex.errors import AllZero, InvalidSpec
from ineqindex.indices import gini_sorted, index_i


def pareto_cdf(alpha, xmin=1.0):
    return lambda x: np.where(x < xmin, 0.0, 1.0 - (np.maximum(x, xmin) / xmin) ** -alpha)


class TestSpec:
    def test_text_round_trip(self):
        spec = DistributionSpec.parse("pareto:alpha=1.5,xmin=1")
        assert spec.family == "pareto"
        assert spec.params == {"alpha": 1.5, "xmin": 1.0}
        assert DistributionSpec.parse(str(spec)) == spec

    def test_defaults(self):
        assert DistributionSpec.parse("exponential").params == {"mean": 1.0}
        assert DistributionSpec.parse("pareto:alpha=2").params["xmin"] == 1.0

    @pytest.mark.parametrize(
        "text",
        [
            "pareto:alpha=0",
            "pareto:alpha=1,xmin=-1",
            "bernoulli:p=1",
            "gaussian:sigma=0",
            "exponential:mean=-2",
            "lognormal:mu=0",
            "pareto:alpha=x",
            "pareto:beta=2",
            "bernoulli",
        ],
    )
    def test_invalid(self, text):
        with pytest.raises(InvalidSpec):
            DistributionSpec.parse(text)


class TestSampling:
    def test_determinism(self):
        spec = dist.pareto(1.2)
        a = dist.draw(spec, 1000, 42)
        b = dist.draw(spec, 1000, 42)
        assert a.tobytes() == b.tobytes()
        assert dist.draw(spec, 1000, 43).tobytes() != a.tobytes()

    def test_pareto_uses_open_uniforms(self):
        rng = np.random.Generator(np.random.PCG64(3))
        u = dist.open_uniform(rng, 10_000)
        assert u.min() > 0 and u.max() < 1
        x = dist.draw(dist.pareto(2.0), 10_000, 3)
        assert np.allclose(x, u**-0.5)

    def test_exp_of_exponential_is_pareto(self):
        x = dist.draw(DistributionSpec("exp_of_exponential", {"mean": 2 / 3}), 100_000, 5)
        ks = stats.kstest(x, pareto_cdf(1.5)).statistic
        assert ks < 0.01

    def test_exponential_mean(self):
        x = dist.draw(dist.exponential(1.0), 1_000_000, 6)
        assert abs(x.mean() - 1.0) <= 0.005

    def test_pareto_scaling(self):
        for seed in range(3):
            x = 3.0 * dist.draw(dist.pareto(1.7), 20_000, seed)
            assert stats.kstest(x, pareto_cdf(1.7, 3.0)).pvalue > 1e-3

    def test_log_pareto_is_shifted_exponential(self):
        x = dist.draw(dist.pareto(2.5, 4.0), 50_000, 9)
        z = np.log(x)
        assert stats.kstest(z, stats.expon(loc=math.log(4.0), scale=1 / 2.5).cdf).pvalue > 1e-3

    def test_shifted_exponential_gini_below_half(self):
        x = dist.sample(DistributionSpec("shifted_exponential", {"mean": 1.0, "shift": 0.5}), 100_000, 2)
        assert gini_sorted(x) < 0.5

    def test_bernoulli(self):
        x = dist.draw(DistributionSpec("bernoulli", {"p": 0.3}), 100_000, 1)
        assert set(np.unique(x)) == {0.0, 1.0}
        assert abs(x.mean() - 0.3) < 0.01
        with pytest.raises(AllZero):
            dist.sample(DistributionSpec("bernoulli", {"p": 1e-9}), 5, 1)

    @pytest.mark.slow
    @pytest.mark.parametrize("alpha", [3.0, 4.0])
    def test_pareto_index_within_standard_errors(self, alpha):
        # spread of I_N estimated from 20 independent replications
        vals = [index_i(dist.sample(dist.pareto(alpha), 1_000_000, dist.mix_seed(77, r))) for r in range(20)]
        se = np.std(vals, ddof=1) / math.sqrt(len(vals))
        single_se = np.std(vals, ddof=1)
        assert abs(vals[0] - dist.pareto_index_i(alpha)) <= 3 * single_se
        assert abs(np.mean(vals) - dist.pareto_index_i(alpha)) <= 3 * se + 0.005


class TestSeeds:
    def test_splitmix_reference(self):
        # first outputs of SplitMix64 seeded with 0
        assert dist.splitmix64(0) == 0xE220A8397B1DCDAF
        assert dist.splitmix64(0x9E3779B97F4A7C15) == 0x6E789E6AA1B965F4

    def test_mix_distinct(self):
        seeds = {dist.mix_seed(1, r) for r in range(10_000)}
        assert len(seeds) == 10_000
        assert dist.mix_seed(1, 0) != dist.mix_seed(2, 0)


class TestTheory:
    def test_pareto_one_and_a_half(self):
        t = dist.theoretical_indices(dist.pareto(1.5))
        assert t.gini == pytest.approx(0.5)
        assert t.index_i == 1.0 and t.index_i_status is Status.LIMIT_ONLY

    def test_pareto_three(self):
        t = dist.theoretical_indices(dist.pareto(3.0))
        assert t.gini == pytest.approx(0.2) and t.index_i == pytest.approx(0.25)
        assert t.gini_status is t.index_i_status is Status.EXACT

    def test_pareto_heavy(self):
        t = dist.theoretical_indices(dist.pareto(0.8))
        assert t.gini == 1.0 and t.gini_status is Status.LIMIT_ONLY

    def test_pareto_boundary(self):
        t = dist.theoretical_indices(dist.pareto(2.0))
        assert t.index_i == 1.0 and t.index_i_status is Status.BOUNDARY_CASE

    def test_bernoulli(self):
        t = dist.theoretical_indices(DistributionSpec("bernoulli", {"p": 0.9}))
        assert t.gini == pytest.approx(0.1) and t.index_i == pytest.approx(0.1)

    def test_exponential(self):
        t = dist.theoretical_indices(dist.exponential(3.0))
        assert (t.gini, t.index_i) == (0.5, 0.5)

    def test_exp_of_exponential_same_as_pareto(self):
        t = dist.theoretical_indices(DistributionSpec("exp_of_exponential", {"mean": 2 / 3}))
        assert t.gini == pytest.approx(0.5)

    def test_gaussian(self):
        t = dist.theoretical_indices(DistributionSpec("gaussian", {"mu": 0, "sigma": 2}))
        assert t.gini == pytest.approx(1 / math.sqrt(2), rel=1e-14)
        assert t.index_i == 1.0
        t = dist.theoretical_indices(DistributionSpec("gaussian", {"mu": 1, "sigma": 2}))
        assert t.index_i == pytest.approx(0.8)

    def test_gaussian_signed_gini_by_quadrature(self):
        from scipy import integrate

        mu, sigma = 1.3, 0.7
        pdf = stats.norm(mu, sigma).pdf
        cdf = stats.norm(mu, sigma).cdf
        gmd = integrate.quad(lambda x: cdf(x) * (1 - cdf(x)), -np.inf, np.inf)[0]
        mean_abs = integrate.quad(lambda x: -x * pdf(x), -np.inf, 0)[0] + integrate.quad(lambda x: x * pdf(x), 0, np.inf)[0]
        t = dist.theoretical_indices(DistributionSpec("gaussian", {"mu": mu, "sigma": sigma}))
        assert t.gini == pytest.approx(gmd / mean_abs, rel=1e-8)

    def test_shifted_exponential_by_quadrature(self):
        from scipy import integrate

        m, s = 2.0, 1.5
        cdf = stats.expon(loc=s, scale=m).cdf
        gmd = integrate.quad(lambda x: cdf(x) * (1 - cdf(x)), s, np.inf)[0]
        t = dist.theoretical_indices(DistributionSpec("shifted_exponential", {"mean": m, "shift": s}))
        assert t.gini == pytest.approx(gmd / (m + s), rel=1e-8)
        assert t.index_i == pytest.approx(m**2 / (m**2 + (m + s) ** 2))

    @pytest.mark.parametrize("alpha", [1.2, 1.5, 3.0, 7.0])
    def test_pareto_gini_by_quadrature(self, alpha):
        from scipy import integrate

        gmd = integrate.quad(lambda x: (1 - x**-alpha) * x**-alpha, 1, np.inf)[0]
        assert dist.pareto_gini(alpha) == pytest.approx(gmd / (alpha / (alpha - 1)), rel=1e-8)

    @pytest.mark.parametrize("alpha", [2.5, 3.0, 6.0])
    def test_pareto_index_from_moments(self, alpha):
        m1, m2 = dist.pareto_moment(alpha, 1, 1), dist.pareto_moment(alpha, 1, 2)
        assert dist.pareto_index_i(alpha) == pytest.approx(1 - m1**2 / m2, rel=1e-12)


class TestMomentsAndCrossover:
    def test_moments(self):
        assert dist.pareto_moment(3, 1, 1) == 1.5
        assert dist.pareto_moment(3, 1, 2) == 3.0
        assert dist.pareto_moment(1.5, 1, 2) == math.inf
        assert dist.pareto_moment(1.5, 1, 1.5) == math.inf
        with pytest.raises(InvalidSpec):
            dist.pareto_moment(-1, 1, 1)

    def test_moment_monte_carlo(self):
        x = dist.draw(dist.pareto(3.0), 1_000_000, 4)
        assert abs(x.mean() - 1.5) <= 0.01

    def test_crossover(self):
        a = dist.crossover_alpha()
        assert a == pytest.approx(3.414213562373095)
        assert abs(dist.pareto_index_i(a) - dist.pareto_gini(a)) < 1e-12
        assert dist.pareto_index_i(3) > dist.pareto_gini(3)
        assert dist.pareto_index_i(4) == pytest.approx(1 / 9) and dist.pareto_gini(4) == pytest.approx(1 / 7)
        for alpha in np.linspace(2.01, 8, 200):
            diff = dist.pareto_index_i(alpha) - dist.pareto_gini(alpha)
            assert (diff > 0) == (alpha < a) or abs(alpha - a) < 1e-9
