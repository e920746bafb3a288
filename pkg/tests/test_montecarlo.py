import numpy as np
import pytest
from scipy.integrate import quad

from nugh.errors import DomainError
from nugh.families import CHEBYSHEV, GEOMETRIC
from nugh.gh import GHParams, nig_log_cf
from nugh.montecarlo import (
    empirical_cf,
    gaussian_cdf,
    hsecant_cdf,
    identity_suite,
    ks_statistic,
    laplace_cdf,
    make_rng,
    random_sum_sample,
    sample_gaussian,
    sample_hsecant,
    sample_laplace,
    sample_linnik,
    sample_nig,
    sample_nu_gh,
    sample_stable_symmetric,
)
from nugh.transform import NuGHChar

NIG_SYM = GHParams(-0.5, 1.0, 0.0, 1.0, 0.0)
NIG_SKEW = GHParams(-0.5, 2.0, 0.3, 1.0, 0.25)


class TestRng:
    def test_streams_differ_and_reproduce(self):
        a = make_rng(5, 0).standard_normal(4)
        b = make_rng(5, 1).standard_normal(4)
        c = make_rng(5, 0).standard_normal(4)
        assert not np.allclose(a, b)
        assert np.array_equal(a, c)


class TestBaseSamplers:
    def test_laplace_ks(self):
        x = sample_laplace(100_000, make_rng(1, 0))
        assert ks_statistic(x, laplace_cdf).passed

    def test_hsecant_ks(self):
        x = sample_hsecant(100_000, make_rng(1, 1))
        assert ks_statistic(x, hsecant_cdf).passed

    def test_gaussian_ks(self):
        x = sample_gaussian(100_000, make_rng(1, 2))
        assert ks_statistic(x, gaussian_cdf).passed

    def test_stable_cauchy_case(self):
        # alpha = 1 is standard Cauchy: CDF 1/2 + arctan(x)/pi
        x = sample_stable_symmetric(1.0, 100_000, make_rng(1, 3))
        assert ks_statistic(x, lambda v: 0.5 + np.arctan(v) / np.pi).passed

    def test_stable_gaussian_case(self):
        # alpha = 2 has CF e^{-t^2}, i.e. N(0, 2)
        x = sample_stable_symmetric(2.0, 100_000, make_rng(1, 4))
        assert ks_statistic(x, lambda v: gaussian_cdf(v, np.sqrt(2.0))).passed

    def test_stable_empirical_cf(self):
        x = sample_stable_symmetric(0.7, 200_000, make_rng(1, 5))
        t = np.array([0.5, 1.0, 2.0])
        mean, se = empirical_cf(x, t)
        assert np.all(np.abs(mean - np.exp(-np.abs(t) ** 0.7)) <= 4 * se)

    def test_stable_bad_index(self):
        with pytest.raises(DomainError):
            sample_stable_symmetric(2.5, 10, make_rng(0, 0))

    def test_linnik_cf(self):
        x = sample_linnik(1.3, 200_000, make_rng(1, 6))
        t = np.array([0.5, 1.0, 2.0])
        mean, se = empirical_cf(x, t)
        assert np.all(np.abs(mean - 1.0 / (1.0 + np.abs(t) ** 1.3)) <= 4 * se)

    def test_linnik1_cdf_oracle(self):
        # Linnik(1) = Cauchy scale-mixed by Exp(1):
        # F(x) = int_0^inf e^{-w} (1/2 + arctan(x/w)/pi) dw
        def linnik1_cdf(x):
            val, _ = quad(
                lambda w: np.exp(-w) * (0.5 + np.arctan(x / w) / np.pi), 0, np.inf, limit=200
            )
            return val

        x = sample_linnik(1.0, 100_000, make_rng(1, 7))
        assert ks_statistic(x, linnik1_cdf, eval_points=1000).passed

    def test_nig_empirical_cf(self):
        x = sample_nig(NIG_SKEW, 200_000, make_rng(1, 8))
        t = np.array([0.5, 1.0, 2.0])
        mean, se = empirical_cf(x, t)
        assert np.all(np.abs(mean - np.exp(nig_log_cf(NIG_SKEW, t))) <= 4 * se)

    def test_nig_requires_nig(self):
        with pytest.raises(DomainError):
            sample_nig(GHParams(1.0, 2.0, 0.0, 1.0, 0.0), 10, make_rng(0, 0))


class TestNuGHSampling:
    @pytest.mark.parametrize("family", [GEOMETRIC, CHEBYSHEV])
    def test_mixture_empirical_cf(self, family):
        x = sample_nu_gh(family, NIG_SKEW, 100_000, make_rng(2, 0))
        cf = NuGHChar(family, NIG_SKEW)
        t = np.array([0.5, 1.0, 2.0])
        mean, se = empirical_cf(x, t)
        assert np.all(np.abs(mean - cf(t)) <= 4 * se)

    def test_inversion_route(self):
        gh = GHParams(1.0, 2.0, 0.0, 1.0, 0.0)
        x = sample_nu_gh(GEOMETRIC, gh, 100_000, make_rng(2, 1))
        cf = NuGHChar(GEOMETRIC, gh)
        t = np.array([0.5, 1.0, 2.0])
        mean, se = empirical_cf(x, t)
        assert np.all(np.abs(mean - cf(t)) <= 4 * se)

    def test_mixture_needs_nig(self):
        with pytest.raises(DomainError):
            sample_nu_gh(GEOMETRIC, GHParams(1.0, 2.0, 0.0, 1.0, 0.0), 10, make_rng(0, 0), "mixture")

    def test_deterministic(self):
        a = sample_nu_gh(GEOMETRIC, NIG_SYM, 1000, make_rng(3, 0))
        b = sample_nu_gh(GEOMETRIC, NIG_SYM, 1000, make_rng(3, 0))
        assert np.array_equal(a, b)


class TestKS:
    def test_report_fields(self):
        rep = ks_statistic(make_rng(4, 0).standard_normal(10_000), gaussian_cdf, label="norm")
        assert rep.n == 10_000
        assert 0.0 <= rep.statistic <= 1.0
        assert rep.threshold == pytest.approx(1.628 / 100.0)
        assert rep.passed and rep.label == "norm"

    def test_wrong_reference_fails_near_exact_distance(self):
        # Gaussian sample against the Laplace CDF: the statistic should
        # approach the exact sup distance between the two CDFs
        xs = np.linspace(-8, 8, 20001)
        exact = float(np.max(np.abs(gaussian_cdf(xs) - laplace_cdf(xs))))
        rep = ks_statistic(make_rng(4, 1).standard_normal(10_000), laplace_cdf)
        assert not rep.passed
        assert rep.statistic == pytest.approx(exact, abs=0.02)

    def test_scaling_with_n(self):
        # mean statistic under the null shrinks like 1/sqrt(n)
        stats = {}
        for n in (2000, 8000):
            vals = [
                ks_statistic(make_rng(100 + k, n).standard_normal(n), gaussian_cdf).statistic
                for k in range(20)
            ]
            stats[n] = np.mean(vals)
        assert stats[2000] / stats[8000] == pytest.approx(2.0, rel=0.2)

    def test_needs_samples(self):
        with pytest.raises(DomainError):
            ks_statistic(np.zeros(10), gaussian_cdf)


class TestIdentitySuite:
    def test_geometric_laplace(self):
        for k, p in enumerate((0.5, 0.1)):
            rep = identity_suite(
                GEOMETRIC, p, 2.0, sample_laplace, laplace_cdf, 100_000, make_rng(5, k)
            )
            assert rep.passed, rep

    def test_chebyshev_hsecant(self):
        rep = identity_suite(
            CHEBYSHEV, 0.25, 2.0, sample_hsecant, hsecant_cdf, 100_000, make_rng(5, 10)
        )
        assert rep.passed, rep

    def test_negative_control(self):
        rep = identity_suite(
            GEOMETRIC, 0.25, 2.0, sample_gaussian, gaussian_cdf, 100_000, make_rng(5, 20)
        )
        assert not rep.passed

    def test_random_sum_shapes(self):
        x = random_sum_sample(GEOMETRIC, 0.5, 2.0, sample_laplace, 500, make_rng(5, 30))
        assert x.shape == (500,)
        with pytest.raises(DomainError):
            random_sum_sample(GEOMETRIC, 0.5, 3.0, sample_laplace, 10, make_rng(0, 0))
