import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from combopred.harness import verify_lemma
from combopred.lemmas import (
    binomial_ratio,
    kl_binomials_case,
    kl_discrete,
    log_quad_margin,
    poisson_binomial_pmf,
)


def exact_ratio(k, c_num, c_den):
    """Independent oracle: rational arithmetic over the defining sums."""
    c = Fraction(c_num, c_den)
    num = sum(Fraction(k - i, k) * math.comb(k, i) ** 2 * c**i for i in range(k + 1))
    den = sum(math.comb(k, i) ** 2 * c**i for i in range(k + 1))
    return num / den


class TestBinomialRatio:
    def test_equality_at_k1_c2(self):
        assert abs(binomial_ratio(1, 2.0) - 1.0 / 3.0) < 1e-12

    @pytest.mark.parametrize("k", [1, 2, 3, 5, 8, 13])
    @pytest.mark.parametrize("c", [(1, 1), (5, 4), (3, 2), (2, 1)])
    def test_matches_exact_rational_oracle(self, k, c):
        want = float(exact_ratio(k, *c))
        got = binomial_ratio(k, c[0] / c[1])
        np.testing.assert_allclose(got, want, rtol=1e-12)

    def test_decreasing_in_c(self):
        for k in (2, 7, 40):
            vals = [binomial_ratio(k, c) for c in np.linspace(1.0, 2.0, 9)]
            assert np.all(np.diff(vals) <= 1e-12)

    def test_large_k_stays_above_third(self):
        for k in (100, 350, 500):
            assert binomial_ratio(k, 2.0) >= 1.0 / 3.0


class TestPoissonBinomial:
    def test_matches_enumeration_oracle(self):
        params = [Fraction(1, 4), Fraction(2, 3), Fraction(1, 2), Fraction(3, 5)]
        exact = [Fraction(0)] * (len(params) + 1)
        for bits in itertools.product((0, 1), repeat=len(params)):
            prob = Fraction(1)
            for b, p in zip(bits, params):
                prob *= p if b else 1 - p
            exact[sum(bits)] += prob
        pmf = poisson_binomial_pmf([float(p) for p in params])
        np.testing.assert_allclose(pmf.astype(float), [float(x) for x in exact], rtol=1e-14)

    def test_sums_to_one(self):
        pmf = poisson_binomial_pmf([0.3] * 20 + [0.7] * 13)
        np.testing.assert_allclose(float(pmf.sum()), 1.0, rtol=1e-15)


class TestKlBinomials:
    def test_identical_parameters_gives_zero(self):
        kl, bound = kl_binomials_case(4, 3, 0.3, 0.3, 0.3)
        assert kl == pytest.approx(0.0, abs=1e-15)
        assert bound == 0.0

    def test_kl_discrete_basics(self):
        p = np.array([0.5, 0.5])
        q = np.array([0.25, 0.75])
        want = 0.5 * math.log(2.0) + 0.5 * math.log(0.5 / 0.75)
        np.testing.assert_allclose(kl_discrete(p, q), want, rtol=1e-12)
        assert kl_discrete(p, p) == 0.0

    def test_bound_holds_on_small_grid(self):
        for n in range(1, 7):
            for ell in range(math.ceil(n / 2), n + 1):
                for p, pp in ((0.2, 0.5), (0.3, 0.4), (0.1, 0.9)):
                    for q in (p, pp):
                        kl, bound = kl_binomials_case(n, ell, p, pp, q, tail=0.5)
                        assert kl <= bound + 1e-12

    def test_precondition_enforced(self):
        with pytest.raises(ValueError):
            kl_binomials_case(4, 1, 0.2, 0.4, 0.2)
        with pytest.raises(ValueError):
            kl_binomials_case(4, 3, 0.2, 0.4, 0.3)


class TestLogQuad:
    def test_value_at_x0_half(self):
        # -log(0.5) = 0.693... <= 0.5 + 0.25 = 0.75
        margin = log_quad_margin(0.5, 0.5)
        np.testing.assert_allclose(margin, 0.75 - math.log(2.0), rtol=1e-12)
        assert margin > 0.0

    def test_tight_at_one(self):
        assert abs(log_quad_margin(1.0, 0.37)) < 1e-15

    def test_violated_below_x0(self):
        assert log_quad_margin(0.05, 0.9) < 0.0


class TestVerifyLemmaReports:
    def test_tech1_small(self):
        report = verify_lemma("tech1", k_max=60)
        assert report.passed
        assert report.measured >= -1e-12
        assert report.details["equality_gap_at_k1_c2"] < 1e-12

    def test_klbinomials_small(self):
        report = verify_lemma("klbinomials", n_max=8)
        assert report.passed
        assert report.measured >= 0.0
        assert report.details["cases"] > 0

    def test_log4_grid(self):
        report = verify_lemma("log4", grid=40)
        assert report.passed
        assert report.measured >= -1e-12

    def test_unknown_lemma(self):
        with pytest.raises(ValueError):
            verify_lemma("zorn")
