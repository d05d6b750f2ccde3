import math

import numpy as np
import pytest
from scipy.stats import norm

from gmrobust import (ConfigurationError, classify, compose,
                      confidence_interval, estimate_global_correctness,
                      estimate_global_robustness, gaussian_matrix,
                      grid_falsify, identity_network, report_to_text)

from conftest import constant_classifier


class TestConfidenceInterval:
    def test_k_equals_n_boundary(self):
        lo, hi = confidence_interval(100, 100, 0.95)
        assert hi == 1.0
        assert lo < 1.0

    def test_k_zero_n_one(self):
        lo, hi = confidence_interval(0, 1, 0.95)
        assert lo == 0.0

    def test_against_independent_wilson_evaluation(self):
        # statsmodels implements Wilson independently of our code
        from statsmodels.stats.proportion import proportion_confint
        lo, hi = confidence_interval(9900, 10000, 0.95)
        slo, shi = proportion_confint(9900, 10000, alpha=0.05,
                                      method="wilson")
        assert abs(lo - slo) < 1e-4
        assert abs(hi - shi) < 1e-4
        assert (hi - lo) / 2 == pytest.approx(0.002, abs=5e-4)

    def test_invalid_level(self):
        with pytest.raises(ConfigurationError):
            confidence_interval(5, 10, 0.8)

    @pytest.mark.parametrize("k,n,level", [(0, 10, 0.9), (5, 10, 0.95),
                                           (10, 10, 0.99), (9999, 10000,
                                                            0.95)])
    def test_contains_point_estimate(self, k, n, level):
        lo, hi = confidence_interval(k, n, level)
        assert 0.0 <= lo <= k / n <= hi <= 1.0


class TestGlobalCorrectness:
    def test_constant_classifier_exact_one(self, identity_gen_2d):
        C = constant_classifier(2, 3, winner=2)
        rep = estimate_global_correctness(C, identity_gen_2d, 2, 500, seed=1)
        assert rep.successes == rep.n == 500
        assert rep.point_estimate == 1.0

    def test_threshold_model_near_half(self, identity_gen_1d,
                                       threshold_classifier):
        n = 10000
        rep = estimate_global_correctness(threshold_classifier,
                                          identity_gen_1d, 1, n, seed=17)
        # >= 4 sigma CLT bound around the closed-form P(N(0,1) > 0) = 1/2
        assert abs(rep.point_estimate - 0.5) < 4 / (2 * math.sqrt(n))
        assert rep.ci_lo <= rep.point_estimate <= rep.ci_hi

    def test_bit_reproducible_and_batch_independent(
            self, identity_gen_1d, threshold_classifier):
        a = estimate_global_correctness(threshold_classifier,
                                        identity_gen_1d, 1, 2000, seed=5)
        b = estimate_global_correctness(threshold_classifier,
                                        identity_gen_1d, 1, 2000, seed=5,
                                        batch_size=37)
        assert a == b
        assert report_to_text(a) == report_to_text(b)

    def test_delta_claim(self, identity_gen_1d, threshold_classifier):
        rep = estimate_global_correctness(threshold_classifier,
                                          identity_gen_1d, 1, 100, seed=0)
        assert rep.delta_claim == pytest.approx(1.0 - rep.ci_lo)


class TestGlobalRobustness:
    def test_epsilon_zero_reduces_to_classification(
            self, identity_gen_1d, threshold_classifier):
        n = 300
        rep = estimate_global_robustness(threshold_classifier,
                                         identity_gen_1d, 1, 0.0, n,
                                         seed=23)
        assert rep.unknown == 0
        comp = compose(identity_gen_1d, threshold_classifier)
        X = gaussian_matrix(23, n, 1)
        want = sum(classify(comp, X[i]).category == 1 for i in range(n))
        assert rep.certified == want
        assert rep.falsified == n - want

    def test_constant_classifier_all_certified(self, identity_gen_2d):
        C = constant_classifier(2, 2, winner=0)
        rep = estimate_global_robustness(C, identity_gen_2d, 0, 5.0, 100,
                                         seed=3)
        assert rep.certified == 100

    def test_verdicts_match_grid_oracle(self, identity_gen_1d,
                                        threshold_classifier):
        eps, n = 0.1, 100
        rep = estimate_global_robustness(threshold_classifier,
                                         identity_gen_1d, 1, eps, n,
                                         seed=31)
        comp = compose(identity_gen_1d, threshold_classifier)
        X = gaussian_matrix(31, n, 1)
        for i, kind in enumerate(rep.verdicts):
            witness = grid_falsify(comp, X[i], eps, 1, 201)
            if kind == "C":
                assert witness is None  # soundness: fatal if violated
            elif kind == "F":
                assert witness is not None
            else:  # Unknown: a true violation exists on this exact model
                assert witness is not None

    def test_counts_partition_n(self, identity_gen_1d,
                                threshold_classifier):
        rep = estimate_global_robustness(threshold_classifier,
                                         identity_gen_1d, 1, 0.05, 400,
                                         seed=7)
        assert rep.certified + rep.falsified + rep.unknown == rep.n
        assert len(rep.verdicts) == rep.n
        assert rep.lower_bound <= rep.upper_bound

    def test_monotone_in_epsilon(self, identity_gen_1d,
                                 threshold_classifier):
        prev = None
        for eps in (0.01, 0.05, 0.1, 0.3):
            rep = estimate_global_robustness(threshold_classifier,
                                             identity_gen_1d, 1, eps, 300,
                                             seed=13)
            if prev is not None:
                assert rep.certified <= prev.certified
                assert rep.falsified >= prev.falsified
            prev = rep

    def test_thread_count_does_not_change_report(self, identity_gen_1d,
                                                 threshold_classifier):
        reps = [estimate_global_robustness(threshold_classifier,
                                           identity_gen_1d, 1, 0.1, 300,
                                           seed=19, threads=t)
                for t in (1, 2, 5)]
        assert report_to_text(reps[0]) == report_to_text(reps[1])
        assert report_to_text(reps[0]) == report_to_text(reps[2])

    def test_bounds_bracket_true_probability(self, identity_gen_1d,
                                             threshold_classifier):
        # closed form: sample x is epsilon-robust iff x > epsilon,
        # so the true probability is 1 - Phi(epsilon)
        eps = 0.1
        truth = 1.0 - norm.cdf(eps)
        rep = estimate_global_robustness(threshold_classifier,
                                         identity_gen_1d, 1, eps, 2000,
                                         seed=41)
        assert rep.lower_bound <= truth <= rep.upper_bound

    def test_invalid_budget(self, identity_gen_1d, threshold_classifier):
        with pytest.raises(ConfigurationError):
            estimate_global_robustness(threshold_classifier,
                                       identity_gen_1d, 1, 0.1, 10, seed=0,
                                       budget=0)


class TestReportText:
    def test_correctness_fields_present(self, identity_gen_1d,
                                        threshold_classifier):
        rep = estimate_global_correctness(threshold_classifier,
                                          identity_gen_1d, 1, 50, seed=2)
        text = report_to_text(rep)
        for field in ("kind correctness", "category 1", "n 50",
                      "successes", "point_estimate", "ci_lo", "ci_hi",
                      "level", "seed 2", "delta_claim"):
            assert field in text

    def test_robustness_fields_present(self, identity_gen_1d,
                                       threshold_classifier):
        rep = estimate_global_robustness(threshold_classifier,
                                         identity_gen_1d, 1, 0.1, 20,
                                         seed=2)
        text = report_to_text(rep)
        for field in ("kind robustness", "epsilon", "certified",
                      "falsified", "unknown", "lower_bound", "upper_bound",
                      "verdicts"):
            assert field in text
