"""Tests for mean-IRF inversion, oracle and empirical recovery, and sup distances."""

import os
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError
from scipy.special import expit, ndtri

from irt_identify.errors import DegenerateDataError, DomainError, EmptyRecoveryGridError, NoSolutionError
from irt_identify.experiments import SimConfig, heterogeneous_4pl, simulate_responses
from irt_identify.irf import four_pl_params, identity_irf, latent_irf, make_irf, normal_ogive_params, transform_irf
from irt_identify.manifest import ModelSpec, rest_score_tables
from irt_identify.recovery import (
    RecoveryEntry,
    RecoveryGrid,
    RestMean,
    invert_mean_irf,
    mean_irf,
    recover_all_empirical,
    recover_all_items,
    recover_irf_empirical,
    recover_irf_oracle,
    recovery_error,
    rest_score_groups,
    shared_rest_score_tables,
    sup_diff,
)

RUN_SLOW = os.getenv("IRT_IDENTIFY_RUN_SLOW") == "1"


def identity_model(n):
    return ModelSpec(items=(identity_irf(),) * n)


def ogive_model(n, a=1.0, b=1.0):
    return ModelSpec.homogeneous(normal_ogive_params(a, b), n)


class MeanIrfTests(unittest.TestCase):
    def test_identity_mean_is_theta(self):
        theta = np.linspace(0.01, 0.99, 25)
        np.testing.assert_allclose(mean_irf(identity_model(6), 2, theta), theta, atol=1e-14)

    def test_mean_of_two_ogives(self):
        model = ModelSpec.from_params(
            [normal_ogive_params(2.0, 0.3), normal_ogive_params(1.0, 0.0), normal_ogive_params(1.0, 1.0)]
        )
        self.assertAlmostEqual(mean_irf(model, 0, 0.5), 0.3293276270, places=10)

    def test_four_pl_mean_stays_between_asymptote_means(self):
        params = [four_pl_params(1.0, 0.0, 0.1, 0.9), four_pl_params(2.0, 1.0, 0.2, 0.8), four_pl_params(0.7, -1.0, 0.0, 1.0)]
        model = ModelSpec.from_params(params * 2)
        values = mean_irf(model, 0, np.linspace(1e-6, 1.0 - 1e-6, 101))
        low = np.mean([0.2, 0.0, 0.1, 0.2, 0.0])
        high = np.mean([0.8, 1.0, 0.9, 0.8, 1.0])
        self.assertTrue(np.all((values >= low) & (values <= high)))
        self.assertTrue(np.all(np.diff(values) > 0.0))

    def test_mean_rejects_closed_endpoint(self):
        with self.assertRaises(DomainError):
            mean_irf(identity_model(3), 0, 1.0)


class InvertMeanIrfTests(unittest.TestCase):
    def test_identity_knots_are_exact(self):
        n = 11
        for k in range(1, n - 1):
            self.assertAlmostEqual(invert_mean_irf(identity_model(n), 0, k / (n - 1)), k / (n - 1), delta=1e-11)

    def test_shared_ogive_knot_matches_analytic_value(self):
        self.assertAlmostEqual(invert_mean_irf(ogive_model(5), 0, 0.5), 0.8413447461, places=9)

    def test_targets_outside_asymptotes_have_no_solution(self):
        model = ModelSpec.homogeneous(four_pl_params(1.0, 0.0, 0.2, 0.8), 4)
        for target in (0.1, 0.2, 0.8, 0.95):
            with self.assertRaises(NoSolutionError):
                invert_mean_irf(model, 0, target)

    def test_batched_inversion_for_a_heterogeneous_bank(self):
        rest_mean = RestMean.for_item(heterogeneous_4pl(seed=6)(40), 0)
        self.assertIsNotNone(rest_mean.bank)
        span = rest_mean.upper_limit - rest_mean.lower_limit
        targets = rest_mean.lower_limit + span * np.linspace(0.02, 0.98, 49)
        knots = rest_mean.invert(targets)
        self.assertTrue(np.all(np.diff(knots) > 0.0))
        np.testing.assert_allclose(rest_mean.value(knots), targets, rtol=0, atol=1e-11)

    def test_batched_inversion_without_a_bank(self):
        latent = transform_irf(latent_irf(four_pl_params(1.2, 0.3, 0.1, 0.9)))
        model = ModelSpec(items=(latent, identity_irf(), latent, make_irf(normal_ogive_params(0.8, -0.5))))
        rest_mean = RestMean.for_item(model, 1)
        self.assertIsNone(rest_mean.bank)
        targets = np.array([0.2, 0.35, 0.5, 0.65, 0.8])
        knots = rest_mean.invert(targets)
        np.testing.assert_allclose(mean_irf(model, 1, knots), targets, rtol=0, atol=1e-11)
        for target, knot in zip(targets, knots):
            self.assertAlmostEqual(invert_mean_irf(model, 1, float(target)), float(knot), delta=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(min_value=0.01, max_value=0.99))
    def test_inversion_round_trip(self, target):
        model = ogive_model(4)
        self.assertAlmostEqual(mean_irf(model, 1, invert_mean_irf(model, 1, target)), target, delta=1e-11)


class OracleRecoveryTests(unittest.TestCase):
    def test_identity_recovery_on_eleven_items(self):
        grid = recover_irf_oracle(identity_model(11), 0, 0.05, 0.95)
        np.testing.assert_array_equal(grid.ks(), np.arange(1, 10))
        np.testing.assert_allclose(grid.thetas(), np.arange(1, 10) / 10.0, atol=1e-11)
        np.testing.assert_allclose(grid.p_hats(), (np.arange(1, 10) + 1) / 12.0, atol=1e-10)
        self.assertLessEqual(float(np.max(np.abs(grid.p_hats() - grid.thetas()))), 0.1)

    def test_two_items_leave_no_interior_knot(self):
        with self.assertRaises(EmptyRecoveryGridError):
            recover_irf_oracle(identity_model(2), 0, 0.01, 0.99)

    def test_interval_must_be_ordered(self):
        with self.assertRaises(DomainError):
            recover_irf_oracle(identity_model(5), 0, 0.9, 0.1)

    def test_knots_increase_and_stay_inside_interval(self):
        model = ModelSpec.from_params(
            [four_pl_params(1.0 + 0.1 * j, -1.0 + 0.2 * j, 0.05, 0.95) for j in range(12)]
        )
        grid = recover_irf_oracle(model, 4, 0.1, 0.9)
        self.assertTrue(np.all(np.diff(grid.thetas()) > 0.0))
        self.assertTrue(np.all((grid.thetas() > 0.1) & (grid.thetas() < 0.9)))

    def test_recovery_error_shrinks_with_more_items(self):
        small = recovery_error(recover_irf_oracle(ogive_model(51), 0, 0.1, 0.9), ogive_model(51).items[0])
        large = recovery_error(recover_irf_oracle(ogive_model(201), 0, 0.1, 0.9), ogive_model(201).items[0])
        self.assertLess(large, small)

    def test_recover_all_items_reuses_equal_parameters(self):
        params = [four_pl_params(1.0, 0.0, 0.1, 0.9), four_pl_params(1.5, 0.5, 0.0, 1.0)] * 6
        model = ModelSpec.from_params(params)
        grids = recover_all_items(model, 0.1, 0.9, workers=2)
        self.assertEqual([grid.item for grid in grids], list(range(12)))
        direct = recover_irf_oracle(model, 3, 0.1, 0.9)
        np.testing.assert_array_equal(grids[3].ks(), direct.ks())
        np.testing.assert_allclose(grids[3].p_hats(), direct.p_hats(), rtol=1e-12)
        np.testing.assert_allclose(grids[3].thetas(), direct.thetas(), atol=1e-11)
        self.assertEqual(grids[1].entries, grids[5].entries)

    def test_shared_tables_recover_like_single_items(self):
        model = heterogeneous_4pl(seed=4)(30)
        grids = recover_all_items(model, 0.1, 0.9, workers=2)
        for item in (0, 13, 29):
            with self.subTest(item=item):
                direct = recover_irf_oracle(model, item, 0.1, 0.9)
                np.testing.assert_array_equal(grids[item].ks(), direct.ks())
                np.testing.assert_allclose(grids[item].p_hats(), direct.p_hats(), rtol=0, atol=1e-12)
                np.testing.assert_allclose(grids[item].thetas(), direct.thetas(), rtol=0, atol=1e-10)

    def test_precomputed_tables_must_cover_every_item(self):
        model = identity_model(6)
        with self.assertRaises(DomainError):
            recover_all_items(model, 0.1, 0.9, tables=rest_score_tables(model)[:5])
        self.assertIsNone(shared_rest_score_tables(model))
        self.assertEqual(len(shared_rest_score_tables(heterogeneous_4pl(seed=4)(10))), 10)


class RecoveryGridTests(unittest.TestCase):
    def test_rejects_decreasing_knots(self):
        with self.assertRaises(ValidationError):
            RecoveryGrid(
                item=0,
                entries=[RecoveryEntry(k=1, theta_k=0.5, p_hat=0.5), RecoveryEntry(k=2, theta_k=0.4, p_hat=0.6)],
                alpha=0.1,
                beta=0.9,
            )

    def test_rejects_knot_outside_interval(self):
        with self.assertRaises(ValidationError):
            RecoveryGrid(item=0, entries=[RecoveryEntry(k=1, theta_k=0.95, p_hat=0.5)], alpha=0.1, beta=0.9)

    def test_evaluate_interpolates_and_holds_ends(self):
        grid = RecoveryGrid(
            item=0,
            entries=[RecoveryEntry(k=1, theta_k=0.2, p_hat=0.3), RecoveryEntry(k=2, theta_k=0.4, p_hat=0.5)],
            alpha=0.1,
            beta=0.9,
        )
        np.testing.assert_allclose(grid.evaluate([0.1, 0.3, 0.8]), [0.3, 0.4, 0.5])


class SupDiffTests(unittest.TestCase):
    def test_model_against_itself_is_zero(self):
        model = ModelSpec.from_params([four_pl_params(1.0, 0.0, 0.1, 0.9), normal_ogive_params(1.0, 1.0)])
        report = sup_diff(model, model, (0.1, 0.9))
        self.assertEqual(report.per_item, [0.0, 0.0])
        self.assertEqual(report.max_over_items, 0.0)

    def test_identity_against_logistic_matches_grid_oracle(self):
        thetas = np.linspace(0.1, 0.9, 9)
        expected = float(np.max(np.abs(thetas - expit(ndtri(thetas)))))
        logistic_model = ModelSpec.from_params([four_pl_params(1.0, 0.0, 0.0, 1.0)])
        report = sup_diff(identity_model(1), logistic_model, (0.1, 0.9), grid=9)
        self.assertAlmostEqual(report.per_item[0], expected, places=14)
        self.assertEqual(report.grid_size, 9)

    def test_triangle_inequality(self):
        first = identity_model(1)
        second = ModelSpec.from_params([normal_ogive_params(1.0, 0.5)])
        third = ModelSpec.from_params([four_pl_params(1.0, 0.0, 0.1, 0.9)])
        direct = sup_diff(first, third).max_over_items
        detour = sup_diff(first, second).max_over_items + sup_diff(second, third).max_over_items
        self.assertLessEqual(direct, detour + 1e-15)

    def test_full_range_grid(self):
        report = sup_diff(identity_model(2), identity_model(2))
        self.assertTrue(report.full_range)
        self.assertIsNone(report.alpha)

    def test_mismatched_item_counts_raise(self):
        with self.assertRaises(DomainError):
            sup_diff(identity_model(2), identity_model(3))

    def test_recovered_grids_compare_against_truth(self):
        model = identity_model(21)
        grids = recover_all_items(model, 0.1, 0.9, workers=1)
        report = sup_diff(grids, model, (0.1, 0.9))
        self.assertEqual(len(report.per_item), 21)
        self.assertLess(report.max_over_items, 0.1)


class EmpiricalRecoveryTests(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(1)
        others = rng.integers(0, 2, (2000, 10))
        majority = (others.sum(axis=1) > 5).astype(int)
        self.responses = np.column_stack([majority, others])

    def test_rest_score_groups_tally_every_respondent(self):
        groups = rest_score_groups(self.responses, 0)
        self.assertEqual(int(groups.counts.sum()), 2000)
        self.assertTrue(np.all(np.diff(groups.scores) > 0))
        self.assertTrue(np.all(groups.successes <= groups.counts))

    def test_majority_item_increases_with_rest_score(self):
        recovery = recover_irf_empirical(self.responses, 0)
        self.assertTrue(np.all(np.diff(recovery.p_hats()) >= 0.0))
        self.assertTrue(all(entry.count >= 25 for entry in recovery.bins))
        self.assertEqual(sum(entry.count for entry in recovery.bins), 2000)

    def test_respondent_order_does_not_matter(self):
        shuffled = np.random.default_rng(9).permutation(self.responses, axis=0)
        self.assertEqual(
            recover_irf_empirical(shuffled, 0).model_dump(),
            recover_irf_empirical(self.responses, 0).model_dump(),
        )

    def test_bin_cap_limits_bin_count(self):
        recovery = recover_irf_empirical(self.responses, 0, bins=4)
        self.assertLessEqual(len(recovery.bins), 4)

    def test_constant_column_is_degenerate(self):
        responses = self.responses.copy()
        responses[:, 3] = 1
        with self.assertRaises(DegenerateDataError):
            recover_irf_empirical(responses, 3)
        with self.assertLogs("irt_identify.recovery.empirical", level="WARNING"):
            recoveries = recover_all_empirical(responses)
        self.assertNotIn(3, recoveries)
        self.assertIn(0, recoveries)

    def test_small_or_non_binary_samples_are_rejected(self):
        with self.assertRaises(DomainError):
            recover_irf_empirical(self.responses[:50], 0)
        bad = self.responses.copy()
        bad[0, 0] = 2
        with self.assertRaises(DomainError):
            recover_irf_empirical(bad, 0)

    @unittest.skipUnless(RUN_SLOW, "set IRT_IDENTIFY_RUN_SLOW=1 for Monte Carlo recovery")
    def test_simulated_two_parameter_items_are_recovered(self):
        model = ModelSpec.homogeneous(four_pl_params(1.0, 0.0, 0.0, 1.0), 50)
        responses = simulate_responses(SimConfig(model=model, num_respondents=100_000, seed=17))
        recovery = recover_irf_empirical(responses, 0, bins=25)
        inside = (recovery.thetas() > 0.2) & (recovery.thetas() < 0.8)
        truth = np.asarray(model.items[0].eval(recovery.thetas()[inside]))
        self.assertLessEqual(float(np.max(np.abs(recovery.p_hats()[inside] - truth))), 0.05)


if __name__ == "__main__":
    unittest.main()
