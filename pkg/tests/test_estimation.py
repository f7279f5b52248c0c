import io
import math

import numpy as np
import pytest

from gaussrisk.errors import (
    DegenerateBankError,
    DegenerateSeriesWarning,
    PanelFormatError,
    UnknownBankError,
)
from gaussrisk.estimation import (
    MomentEstimate,
    ReturnPanel,
    estimate_moments,
    load_panel,
    pair_for_bank,
)
from gaussrisk.mc import McConfig, sample_pair
from gaussrisk.measures import GaussianPair, to_system_view, var_contribution
from gaussrisk.normal import RiskParams, var_normal


def panel_from_csv(text: str) -> ReturnPanel:
    return load_panel(io.StringIO(text))


class TestLoadPanel:
    def test_minimal_panel(self):
        panel = panel_from_csv("A,B\n1,2\n3,4\n5,6\n")
        assert panel.labels == ("A", "B")
        assert panel.observations.shape == (3, 2)
        assert panel.observations[2, 1] == 6.0

    def test_date_column_skipped(self):
        panel = panel_from_csv(
            "date,A,B\n2020-01-01,1,2\n2020-01-02,3,4\n2020-01-03,5,6\n"
        )
        assert panel.labels == ("A", "B")
        assert panel.observations.shape == (3, 2)

    def test_date_header_case_insensitive(self):
        panel = panel_from_csv("Date,A,B\nx,1,2\ny,3,4\nz,5,6\n")
        assert panel.labels == ("A", "B")

    def test_nan_cell_named(self):
        with pytest.raises(PanelFormatError, match=r"row 3.*'B'"):
            panel_from_csv("A,B\n1,2\n3,NaN\n5,6\n")

    def test_non_numeric_cell_named(self):
        with pytest.raises(PanelFormatError, match=r"row 2.*'A'"):
            panel_from_csv("A,B\noops,2\n3,4\n5,6\n")

    def test_ragged_row_named(self):
        with pytest.raises(PanelFormatError, match="row 3"):
            panel_from_csv("A,B\n1,2\n3\n5,6\n")

    def test_duplicate_labels_rejected(self):
        with pytest.raises(PanelFormatError, match="duplicate"):
            panel_from_csv("A,A\n1,2\n3,4\n5,6\n")

    def test_too_few_rows_rejected(self):
        with pytest.raises(PanelFormatError, match="at least 3"):
            panel_from_csv("A,B\n1,2\n3,4\n")

    def test_empty_label_rejected(self):
        with pytest.raises(PanelFormatError, match="empty"):
            panel_from_csv("A,\n1,2\n3,4\n5,6\n")

    def test_empty_input_rejected(self):
        with pytest.raises(PanelFormatError, match="header"):
            panel_from_csv("")

    def test_blank_lines_ignored(self):
        panel = panel_from_csv("A,B\n1,2\n\n3,4\n5,6\n\n")
        assert panel.observations.shape == (3, 2)

    def test_frequency_metadata_recorded(self):
        panel = load_panel(io.StringIO("A,B\n1,2\n3,4\n5,6\n"), frequency="weekly")
        assert panel.frequency == "weekly"

    def test_observations_frozen(self):
        panel = panel_from_csv("A,B\n1,2\n3,4\n5,6\n")
        with pytest.raises(ValueError):
            panel.observations[0, 0] = 99.0


class TestEstimateMoments:
    def test_identical_columns_give_equal_entries(self):
        panel = panel_from_csv("A,B\n1,1\n2,2\n4,4\n")
        est = estimate_moments(panel)
        cov = est.covariance
        assert cov[0, 0] == cov[0, 1] == cov[1, 0] == cov[1, 1]
        assert pair_for_bank(est, "A").rho == 1.0

    def test_negated_column_gives_minus_one_correlation(self):
        panel = panel_from_csv("A,B\n1,-1\n2,-2\n4,-4\n")
        est = estimate_moments(panel)
        assert pair_for_bank(est, "A").rho == -1.0

    def test_unbiased_divisor(self):
        # variance of (0, 2) with divisor T-1 is 2, not 1
        panel = ReturnPanel(("A", "B"), np.array([[0.0, 1.0], [2.0, 1.5], [0.0, 1.0], [2.0, 1.5]]))
        est = estimate_moments(panel)
        assert est.covariance[0, 0] == pytest.approx(4.0 / 3.0, rel=1e-15)

    def test_iid_standard_normal_panel(self):
        rng = np.random.default_rng(314159)
        panel = ReturnPanel(("A", "B", "C"), rng.standard_normal((10_000, 3)))
        est = estimate_moments(panel)
        assert np.all(np.abs(np.diag(est.covariance) - 1.0) < 0.05)
        off = est.covariance[~np.eye(3, dtype=bool)]
        assert np.all(np.abs(off) < 0.05)
        assert np.all(np.abs(est.means) < 0.05)

    def test_iid_panel_from_joint_sampler(self):
        # same ground truth, generated by the package's own seeded sampler
        samples = sample_pair(
            GaussianPair(0.0, 0.0, 1.0, 1.0, 0.0), McConfig(sample_count=10_000, seed=77)
        )
        est = estimate_moments(ReturnPanel(("A", "B"), samples))
        assert np.all(np.abs(np.diag(est.covariance) - 1.0) < 0.05)
        assert abs(est.covariance[0, 1]) < 0.05
        assert np.all(np.abs(est.means) < 0.05)

    def test_zero_variance_column_warns(self):
        panel = panel_from_csv("A,B\n1,7\n2,7\n3,7\n")
        with pytest.warns(DegenerateSeriesWarning, match="'B'"):
            estimate_moments(panel)

    def test_row_permutation_invariance(self):
        rng = np.random.default_rng(7)
        obs = rng.standard_normal((200, 3))
        est = estimate_moments(ReturnPanel(("A", "B", "C"), obs))
        shuffled = obs[rng.permutation(200)]
        est2 = estimate_moments(ReturnPanel(("A", "B", "C"), shuffled))
        assert np.allclose(est.covariance, est2.covariance, rtol=0, atol=1e-12)
        assert np.allclose(est.means, est2.means, rtol=0, atol=1e-12)

    def test_constant_shift_moves_only_the_mean(self):
        rng = np.random.default_rng(8)
        obs = rng.standard_normal((500, 2))
        shifted = obs.copy()
        shifted[:, 0] += 2.5
        est = estimate_moments(ReturnPanel(("A", "B"), obs))
        est2 = estimate_moments(ReturnPanel(("A", "B"), shifted))
        assert est2.means[0] == pytest.approx(est.means[0] + 2.5, abs=1e-10)
        assert np.allclose(est.covariance, est2.covariance, rtol=0, atol=1e-10)


class TestMomentEstimate:
    def test_rejects_asymmetric_covariance(self):
        with pytest.raises(Exception, match="symmetric"):
            MomentEstimate(("A", "B"), np.zeros(2), np.array([[1.0, 0.5], [0.2, 1.0]]), 10)

    def test_rejects_non_psd(self):
        cov = np.array([[1.0, 2.0], [2.0, 1.0]])  # eigenvalues 3 and -1
        with pytest.raises(Exception, match="positive semidefinite"):
            MomentEstimate(("A", "B"), np.zeros(2), cov, 10)


class TestPairForBank:
    def test_two_banks_reduce_to_off_diagonal(self):
        est = MomentEstimate(
            ("A", "B"), np.array([0.1, 0.2]),
            np.array([[1.0, 0.5], [0.5, 2.0]]), 100,
        )
        pair = pair_for_bank(est, "A")
        assert (pair.mu_i, pair.mu_a) == (0.1, 0.2)
        assert (pair.var_i, pair.var_a, pair.cov_ia) == (1.0, 2.0, 0.5)
        # aggregate system variance equals the full quadratic form
        assert to_system_view(pair).var_s == pytest.approx(float(est.covariance.sum()), rel=1e-15)

    def test_three_banks_identity_covariance(self):
        est = MomentEstimate(("A", "B", "C"), np.zeros(3), np.eye(3), 100)
        pair = pair_for_bank(est, "A")
        assert (pair.var_i, pair.var_a, pair.cov_ia) == (1.0, 2.0, 0.0)

    def test_three_banks_all_ones_covariance(self):
        est = MomentEstimate(("A", "B", "C"), np.zeros(3), np.ones((3, 3)), 100)
        pair = pair_for_bank(est, "B")
        assert (pair.var_i, pair.var_a, pair.cov_ia) == (1.0, 4.0, 2.0)

    def test_unknown_label(self):
        est = MomentEstimate(("A", "B"), np.zeros(2), np.eye(2), 100)
        with pytest.raises(UnknownBankError):
            pair_for_bank(est, "Z")

    def test_degenerate_bank(self):
        cov = np.array([[0.0, 0.0], [0.0, 1.0]])
        est = MomentEstimate(("A", "B"), np.zeros(2), cov, 100)
        with pytest.raises(DegenerateBankError):
            pair_for_bank(est, "A")

    def test_system_variance_independent_of_singled_out_bank(self):
        rng = np.random.default_rng(99)
        obs = rng.standard_normal((400, 4)) @ rng.uniform(0.2, 1.0, size=(4, 4))
        est = estimate_moments(ReturnPanel(("A", "B", "C", "D"), obs))
        quadratic_form = float(est.covariance.sum())
        for bank in est.labels:
            var_s = to_system_view(pair_for_bank(est, bank)).var_s
            assert var_s == pytest.approx(quadratic_form, abs=1e-10 * max(1.0, quadratic_form))

    def test_contributions_sum_to_system_var(self):
        rng = np.random.default_rng(123)
        root = rng.uniform(-0.4, 0.8, size=(3, 3)) + np.eye(3)
        obs = rng.standard_normal((600, 3)) @ root.T + rng.uniform(-0.1, 0.1, 3)
        est = estimate_moments(ReturnPanel(("A", "B", "C"), obs))
        params = RiskParams(0.99)
        total = sum(var_contribution(pair_for_bank(est, bank), params) for bank in est.labels)
        mu_s = float(est.means.sum())
        var_s = float(est.covariance.sum())
        assert abs(total - var_normal(mu_s, var_s, params)) < 1e-9
