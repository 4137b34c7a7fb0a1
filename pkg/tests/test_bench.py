"""Benchmark models, losses, classification metrics, and the harness."""

import math

import numpy as np
import pytest

from bgnet.bench import (
    DESK_BURN_IN,
    DESK_SAMPLES,
    ESTIMATORS,
    MODEL_IDS,
    ModelSpec,
    _median_se,
    calibration_cases,
    classification_report,
    ensure_positive_definite,
    generate_model,
    loss_report,
    run_benchmark,
    simulate_data,
    support_adjacency,
)
from bgnet.errors import NotPositiveDefiniteError
from bgnet.matrices import is_positive_definite
from bgnet.rng import RngStream
from bgnet.structure import CalibrationModel


class TestModelSpec:
    def test_validation(self):
        with pytest.raises(ValueError, match="model_id"):
            ModelSpec("M7", 1, 10)
        with pytest.raises(ValueError, match="component"):
            ModelSpec("M1", 3, 10)
        with pytest.raises(ValueError, match="at least 4"):
            ModelSpec("M1", 2, 3)
        with pytest.raises(ValueError, match="even p"):
            ModelSpec("M4", 1, 9)
        with pytest.raises(ValueError, match="even p"):
            ModelSpec("M5", 2, 7)


class TestGenerateModel:
    def test_exponential_decay_entries(self):
        omega = generate_model(ModelSpec("M1", 2, 4))
        assert omega[0, 0] == 1.0
        assert omega[0, 1] == pytest.approx(0.75)
        assert omega[0, 2] == pytest.approx(0.5625)
        weaker = generate_model(ModelSpec("M1", 1, 4))
        assert weaker[0, 1] == pytest.approx(0.7)

    def test_banded_components_scale_exactly(self):
        strong = generate_model(ModelSpec("M2", 2, 10))
        weak = generate_model(ModelSpec("M2", 1, 10))
        assert strong[0, 0] == 1.0 and strong[0, 1] == 0.5 and strong[0, 2] == 0.25
        assert strong[0, 3] == 0.0
        assert np.array_equal(weak, 0.1 * strong)

    def test_scale_free_structure(self):
        spec = ModelSpec("M3", 2, 10, seed=4)
        omega = generate_model(spec)
        assert np.array_equal(omega, generate_model(spec))
        off = omega[~np.eye(10, dtype=bool)]
        weights = off[off != 0]
        assert np.all(weights == 0.5)
        # a tree on 10 nodes has 9 edges
        assert weights.size == 18
        np.testing.assert_allclose(
            np.diag(omega), np.abs(omega).sum(axis=1) - np.diag(omega) + 0.1
        )
        half = generate_model(ModelSpec("M3", 1, 10, seed=4))
        assert np.array_equal(half, 0.5 * omega)

    def test_block_models(self):
        m4 = generate_model(ModelSpec("M4", 1, 8))
        assert m4[0, 1] == 0.2 and m4[4, 5] == 0.5
        assert m4[0, 7] == 0.0 and m4[0, 0] == 1.0
        m4b = generate_model(ModelSpec("M4", 2, 8))
        assert m4b[0, 1] == 0.7 and m4b[4, 5] == 0.9
        m5 = generate_model(ModelSpec("M5", 2, 8))
        assert m5[0, 0] == 2.0 and m5[0, 1] == 1.0 and m5[4, 5] == 1.0
        m5w = generate_model(ModelSpec("M5", 1, 8))
        assert m5w[0, 0] == 1.0 and m5w[0, 1] == 0.5

    def test_circle_models(self):
        m6 = generate_model(ModelSpec("M6", 1, 5))
        assert m6[0, 0] == 2.0 and m6[0, 1] == 1.0
        assert m6[0, 4] == 0.45 and m6[4, 0] == 0.45
        assert m6[0, 2] == 0.0
        m6b = generate_model(ModelSpec("M6", 2, 5))
        assert m6b[0, 0] == 4.0 and m6b[0, 1] == 2.0 and m6b[0, 4] == 0.95

    def test_all_models_positive_definite(self):
        for model_id in MODEL_IDS:
            for comp in (1, 2):
                p = 10
                omega, eps = generate_model(
                    ModelSpec(model_id, comp, p), return_repair=True
                )
                assert is_positive_definite(omega), (model_id, comp)
                # none of the standard shapes need the ridge repair
                assert eps == 0.0


class TestEnsurePositiveDefinite:
    def test_no_op_on_pd_input(self):
        m = np.eye(3)
        out, eps = ensure_positive_definite(m)
        assert eps == 0.0
        assert np.array_equal(out, m)

    def test_repairs_to_min_eigenvalue(self):
        m = np.array([[1.0, 2.0], [2.0, 1.0]])  # eigenvalues -1, 3
        out, eps = ensure_positive_definite(m)
        assert eps == pytest.approx(1.01)
        assert float(np.linalg.eigvalsh(out).min()) == pytest.approx(0.01)


class TestSupportAdjacency:
    def test_nonzero_offdiagonals(self):
        omega = generate_model(ModelSpec("M2", 2, 6))
        adj = support_adjacency(omega)
        assert adj[0, 1] and adj[0, 2] and not adj[0, 3]
        assert not adj.diagonal().any()
        assert np.array_equal(adj, adj.T)


class TestSimulateData:
    def test_identity_precision_sample_covariance(self):
        data = simulate_data(np.eye(3), 100_000, RngStream(12))
        cov = np.cov(data.T, bias=True)
        rel = np.linalg.norm(cov - np.eye(3), "fro") / np.linalg.norm(np.eye(3), "fro")
        assert rel < 0.02

    def test_banded_precision_recovered_at_large_n(self):
        omega = generate_model(ModelSpec("M1", 2, 5))
        data = simulate_data(omega, 100_000, RngStream(13))
        prec = np.linalg.inv(np.cov(data.T, bias=True))
        rel = np.linalg.norm(prec - omega, "fro") / np.linalg.norm(omega, "fro")
        assert rel < 0.05

    def test_deterministic(self):
        omega = generate_model(ModelSpec("M6", 1, 5))
        a = simulate_data(omega, 50, RngStream(5, 3))
        b = simulate_data(omega, 50, RngStream(5, 3))
        assert np.array_equal(a, b)

    def test_non_pd_rejected(self):
        with pytest.raises(NotPositiveDefiniteError):
            simulate_data(np.zeros((3, 3)), 10, RngStream(0))


class TestLossReport:
    def test_zero_when_equal(self):
        omega = generate_model(ModelSpec("M2", 2, 6))
        losses = loss_report(omega, omega)
        assert losses.l1 == losses.l2 == losses.el1 == losses.el2 == 0.0

    def test_hand_two_by_two(self):
        truth = np.eye(2)
        estimate = np.array([[1.0, 0.1], [0.1, 1.0]])
        losses = loss_report(estimate, truth)
        assert losses.l1 == pytest.approx(0.1)
        assert losses.l2 == pytest.approx(math.sqrt(0.02))
        # estimate eigenvalues 0.9 and 1.1
        assert losses.el1 == pytest.approx(0.1)
        assert losses.el2 == pytest.approx(0.01)

    def test_matching_spectra_zero_eigen_loss(self):
        losses = loss_report(np.diag([2.0, 1.0]), np.diag([1.0, 2.0]))
        assert losses.l1 == pytest.approx(1.0)
        assert losses.el1 == 0.0 and losses.el2 == 0.0

    def test_eigen_losses_rotation_invariant(self, gen):
        a = gen.standard_normal((5, 5))
        est = a + a.T
        b = gen.standard_normal((5, 5))
        tru = b + b.T
        q, _ = np.linalg.qr(gen.standard_normal((5, 5)))
        base = loss_report(est, tru)
        rotated = loss_report(q @ est @ q.T, q @ tru @ q.T)
        assert rotated.el1 == pytest.approx(base.el1, abs=1e-9)
        assert rotated.el2 == pytest.approx(base.el2, abs=1e-9)

    def test_validation(self):
        with pytest.raises(ValueError, match="shape"):
            loss_report(np.eye(2), np.eye(3))
        with pytest.raises(ValueError, match="symmetric"):
            loss_report(np.array([[1.0, 2.0], [0.0, 1.0]]), np.eye(2))


class TestClassificationReport:
    def adj(self, p, pairs):
        a = np.zeros((p, p), dtype=bool)
        for i, j in pairs:
            a[i, j] = a[j, i] = True
        return a

    def test_perfect_recovery(self):
        truth = self.adj(5, [(0, 1), (2, 3)])
        rep = classification_report(truth, truth)
        assert (rep.se, rep.sp, rep.pr, rep.f1, rep.ac) == (1.0, 1.0, 1.0, 1.0, 1.0)
        assert rep.tp == 2 and rep.fp == 0

    def test_three_of_four_plus_false_positive(self):
        truth = self.adj(6, [(0, 1), (0, 2), (1, 2), (3, 4)])
        est = self.adj(6, [(0, 1), (0, 2), (1, 2), (4, 5)])
        rep = classification_report(est, truth)
        assert rep.se == pytest.approx(0.75)
        assert rep.pr == pytest.approx(0.75)
        assert rep.f1 == pytest.approx(0.75)
        assert rep.tp == 3 and rep.fp == 1 and rep.fn == 1 and rep.tn == 10

    def test_empty_estimate_vs_nonempty_truth(self):
        truth = self.adj(4, [(0, 1)])
        rep = classification_report(self.adj(4, []), truth)
        assert rep.se == 0.0 and rep.sp == 1.0 and rep.ac == 0.5
        assert rep.pr == 0.0
        assert "no-predictions" in rep.flags

    def test_empty_truth_conventions(self):
        empty = self.adj(4, [])
        rep = classification_report(empty, empty)
        assert rep.se == 1.0 and rep.pr == 1.0 and rep.f1 == 1.0
        noisy = classification_report(self.adj(4, [(1, 2)]), empty)
        assert noisy.se == 0.0 and noisy.f1 == 0.0
        assert "sensitivity-undefined" in noisy.flags

    def test_ac_is_mean_of_se_sp(self):
        truth = self.adj(5, [(0, 1), (1, 2)])
        est = self.adj(5, [(0, 1), (3, 4)])
        rep = classification_report(est, truth)
        assert rep.ac == pytest.approx((rep.se + rep.sp) / 2)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            classification_report(np.zeros((3, 3), bool), np.zeros((4, 4), bool))


class TestMedianSe:
    def test_normal_approximation_formula(self):
        values = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
        expected = 1.2533 * values.std(ddof=1) / math.sqrt(5)
        assert _median_se(values) == pytest.approx(expected)

    def test_degenerate_sizes(self):
        assert math.isnan(_median_se(np.array([1.0])))
        assert math.isnan(_median_se(np.array([])))

    def test_bootstrap_variant(self):
        values = RngStream(3).generator.normal(size=40)
        se = _median_se(values, bootstrap=True, rng=RngStream(4))
        assert 0.05 < se < 0.5


class TestRunBenchmark:
    def test_oracle_plug_scores_perfectly(self):
        report = run_benchmark(
            model_ids=("M2",), p_values=(10,), replications=2,
            estimators=("oracle",), burn_in=10, samples=10,
        )
        assert not report.failed()
        for metric, value in (("l1", 0.0), ("f1", 1.0), ("se", 1.0), ("ac", 1.0)):
            med, _ = report.cell("M2", 10, "oracle", metric)
            assert med == value

    def test_deterministic_and_parallel_equivalent(self):
        kwargs = dict(
            model_ids=("M6",), p_values=(6,), replications=2,
            estimators=("bagr",), burn_in=50, samples=100, seed=3,
        )
        serial = run_benchmark(parallelism=1, **kwargs)
        again = run_benchmark(parallelism=1, **kwargs)
        parallel = run_benchmark(parallelism=2, **kwargs)
        assert serial.aggregate == again.aggregate
        assert serial.aggregate == parallel.aggregate
        assert serial.rows == parallel.rows

    def test_rows_cover_both_components(self):
        report = run_benchmark(
            model_ids=("M2",), p_values=(6,), replications=1,
            estimators=("bae",), burn_in=20, samples=40,
        )
        comps = sorted(r["component"] for r in report.rows)
        assert comps == [1, 2]
        assert all(r["error"] is None for r in report.rows)

    def test_validation(self):
        with pytest.raises(ValueError, match="unknown model"):
            run_benchmark(model_ids=("M9",), replications=1)
        with pytest.raises(ValueError, match="unknown estimator"):
            run_benchmark(model_ids=("M1",), estimators=("mle",), replications=1)

    def test_csv_layout(self):
        report = run_benchmark(
            model_ids=("M2",), p_values=(6,), replications=2,
            estimators=("oracle",), burn_in=10, samples=10,
        )
        lines = report.to_csv_string().strip().split("\n")
        assert lines[0] == "model,p,estimator,component,metric,median,se,replications"
        # 1 model x 1 p x 1 estimator x 2 components x 9 metrics
        assert len(lines) == 1 + 18
        obj = report.to_json_obj()
        assert obj["tables"]["M2"]["p6"]["oracle"]["component2"]["l1"]["median"] == 0.0

    def test_cell_lookup_missing(self):
        report = run_benchmark(
            model_ids=("M2",), p_values=(6,), replications=1,
            estimators=("oracle",), burn_in=10, samples=10,
        )
        with pytest.raises(KeyError):
            report.cell("M1", 6, "oracle", "l1")


class TestCalibrationCases:
    def test_one_case_per_model(self):
        cases = calibration_cases(
            model_ids=("M2", "M6"), p=6, estimator="bagl", seed=1,
            burn_in=50, samples=100,
        )
        assert [c.label for c in cases] == ["M2", "M6"]
        for case in cases:
            assert isinstance(case, CalibrationModel)
            assert case.truth_omega.shape == (6, 6)
            assert case.omega_mean.shape == (6, 6)
            assert np.all(np.abs(case.rho_mean) <= 1.0)

    def test_defaults_match_desk_lengths(self):
        assert DESK_BURN_IN == 2000 and DESK_SAMPLES == 4000
        assert ESTIMATORS == ("bae", "bagl", "bagr")
