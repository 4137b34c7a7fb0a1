"""Two-cohort differential network pipeline."""

import dataclasses

import numpy as np
import pytest

from bgnet.bench import ModelSpec, generate_model, simulate_data
from bgnet.diffnet import (
    CLASS_GAINED,
    CLASS_LOST,
    CLASS_STRENGTHENED,
    differential_network,
    estimate_component,
)
from bgnet.rng import RngStream
from bgnet.samplers import BaePrior, ChainConfig, PosteriorSummary, run_chain


def make_summary(omega, rho, n=100):
    omega = np.asarray(omega, dtype=float)
    return PosteriorSummary(
        p=omega.shape[0], n=n, n_retained=10, omega_mean=omega,
        omega_q05=omega, omega_q50=omega, omega_q95=omega,
        rho_mean=np.asarray(rho, dtype=float),
    )


def rho_with(pairs, p=4):
    rho = np.eye(p)
    for (i, j), v in pairs.items():
        rho[i, j] = rho[j, i] = v
    return rho


class TestEstimateComponent:
    def test_delegates_to_run_chain(self):
        data = RngStream(61).generator.standard_normal((80, 3))
        cfg = ChainConfig(prior=BaePrior(), burn_in=100, samples=200, seed=14)
        summary = estimate_component(data, cfg)
        expected, _ = run_chain(data, cfg)
        assert np.array_equal(summary.omega_mean, expected.omega_mean)
        assert np.array_equal(summary.rho_mean, expected.rho_mean)

    def test_null_model_offdiagonals_small(self):
        # at n = 100 a null posterior-mean partial correlation has spread
        # near 0.09, so the extreme of the 45 pairs sits around 0.2
        data = RngStream(2026, 7).generator.standard_normal((100, 10))
        cfg = ChainConfig(prior=BaePrior(), burn_in=1000, samples=2000, seed=19)
        summary = estimate_component(data, cfg)
        off = np.abs(summary.rho_mean[np.triu_indices(10, k=1)])
        assert off.max() < 0.3
        assert np.median(off) < 0.1

    def test_banded_truth_eigenvalue_loss(self):
        # frozen regression band for the banded model's eigenvalue loss
        from bgnet.bench import loss_report

        truth = generate_model(ModelSpec("M1", 1, 10, seed=0))
        data = simulate_data(truth, 100, RngStream(88, 1))
        cfg = ChainConfig(prior=BaePrior(), burn_in=2000, samples=4000, seed=15)
        summary = estimate_component(data, cfg)
        assert 0.1 < loss_report(summary.omega_mean, truth).el1 < 0.5


class TestDifferentialNetwork:
    def test_identical_summaries_give_null_network(self):
        rho = rho_with({(0, 1): 0.5, (2, 3): -0.4})
        s = make_summary(np.eye(4) + 0.1, rho)
        net = differential_network(s, s, 0.12)
        assert np.array_equal(net.delta, np.zeros((4, 4)))
        assert net.n_differential() == 0
        assert not net.differential_edges.any()
        # cohort edge sets are still reported
        assert net.edges1[0, 1] and net.edges2[2, 3]

    def test_antisymmetry_bit_exact(self, gen):
        a = gen.standard_normal((5, 5))
        b = gen.standard_normal((5, 5))
        s1 = make_summary(a + a.T + np.eye(5) * 8, rho_with({(0, 1): 0.3}, 5))
        s2 = make_summary(b + b.T + np.eye(5) * 8, rho_with({(0, 2): 0.4}, 5))
        fwd = differential_network(s1, s2, 0.12)
        rev = differential_network(s2, s1, 0.12)
        assert np.array_equal(fwd.delta, -rev.delta)
        assert np.array_equal(fwd.differential_edges, rev.differential_edges)

    def test_dimension_mismatch(self):
        s1 = make_summary(np.eye(3), np.eye(3))
        s2 = make_summary(np.eye(4), np.eye(4))
        with pytest.raises(ValueError, match="dimensions differ"):
            differential_network(s1, s2, 0.1)

    def test_gained_lost_strengthened_classes(self):
        psi = 0.12
        rho1 = rho_with({(0, 1): 0.0, (0, 2): 0.5, (1, 2): 0.5, (2, 3): 0.2})
        rho2 = rho_with({(0, 1): 0.5, (0, 2): 0.0, (1, 2): 0.9, (2, 3): 0.2})
        s1 = make_summary(np.eye(4), rho1)
        s2 = make_summary(np.eye(4), rho2)
        net = differential_network(s1, s2, psi)
        assert net.edge_class(0, 1) == CLASS_GAINED
        assert net.edge_class(0, 2) == CLASS_LOST
        assert net.edge_class(1, 2) == CLASS_STRENGTHENED
        # shared edge with a small change is not differential
        assert net.edge_class(2, 3) is None
        assert net.n_differential() == 3
        assert net.psi_used == psi

    def test_shared_change_needs_magnitude_above_psi(self):
        # both cohorts keep the edge; |rho2 - rho1| = 0.1 < psi
        s1 = make_summary(np.eye(3), rho_with({(0, 1): 0.4}, 3))
        s2 = make_summary(np.eye(3), rho_with({(0, 1): 0.5}, 3))
        net = differential_network(s1, s2, 0.12)
        assert not net.differential_edges[0, 1]
        net_tight = differential_network(s1, s2, 0.05)
        assert net_tight.differential_edges[0, 1]
        assert net_tight.edge_class(0, 1) == CLASS_STRENGTHENED

    def test_differential_subset_of_union(self, gen):
        for trial in range(5):
            r1 = np.clip(gen.standard_normal((6, 6)) * 0.2, -0.9, 0.9)
            r2 = np.clip(gen.standard_normal((6, 6)) * 0.2, -0.9, 0.9)
            s1 = make_summary(np.eye(6), (r1 + r1.T) / 2)
            s2 = make_summary(np.eye(6), (r2 + r2.T) / 2)
            net = differential_network(s1, s2, 0.1)
            union = net.edges1 | net.edges2
            assert not (net.differential_edges & ~union).any()

    def test_scaled_pair_of_banded_models(self):
        # the two banded components are exact scalar multiples: the
        # difference of the true matrices is 0.9 on the diagonal, 0.45 on
        # the first band, 0.225 on the second; their partial correlations
        # are identical so no differential edges should be reported
        t1 = generate_model(ModelSpec("M2", 1, 10, seed=0))
        t2 = generate_model(ModelSpec("M2", 2, 10, seed=0))
        true_delta = t2 - t1
        assert true_delta[0, 0] == pytest.approx(0.9)
        assert true_delta[0, 1] == pytest.approx(0.45)
        assert true_delta[0, 2] == pytest.approx(0.225)

        n = 1000
        d1 = simulate_data(t1, n, RngStream(301, 0))
        d2 = simulate_data(t2, n, RngStream(301, 1))
        cfg = ChainConfig(prior=BaePrior(), burn_in=2000, samples=4000, seed=77)
        s1 = estimate_component(d1, cfg)
        s2 = estimate_component(d2, dataclasses.replace(cfg, chain_index=1))
        net = differential_network(s1, s2, 0.12)
        assert np.max(np.abs(net.delta - true_delta)) <= 0.15
        assert net.n_differential() == 0
