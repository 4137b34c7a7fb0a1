"""Graph structure learning from posterior partial-correlation summaries.

Two rules are provided: a fixed threshold psi on |rho_mean|, and a
reference-ratio rule that compares rho_mean against the posterior-mean
partial correlations under a weakly informative conjugate Wishart baseline.
calibrate_psi picks the threshold balancing edge-recovery F1 against the
L1 loss of the thresholded estimate across a set of models.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .rng import sample_wishart

__all__ = [
    "threshold_edges",
    "CalibrationModel",
    "ThresholdSweepResult",
    "default_threshold_grid",
    "calibrate_psi",
    "wang_rule",
]


def threshold_edges(rho_mean, psi):
    """Adjacency with an edge wherever |rho_mean| strictly exceeds psi.

    Symmetric boolean output with zero diagonal. psi must lie in [0, 1].
    """
    if not 0.0 <= psi <= 1.0:
        raise ValueError(f"psi must lie in [0, 1], got {psi}")
    rho_mean = np.asarray(rho_mean, dtype=float)
    adj = np.abs(rho_mean) > psi
    np.fill_diagonal(adj, False)
    return adj | adj.T


@dataclass(frozen=True)
class CalibrationModel:
    """One calibration case: the true precision matrix plus the posterior
    mean omega and mean partial correlations estimated from its data."""

    truth_omega: np.ndarray
    omega_mean: np.ndarray
    rho_mean: np.ndarray
    label: str = ""


@dataclass
class ThresholdSweepResult:
    """Per-model F1/L1 curves over the threshold grid and the balanced psi."""

    thresholds: np.ndarray
    f1_curve: np.ndarray
    l1_curve: np.ndarray
    psi_f1_median: float
    psi_l1_median: float
    psi: float
    labels: tuple
    excluded: tuple

    def export_rows(self):
        """Tabular (threshold, model, f1, l1) records for plotting."""
        rows = []
        for m, label in enumerate(self.labels):
            for t, thr in enumerate(self.thresholds):
                rows.append(
                    {
                        "threshold": float(thr),
                        "model": label,
                        "f1": float(self.f1_curve[m, t]),
                        "l1": float(self.l1_curve[m, t]),
                    }
                )
        return rows


def default_threshold_grid():
    """Thresholds 0.00 to 0.50 in steps of 0.005."""
    return np.round(np.arange(0, 101) * 0.005, decimals=3)


def _f1_score(adj, truth_adj):
    iu = np.triu_indices(adj.shape[0], k=1)
    est = adj[iu]
    tru = truth_adj[iu]
    tp = int(np.sum(est & tru))
    fp = int(np.sum(est & ~tru))
    fn = int(np.sum(~est & tru))
    denom = 2 * tp + fp + fn
    return 1.0 if denom == 0 else 2.0 * tp / denom


def _thresholded_l1(omega_mean, truth_omega, adj):
    clipped = omega_mean.copy()
    off = ~np.eye(clipped.shape[0], dtype=bool)
    clipped[off & ~adj] = 0.0
    return float(np.abs(clipped - truth_omega).sum(axis=0).max())


def calibrate_psi(models, grid=None, weights=(0.5, 0.5)):
    """Balanced threshold psi = w1 * median(argmax F1) + w2 * median(argmin L1).

    Per model, the F1-optimal and L1-optimal thresholds are located on the
    grid (ties broken toward the smaller threshold); psi combines the two
    medians across models. Models whose truth has no edges leave F1
    undefined and are excluded with a warning.
    """
    if grid is None:
        grid = default_threshold_grid()
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be a nonempty ascending threshold sequence")
    w1, w2 = weights
    if w1 < 0 or w2 < 0:
        raise ValueError("weights must be nonnegative")

    kept, labels, excluded = [], [], []
    for idx, model in enumerate(models):
        if not isinstance(model, CalibrationModel):
            model = CalibrationModel(*model)
        label = model.label or f"model{idx}"
        truth = np.asarray(model.truth_omega, dtype=float)
        truth_adj = np.abs(truth) > 0
        np.fill_diagonal(truth_adj, False)
        if not truth_adj.any():
            warnings.warn(f"{label}: no true edges, F1 undefined; model excluded")
            excluded.append(label)
            continue
        kept.append((model, truth, truth_adj))
        labels.append(label)
    if not kept:
        raise ValueError("no usable models (all had empty true edge sets)")

    f1_curve = np.empty((len(kept), grid.size))
    l1_curve = np.empty((len(kept), grid.size))
    for m, (model, truth, truth_adj) in enumerate(kept):
        rho = np.asarray(model.rho_mean, dtype=float)
        omega = np.asarray(model.omega_mean, dtype=float)
        for t, thr in enumerate(grid):
            adj = threshold_edges(rho, thr)
            f1_curve[m, t] = _f1_score(adj, truth_adj)
            l1_curve[m, t] = _thresholded_l1(omega, truth, adj)

    # argmax/argmin return the first optimum, i.e. the smaller threshold
    psi_f1 = grid[np.argmax(f1_curve, axis=1)]
    psi_l1 = grid[np.argmin(l1_curve, axis=1)]
    psi_f1_median = float(np.median(psi_f1))
    psi_l1_median = float(np.median(psi_l1))
    return ThresholdSweepResult(
        thresholds=grid,
        f1_curve=f1_curve,
        l1_curve=l1_curve,
        psi_f1_median=psi_f1_median,
        psi_l1_median=psi_l1_median,
        psi=float(w1 * psi_f1_median + w2 * psi_l1_median),
        labels=tuple(labels),
        excluded=tuple(excluded),
    )


def wang_rule(rho_mean, S, n, rng, n_reference=10_000, prior_df=3.0):
    """Reference-ratio edge rule.

    The reference is the posterior-mean partial correlation matrix under a
    Wishart(prior_df, I) prior, i.e. the Monte Carlo average over draws from
    Wishart(prior_df + n, (I + S)^{-1}). An edge is present when
    rho_mean_ij / reference_ij > 0.5. Pairs whose reference magnitude falls
    within 1e-12 of zero are marked absent with a warning.
    """
    rho_mean = np.asarray(rho_mean, dtype=float)
    S = np.asarray(S, dtype=float)
    p = rho_mean.shape[0]
    if S.shape != (p, p):
        raise ValueError("rho_mean and S dimensions differ")
    if n_reference < 1:
        raise ValueError("n_reference must be positive")
    scale = np.linalg.inv(np.eye(p) + S)
    # accumulate in batches so large p never materializes all draws at once
    reference = np.zeros((p, p))
    remaining = int(n_reference)
    while remaining > 0:
        m = min(1000, remaining)
        draws = sample_wishart(prior_df + n, scale, rng, size=m)
        diags = np.sqrt(np.einsum("mii->mi", draws))
        reference += (-draws / (diags[:, :, None] * diags[:, None, :])).sum(axis=0)
        remaining -= m
    reference /= n_reference
    np.fill_diagonal(reference, 1.0)

    degenerate = np.abs(reference) < 1e-12
    np.fill_diagonal(degenerate, False)
    if degenerate.any():
        warnings.warn(
            f"{int(degenerate.sum()) // 2} pair(s) have a near-zero reference "
            "expectation; marked absent"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = rho_mean / reference
    adj = (ratio > 0.5) & ~degenerate
    np.fill_diagonal(adj, False)
    return adj | adj.T
