"""Two-cohort differential networks.

Each cohort's precision matrix is estimated independently; the differential
network is the elementwise difference delta = omega_mean_2 - omega_mean_1
together with a per-edge classification. An edge is differential when it is
present in exactly one cohort, or present in both with a partial-correlation
change larger than the threshold.
"""

from dataclasses import dataclass

import numpy as np

from .samplers import run_chain
from .structure import threshold_edges

__all__ = [
    "DifferentialNetwork",
    "estimate_component",
    "differential_network",
]

# class labels for delta edge lists
CLASS_GAINED = "gained"
CLASS_LOST = "lost"
CLASS_STRENGTHENED = "strengthened"


@dataclass
class DifferentialNetwork:
    """delta = omega_mean_2 - omega_mean_1 plus per-cohort edge sets."""

    delta: np.ndarray
    rho1: np.ndarray
    rho2: np.ndarray
    edges1: np.ndarray
    edges2: np.ndarray
    differential_edges: np.ndarray
    psi_used: float

    def edge_class(self, i, j):
        """Classification of a differential edge; None when not differential."""
        if not self.differential_edges[i, j]:
            return None
        if self.edges1[i, j] and self.edges2[i, j]:
            return CLASS_STRENGTHENED
        return CLASS_GAINED if self.edges2[i, j] else CLASS_LOST

    def n_differential(self):
        iu = np.triu_indices(self.delta.shape[0], k=1)
        return int(self.differential_edges[iu].sum())


def estimate_component(data, config):
    """Estimate one cohort's precision matrix; returns the chain summary."""
    summary, _ = run_chain(data, config)
    return summary


def differential_network(summary1, summary2, psi):
    """Form the differential network of two cohort summaries.

    Swapping the arguments negates delta exactly and leaves the
    differential edge set unchanged.
    """
    if summary1.p != summary2.p:
        raise ValueError(f"cohort dimensions differ: {summary1.p} vs {summary2.p}")
    delta = summary2.omega_mean - summary1.omega_mean
    edges1 = threshold_edges(summary1.rho_mean, psi)
    edges2 = threshold_edges(summary2.rho_mean, psi)
    shared_change = (
        edges1 & edges2 & (np.abs(summary2.rho_mean - summary1.rho_mean) > psi)
    )
    differential = (edges1 ^ edges2) | shared_change
    np.fill_diagonal(differential, False)
    return DifferentialNetwork(
        delta=delta,
        rho1=summary1.rho_mean,
        rho2=summary2.rho_mean,
        edges1=edges1,
        edges2=edges2,
        differential_edges=differential,
        psi_used=float(psi),
    )
