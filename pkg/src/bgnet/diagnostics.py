"""Chain-mixing diagnostics and wall-clock scaling measurement."""

import time
import warnings
from dataclasses import dataclass

import numpy as np

from .rng import RngStream
from .samplers import BaePrior, _sweep_inplace, init_state

__all__ = [
    "autocorrelations",
    "inefficiency_factor",
    "MixingReport",
    "chain_mixing_report",
    "timing_sweep",
]

DEFAULT_MAX_LAG = 300

# series with variance below this (relative to scale) count as constant
_CONSTANT_TOL = 1e-300


def autocorrelations(series, max_lag):
    """Sample autocorrelations eta(1..max_lag) with the biased (divide-by-N)
    estimator, which keeps high-lag terms stable. Returns None for a
    constant series, where the autocorrelation is undefined."""
    series = np.asarray(series, dtype=float)
    n = series.size
    if n <= max_lag:
        raise ValueError(f"series length {n} must exceed max_lag {max_lag}")
    if max_lag < 1:
        raise ValueError("max_lag must be at least 1")
    x = series - series.mean()
    c0 = float(x @ x) / n
    if not c0 > _CONSTANT_TOL:
        return None
    # FFT autocovariance: pad to avoid circular wraparound
    nfft = 1 << int(np.ceil(np.log2(2 * n)))
    f = np.fft.rfft(x, nfft)
    acov = np.fft.irfft(f * np.conj(f), nfft)[: max_lag + 1] / n
    return acov[1:] / c0


def inefficiency_factor(series, max_lag=DEFAULT_MAX_LAG):
    """1 + 2 * sum of sample autocorrelations up to max_lag.

    Values near 1 indicate near-iid mixing. Not floored: slightly negative
    autocorrelations legitimately push the factor below 1. A constant
    series returns 1 with a warning (autocorrelation undefined).
    """
    eta = autocorrelations(series, max_lag)
    if eta is None:
        warnings.warn("constant series: autocorrelation undefined, factor set to 1")
        return 1.0
    return float(1.0 + 2.0 * eta.sum())


@dataclass
class MixingReport:
    """Per-element inefficiency factors over a trace's triangle layout."""

    p: int
    factors: np.ndarray
    median_of_elements: float
    lags_used: int
    n_constant: int

    def export_rows(self):
        rows = []
        ii, jj = np.triu_indices(self.p)
        for t, (i, j) in enumerate(zip(ii, jj)):
            rows.append({"i": int(i), "j": int(j), "factor": float(self.factors[t])})
        return rows


def chain_mixing_report(trace, max_lag=DEFAULT_MAX_LAG):
    """Inefficiency factor of every omega element in a retained trace.

    Lags are clamped to n_retained - 1 when the trace is short. Constant
    elements are reported as 1 and counted.
    """
    records = trace.records
    n_retained = records.shape[0]
    lags_used = min(max_lag, n_retained - 1)
    if lags_used < 1:
        raise ValueError("trace too short for autocorrelation")
    factors = np.empty(records.shape[1])
    n_constant = 0
    for t in range(records.shape[1]):
        eta = autocorrelations(records[:, t], lags_used)
        if eta is None:
            factors[t] = 1.0
            n_constant += 1
        else:
            factors[t] = 1.0 + 2.0 * eta.sum()
    return MixingReport(
        p=trace.p,
        factors=factors,
        median_of_elements=float(np.median(factors)),
        lags_used=lags_used,
        n_constant=n_constant,
    )


def timing_sweep(p_values, iterations, seed=0):
    """Wall-clock seconds for `iterations` elastic-net sweeps at each p.

    Identity-initialized state, identity scatter matrix, n = 10p
    observations assumed for the gamma shape. Returns a list of
    {"p": p, "seconds": s} rows in the order given.
    """
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    prior = BaePrior()
    rows = []
    for p in p_values:
        p = int(p)
        state = init_state(p, prior)
        S = np.eye(p)
        rng = RngStream(seed)
        n = 10 * p
        # warm the jitted kernel so compilation is not billed to the timing
        _sweep_inplace(init_state(p, prior), S, n, prior, RngStream(seed))
        start = time.perf_counter()
        for i in range(int(iterations)):
            _sweep_inplace(state, S, n, prior, rng, sweep_index=i)
        rows.append({"p": p, "seconds": time.perf_counter() - start})
    return rows
