"""Chain diagnostics: trace persistence, mixing factors, and scaling.

Runs one chain, round-trips its trace through the binary format, and
summarizes per-element inefficiency factors (1 + 2 * sum of
autocorrelations; near 1 means near-iid draws). Then times raw sweep
throughput at two dimensions.
"""

import os
import tempfile

import numpy as np

from bgnet import ChainConfig, RngStream, chain_mixing_report, load_trace, run_chain, save_trace
from bgnet.diagnostics import timing_sweep

data = RngStream(3).generator.standard_normal((100, 10))
config = ChainConfig(burn_in=2000, samples=3000, seed=9)
summary, trace = run_chain(data, config)

with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "trace.bin")
    save_trace(trace, path)
    print(f"trace file: {os.path.getsize(path)} bytes "
          f"({trace.records.shape[0]} draws x {trace.records.shape[1]} elements)")
    trace = load_trace(path)

report = chain_mixing_report(trace, max_lag=200)
print(f"\ninefficiency factors over {report.factors.size} matrix elements "
      f"({report.lags_used} lags):")
print(f"  median {report.median_of_elements:.3f}")
print(f"  worst  {report.factors.max():.3f}")
print(f"  best   {report.factors.min():.3f}")

iterations = 200
rows = timing_sweep((10, 30), iterations, seed=0)
print("\nsweep throughput:")
for row in rows:
    per_sweep_ms = 1000.0 * row["seconds"] / iterations
    print(f"  p={row['p']:3d}: {row['seconds']:.3f}s for {iterations} sweeps "
          f"({per_sweep_ms:.3f} ms/sweep)")
