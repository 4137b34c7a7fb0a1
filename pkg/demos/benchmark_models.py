"""Small replicated benchmark across estimators.

Runs a few replications of the simulate-estimate-score loop on two of
the synthetic topologies and prints the aggregated median/SE table.
Full-scale runs (50 replications, all six models) are the same call
with bigger arguments, or `bgnet benchmark` from the shell.
"""

import time

from bgnet import run_benchmark

t0 = time.time()
report = run_benchmark(
    model_ids=("M2", "M6"),
    p_values=(10,),
    replications=5,
    estimators=("bae", "bagl", "bagr"),
    seed=1,
)
print(f"ran {len(report.rows)} replication rows in {time.time() - t0:.0f}s")
if report.failed():
    print(f"failed replications: {len(report.failed())}")

print("\naggregate table (component 2, selected metrics):")
print(f"{'model':6s} {'estimator':9s} {'L1':>8s} {'F1':>8s} {'SE':>6s} {'SP':>6s}")
for model in ("M2", "M6"):
    for est in ("bae", "bagl", "bagr"):
        l1, l1_se = report.cell(model, 10, est, "l1")
        f1, _ = report.cell(model, 10, est, "f1")
        se, _ = report.cell(model, 10, est, "se")
        sp, _ = report.cell(model, 10, est, "sp")
        print(
            f"{model:6s} {est:9s} {l1:8.3f} {f1:8.3f} {se:6.2f} {sp:6.2f}"
            f"   (L1 se {l1_se:.3f})"
        )

print("\nfull CSV layout, first lines:")
print("\n".join(report.to_csv_string().splitlines()[:4]))
