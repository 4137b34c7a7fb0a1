"""Synthetic benchmark: model generators, losses, classification, harness.

Six two-component precision-matrix topologies, Gaussian data simulation,
the four matrix losses and five edge-classification metrics, and a
replicated experiment runner that scores every estimator on every model
and aggregates medians with standard errors.
"""

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import networkx as nx
import numpy as np
from scipy.linalg import solve_triangular

from .errors import NumericalDegeneracyError
from .matrices import cholesky_factor, is_positive_definite, partial_correlations
from .rng import RngStream
from .samplers import ChainConfig, prior_from_name, run_chain
from .structure import CalibrationModel, threshold_edges

__all__ = [
    "MODEL_IDS",
    "ESTIMATORS",
    "DESK_BURN_IN",
    "DESK_SAMPLES",
    "FULL_BURN_IN",
    "FULL_SAMPLES",
    "ModelSpec",
    "LossReport",
    "ClassificationReport",
    "generate_model",
    "ensure_positive_definite",
    "support_adjacency",
    "simulate_data",
    "loss_report",
    "classification_report",
    "BenchmarkReport",
    "run_benchmark",
]

MODEL_IDS = ("M1", "M2", "M3", "M4", "M5", "M6")
ESTIMATORS = ("bae", "bagl", "bagr")
LOSS_METRICS = ("l1", "l2", "el1", "el2")
CLASS_METRICS = ("se", "sp", "pr", "f1", "ac")

# Desk-scale chain lengths keep replicated runs tractable; the full-length
# protocol stays available behind full_lengths.
DESK_BURN_IN = 2000
DESK_SAMPLES = 4000
FULL_BURN_IN = 5000
FULL_SAMPLES = 10000

# repaired models get a ridge pushing the smallest eigenvalue to this level
_MIN_EIGENVALUE = 0.01
# factor converting a standard deviation into the SE of a sample median
_MEDIAN_SE_FACTOR = 1.2533


@dataclass(frozen=True)
class ModelSpec:
    """One benchmark topology: model family, component (1 or 2), dimension.

    seed only matters for M3, whose random scale-free graph is seeded so the
    truth is reproducible.
    """

    model_id: str
    component: int
    p: int
    seed: int = 0

    def __post_init__(self):
        if self.model_id not in MODEL_IDS:
            raise ValueError(f"model_id must be one of {MODEL_IDS}")
        if self.component not in (1, 2):
            raise ValueError("component must be 1 or 2")
        if self.p < 4:
            raise ValueError("p must be at least 4")
        if self.model_id in ("M4", "M5") and self.p % 2 != 0:
            raise ValueError(f"{self.model_id} needs even p for its two blocks")


def _banded(p, diag, bands):
    out = np.eye(p) * diag
    for offset, value in bands.items():
        idx = np.arange(p - offset)
        out[idx, idx + offset] = value
        out[idx + offset, idx] = value
    return out


def _two_blocks(p, diag, c_first, c_second):
    out = np.eye(p) * diag
    half = p // 2
    out[:half, :half] = c_first
    out[half:, half:] = c_second
    np.fill_diagonal(out, diag)
    return out


def _scale_free(p, seed):
    graph = nx.barabasi_albert_graph(p, 1, seed=seed)
    out = np.zeros((p, p))
    for i, j in graph.edges():
        out[i, j] = 0.5
        out[j, i] = 0.5
    # diagonal dominance: row-wise absolute sum plus a margin
    np.fill_diagonal(out, np.abs(out).sum(axis=1) + 0.1)
    return out


def ensure_positive_definite(omega, min_eigenvalue=_MIN_EIGENVALUE):
    """Return (omega + eps*I, eps) with the smallest eps (possibly 0) that
    lifts the minimum eigenvalue to min_eigenvalue."""
    smallest = float(np.linalg.eigvalsh(omega).min())
    if smallest >= min_eigenvalue:
        return omega, 0.0
    eps = min_eigenvalue - smallest
    return omega + eps * np.eye(omega.shape[0]), eps


def generate_model(spec, return_repair=False):
    """Build the specified true precision matrix.

    M1 exponential-decay bands; M2 two-band; M3 seeded scale-free;
    M4/M5 two constant blocks; M6 circle (band plus linked corners).
    Component 1 is the weaker-signal variant of each pair. Matrices that
    come out non-positive-definite are repaired by the smallest ridge
    lifting the minimum eigenvalue to 0.01; pass return_repair=True to get
    (omega, eps) with the applied ridge size.
    """
    p, comp = spec.p, spec.component
    if spec.model_id == "M1":
        base = 0.7 if comp == 1 else 0.75
        idx = np.arange(p)
        omega = base ** np.abs(idx[:, None] - idx[None, :])
    elif spec.model_id == "M2":
        omega = _banded(p, 1.0, {1: 0.5, 2: 0.25})
        if comp == 1:
            omega = 0.1 * omega
    elif spec.model_id == "M3":
        omega = _scale_free(p, spec.seed)
        if comp == 1:
            omega = 0.5 * omega
    elif spec.model_id == "M4":
        if comp == 1:
            omega = _two_blocks(p, 1.0, 0.2, 0.5)
        else:
            omega = _two_blocks(p, 1.0, 0.7, 0.9)
    elif spec.model_id == "M5":
        if comp == 1:
            omega = _two_blocks(p, 1.0, 0.5, 0.5)
        else:
            omega = _two_blocks(p, 2.0, 1.0, 1.0)
    else:  # M6
        if comp == 1:
            omega = _banded(p, 2.0, {1: 1.0})
            omega[0, p - 1] = omega[p - 1, 0] = 0.45
        else:
            omega = _banded(p, 4.0, {1: 2.0})
            omega[0, p - 1] = omega[p - 1, 0] = 0.95
    omega, eps = ensure_positive_definite(omega)
    if eps > 0.0:
        warnings.warn(
            f"{spec.model_id} component {comp} at p={p} required a ridge "
            f"repair of {eps:.6g} to become positive definite"
        )
    return (omega, eps) if return_repair else omega


def support_adjacency(omega, tol=0.0):
    """True edge set of a precision matrix: nonzero off-diagonal entries."""
    adj = np.abs(np.asarray(omega, dtype=float)) > tol
    np.fill_diagonal(adj, False)
    return adj


def simulate_data(omega, n, rng):
    """n iid rows from N(0, omega^{-1})."""
    omega = np.asarray(omega, dtype=float)
    chol = cholesky_factor(omega)
    p = omega.shape[0]
    z = rng.generator.standard_normal((int(n), p))
    # solve L^T x = z row-wise: covariance of x is (L L^T)^{-1} = omega^{-1}
    return solve_triangular(chol, z.T, lower=True, trans="T").T


@dataclass(frozen=True)
class LossReport:
    """Matrix losses: max-column-absolute-sum (l1), Frobenius (l2), and mean
    absolute / squared differences of ascending-sorted eigenvalues."""

    l1: float
    l2: float
    el1: float
    el2: float

    def as_dict(self):
        return {"l1": self.l1, "l2": self.l2, "el1": self.el1, "el2": self.el2}


def loss_report(estimate, truth):
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if estimate.shape != truth.shape:
        raise ValueError(f"shape mismatch: {estimate.shape} vs {truth.shape}")
    if not np.allclose(estimate, estimate.T) or not np.allclose(truth, truth.T):
        raise ValueError("loss_report expects symmetric matrices")
    diff = estimate - truth
    p = truth.shape[0]
    eig_est = np.sort(np.linalg.eigvalsh(estimate))
    eig_true = np.sort(np.linalg.eigvalsh(truth))
    eig_diff = eig_est - eig_true
    return LossReport(
        l1=float(np.abs(diff).sum(axis=0).max()),
        l2=float(np.linalg.norm(diff, "fro")),
        el1=float(np.abs(eig_diff).sum() / p),
        el2=float((eig_diff**2).sum() / p),
    )


@dataclass(frozen=True)
class ClassificationReport:
    """Edge-recovery metrics over unordered pairs i<j."""

    se: float
    sp: float
    pr: float
    f1: float
    ac: float
    tp: int
    tn: int
    fp: int
    fn: int
    flags: tuple = ()

    def as_dict(self):
        return {"se": self.se, "sp": self.sp, "pr": self.pr, "f1": self.f1, "ac": self.ac}


def classification_report(estimated, truth):
    """Count tp/tn/fp/fn over pairs i<j and derive se, sp, pr, f1, ac.

    Degenerate conventions: an empty truth with an empty estimate scores
    se = pr = f1 = 1; an empty truth with predictions reports se = 0 and a
    flag. Vacuous denominators elsewhere resolve to the perfect score.
    """
    estimated = np.asarray(estimated, dtype=bool)
    truth = np.asarray(truth, dtype=bool)
    if estimated.shape != truth.shape:
        raise ValueError(f"shape mismatch: {estimated.shape} vs {truth.shape}")
    iu = np.triu_indices(truth.shape[0], k=1)
    est = estimated[iu]
    tru = truth[iu]
    tp = int(np.sum(est & tru))
    tn = int(np.sum(~est & ~tru))
    fp = int(np.sum(est & ~tru))
    fn = int(np.sum(~est & tru))

    flags = []
    if tp + fn == 0:  # no true edges
        if fp == 0:
            se, pr, f1 = 1.0, 1.0, 1.0
        else:
            se, pr, f1 = 0.0, 0.0, 0.0
            flags.append("sensitivity-undefined")
    else:
        se = tp / (tp + fn)
        if tp + fp == 0:
            pr = 0.0
            flags.append("no-predictions")
        else:
            pr = tp / (tp + fp)
        f1 = 2.0 * tp / (2 * tp + fp + fn)
    sp = 1.0 if tn + fp == 0 else tn / (tn + fp)
    return ClassificationReport(
        se=se, sp=sp, pr=pr, f1=f1, ac=(se + sp) / 2.0,
        tp=tp, tn=tn, fp=fp, fn=fn, flags=tuple(flags),
    )


def _median_se(values, bootstrap=False, rng=None, n_boot=1000):
    values = np.asarray(values, dtype=float)
    r = values.size
    if r < 2:
        return float("nan")
    if bootstrap:
        idx = rng.generator.integers(0, r, size=(n_boot, r))
        return float(np.median(values[idx], axis=1).std(ddof=1))
    return float(_MEDIAN_SE_FACTOR * values.std(ddof=1) / math.sqrt(r))


def _chain_lengths(full_lengths, burn_in, samples):
    if burn_in is None:
        burn_in = FULL_BURN_IN if full_lengths else DESK_BURN_IN
    if samples is None:
        samples = FULL_SAMPLES if full_lengths else DESK_SAMPLES
    return burn_in, samples


def _benchmark_task(args):
    """Score one (model, p, replication): all estimators, both components.

    Stream allocation, all derived from the master seed: data for component
    c of task t uses chain_index 2t+c in a dedicated high range; the chain
    for estimator e / component c uses chain_index 6t + 2e + c.
    """
    (task_idx, model_id, p, rep, estimators, psi, seed,
     burn_in, samples, thinning) = args
    n = 10 * p
    rows = []
    for comp in (1, 2):
        truth, repair_eps = generate_model(
            ModelSpec(model_id, comp, p, seed=seed), return_repair=True
        )
        data_rng = RngStream(seed, chain_index=1_000_000_000 + 2 * task_idx + (comp - 1))
        data = simulate_data(truth, n, data_rng)
        truth_adj = support_adjacency(truth)
        for est_idx, estimator in enumerate(estimators):
            row = {
                "model": model_id, "p": p, "replication": rep,
                "estimator": estimator, "component": comp,
                "repair_eps": repair_eps, "error": None,
            }
            try:
                if estimator == "oracle":
                    omega_mean = truth
                    rho_mean = partial_correlations(truth)
                else:
                    config = ChainConfig(
                        prior=prior_from_name(estimator),
                        burn_in=burn_in, samples=samples, thinning=thinning,
                        seed=seed,
                        chain_index=6 * task_idx + 2 * est_idx + (comp - 1),
                    )
                    summary, _ = run_chain(data, config)
                    omega_mean = summary.omega_mean
                    rho_mean = summary.rho_mean
                losses = loss_report(omega_mean, truth)
                cls = classification_report(threshold_edges(rho_mean, psi), truth_adj)
                row.update(losses.as_dict())
                row.update(cls.as_dict())
            except NumericalDegeneracyError as exc:
                row["error"] = str(exc)
                for metric in LOSS_METRICS + CLASS_METRICS:
                    row[metric] = float("nan")
            rows.append(row)
    return rows


@dataclass
class BenchmarkReport:
    """Raw per-replication rows plus the aggregated median/SE table."""

    rows: list
    aggregate: list
    config: dict

    def failed(self):
        return [r for r in self.rows if r["error"] is not None]

    def cell(self, model, p, estimator, metric, component=2):
        """Aggregated (median, se) for one table cell."""
        for row in self.aggregate:
            if (
                row["model"] == model and row["p"] == p
                and row["estimator"] == estimator and row["metric"] == metric
                and row["component"] == component
            ):
                return row["median"], row["se"]
        raise KeyError(f"no aggregate cell for {(model, p, estimator, metric, component)}")

    def to_csv_string(self):
        header = "model,p,estimator,component,metric,median,se,replications"
        lines = [header]
        for row in self.aggregate:
            lines.append(
                f"{row['model']},{row['p']},{row['estimator']},{row['component']},"
                f"{row['metric']},{row['median']:.10g},{row['se']:.10g},"
                f"{row['replications']}"
            )
        return "\n".join(lines) + "\n"

    def to_json_obj(self):
        tables = {}
        for row in self.aggregate:
            tables.setdefault(row["model"], {}).setdefault(f"p{row['p']}", {}).setdefault(
                row["estimator"], {}
            ).setdefault(f"component{row['component']}", {})[row["metric"]] = {
                "median": row["median"],
                "se": row["se"],
            }
        return {
            "config": self.config,
            "tables": tables,
            "failed_replications": self.failed(),
        }


def run_benchmark(
    model_ids=MODEL_IDS,
    p_values=(10,),
    replications=50,
    estimators=ESTIMATORS,
    psi=0.12,
    parallelism=1,
    seed=0,
    burn_in=None,
    samples=None,
    thinning=1,
    full_lengths=False,
    bootstrap_se=False,
):
    """Replicated benchmark over models x dimensions x estimators.

    Per replication and component, simulate n = 10p observations from the
    true model, estimate with every requested estimator, and score the four
    losses plus edge classification at threshold psi. Aggregates the median
    and its standard error across replications. Failed replications are
    recorded in the rows rather than dropped. Deterministic for a fixed
    master seed regardless of parallelism.
    """
    burn_in, samples = _chain_lengths(full_lengths, burn_in, samples)
    for m in model_ids:
        if m not in MODEL_IDS:
            raise ValueError(f"unknown model {m!r}")
    for e in estimators:
        if e not in ESTIMATORS + ("oracle",):
            raise ValueError(f"unknown estimator {e!r}")
    tasks = []
    task_idx = 0
    for model_id in model_ids:
        for p in p_values:
            for rep in range(replications):
                tasks.append(
                    (task_idx, model_id, int(p), rep, tuple(estimators), float(psi),
                     int(seed), int(burn_in), int(samples), int(thinning))
                )
                task_idx += 1

    if parallelism > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            chunks = list(pool.map(_benchmark_task, tasks, chunksize=1))
    else:
        chunks = [_benchmark_task(t) for t in tasks]
    rows = [row for chunk in chunks for row in chunk]

    se_rng = RngStream(seed, chain_index=2_000_000_000)
    aggregate = []
    for model_id in model_ids:
        for p in p_values:
            for estimator in estimators:
                for comp in (1, 2):
                    group = [
                        r for r in rows
                        if r["model"] == model_id and r["p"] == p
                        and r["estimator"] == estimator and r["component"] == comp
                        and r["error"] is None
                    ]
                    for metric in LOSS_METRICS + CLASS_METRICS:
                        values = np.array([r[metric] for r in group], dtype=float)
                        aggregate.append(
                            {
                                "model": model_id, "p": int(p), "estimator": estimator,
                                "component": comp, "metric": metric,
                                "median": float(np.median(values)) if values.size else float("nan"),
                                "se": _median_se(values, bootstrap=bootstrap_se, rng=se_rng),
                                "replications": int(values.size),
                            }
                        )

    config = {
        "model_ids": list(model_ids), "p_values": [int(v) for v in p_values],
        "replications": int(replications), "estimators": list(estimators),
        "psi": float(psi), "parallelism": int(parallelism), "seed": int(seed),
        "burn_in": int(burn_in), "samples": int(samples), "thinning": int(thinning),
        "full_lengths": bool(full_lengths), "bootstrap_se": bool(bootstrap_se),
    }
    return BenchmarkReport(rows=rows, aggregate=aggregate, config=config)


def calibration_cases(
    model_ids=MODEL_IDS,
    p=10,
    estimator="bae",
    seed=0,
    burn_in=None,
    samples=None,
    thinning=1,
    full_lengths=False,
    component=1,
):
    """One estimated CalibrationModel per benchmark topology.

    Simulates n = 10p observations from each model's component-`component`
    truth, runs one chain, and packages (truth, omega_mean, rho_mean) for
    calibrate_psi.
    """
    burn_in, samples = _chain_lengths(full_lengths, burn_in, samples)
    prior = prior_from_name(estimator)
    cases = []
    for idx, model_id in enumerate(model_ids):
        truth = generate_model(ModelSpec(model_id, component, int(p), seed=seed))
        data_rng = RngStream(seed, chain_index=3_000_000_000 + idx)
        data = simulate_data(truth, 10 * int(p), data_rng)
        config = ChainConfig(
            prior=prior, burn_in=burn_in, samples=samples, thinning=thinning,
            seed=seed, chain_index=3_100_000_000 + idx,
        )
        summary, _ = run_chain(data, config)
        cases.append(
            CalibrationModel(
                truth_omega=truth,
                omega_mean=summary.omega_mean,
                rho_mean=summary.rho_mean,
                label=model_id,
            )
        )
    return cases
