"""Command-line interface.

Subcommands: estimate, diffnet, benchmark, calibrate, diagnose, timing.
Settings resolve as flags > config file (JSON) > built-in defaults; the
resolved configuration is echoed into every output file so a run can be
reproduced from its own artifacts. Output files carry no timestamps
(timestamps go to the run.log sidecar only), so reruns with the same seed
are byte-identical.

Exit codes: 0 success, 2 parse error, 3 shape/data error, 4 numerical
degeneracy, 5 I/O error.
"""

import csv
import datetime
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import click
import numpy as np

from . import __version__
from .bench import calibration_cases, run_benchmark
from .diagnostics import chain_mixing_report, timing_sweep
from .diffnet import differential_network
from .errors import InputFormatError, NumericalDegeneracyError
from .samplers import ChainConfig, prior_from_name, run_chain
from .structure import calibrate_psi, threshold_edges
from .trace import load_trace, save_trace

EXIT_PARSE = 2
EXIT_SHAPE = 3
EXIT_NUMERIC = 4
EXIT_IO = 5

PARALLELISM_ENV = "BGNET_PARALLELISM"

_DEFAULTS = {
    "seed": 0,
    "burn_in": 5000,
    "samples": 10000,
    "thin": 1,
    "prior": "bae",
    "psi": 0.12,
    "parallelism": None,  # env var, else 1
    "out_dir": ".",
}


def _fail(message, code):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(body):
    """Run a command body, mapping exceptions onto the exit-code partition."""
    try:
        body()
    except click.ClickException:
        raise
    except InputFormatError as exc:
        _fail(str(exc), EXIT_PARSE)
    except NumericalDegeneracyError as exc:
        _fail(str(exc), EXIT_NUMERIC)
    except (ValueError, IndexError, KeyError) as exc:
        _fail(str(exc), EXIT_SHAPE)
    except OSError as exc:
        _fail(str(exc), EXIT_IO)


def _shared_options(fn):
    opts = [
        click.option("--seed", type=int, default=None, help="Master seed."),
        click.option("--burn-in", type=int, default=None, help="Discarded sweeps."),
        click.option("--samples", type=int, default=None, help="Retained draws."),
        click.option("--thin", type=int, default=None, help="Keep every k-th sweep."),
        click.option("--prior", type=click.Choice(["bae", "bagl", "bagr"]), default=None,
                      help="Shrinkage prior kind."),
        click.option("--psi", type=float, default=None, help="Edge threshold on |rho|."),
        click.option("--parallelism", type=int, default=None,
                      help=f"Worker processes (default ${PARALLELISM_ENV} or 1)."),
        click.option("--out-dir", type=str, default=None, help="Output directory."),
        click.option("--config", "config_path", type=str, default=None,
                      help="JSON config file; flags override its entries."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _resolve(params, config_path):
    """flags > config file > defaults. Returns the fully resolved dict."""
    resolved = dict(_DEFAULTS)
    if config_path is not None:
        try:
            with open(config_path, "r", encoding="utf-8") as fh:
                loaded = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputFormatError(f"{config_path}: invalid JSON config ({exc})")
        if not isinstance(loaded, dict):
            raise InputFormatError(f"{config_path}: config must be a JSON object")
        for key, value in loaded.items():
            if key not in resolved:
                raise InputFormatError(f"{config_path}: unknown config key {key!r}")
            resolved[key] = value
    for key, value in params.items():
        if key in resolved and value is not None:
            resolved[key] = value
    if resolved["parallelism"] is None:
        env = os.environ.get(PARALLELISM_ENV)
        resolved["parallelism"] = int(env) if env else 1
    return resolved


def _chain_config(resolved, chain_index=0):
    return ChainConfig(
        prior=prior_from_name(resolved["prior"]),
        burn_in=int(resolved["burn_in"]),
        samples=int(resolved["samples"]),
        thinning=int(resolved["thin"]),
        seed=int(resolved["seed"]),
        chain_index=chain_index,
    )


def read_matrix_csv(path, standardize=False):
    """Parse a numeric CSV into an n x p array.

    UTF-8, comma-separated, decimal point; a single header row is
    auto-detected when the first line has any non-numeric cell. Parse
    failures name the offending row and column (1-based as seen in the
    file). Columns are always mean-centered downstream; standardize=True
    additionally rescales columns to unit variance here.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except UnicodeDecodeError as exc:
        raise InputFormatError(f"{path}: not UTF-8 text ({exc})")
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows:
        raise InputFormatError(f"{path}: empty file")

    def _parse_row(cells, row_number):
        out = []
        for c, cell in enumerate(cells):
            try:
                out.append(float(cell))
            except ValueError:
                raise InputFormatError(
                    f"{path}: cannot parse cell at row {row_number}, "
                    f"column {c + 1}: {cell.strip()!r}"
                )
        return out

    def _is_numeric_row(cells):
        try:
            for cell in cells:
                float(cell)
        except ValueError:
            return False
        return True

    start = 0 if _is_numeric_row(rows[0]) else 1
    if start == 1 and len(rows) == 1:
        _parse_row(rows[0], 1)  # raises with the offending cell named
    data = []
    width = None
    for r, cells in enumerate(rows[start:], start=start + 1):
        parsed = _parse_row(cells, r)
        if width is None:
            width = len(parsed)
        elif len(parsed) != width:
            raise InputFormatError(
                f"{path}: row {r} has {len(parsed)} cells, expected {width}"
            )
        data.append(parsed)
    matrix = np.asarray(data, dtype=float)
    if matrix.shape[0] < 2:
        raise ValueError(f"{path}: need at least 2 data rows, found {matrix.shape[0]}")
    if standardize:
        sd = matrix.std(axis=0, ddof=1)
        if np.any(sd == 0):
            raise ValueError(f"{path}: constant column cannot be standardized")
        matrix = (matrix - matrix.mean(axis=0)) / sd
    return matrix


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _write_tsv(path, header, rows):
    buf = io.StringIO()
    buf.write("\t".join(header) + "\n")
    for row in rows:
        buf.write("\t".join(row) + "\n")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(buf.getvalue())


def _fmt(x):
    return f"{x:.10g}"


def _edge_rows(summary, edges):
    rows = []
    p = summary.p
    for i in range(p):
        for j in range(i + 1, p):
            rows.append(
                (
                    str(i), str(j),
                    _fmt(summary.rho_mean[i, j]),
                    _fmt(summary.omega_mean[i, j]),
                    "1" if edges[i, j] else "0",
                )
            )
    return rows


def _prepare_out_dir(resolved, argv_line):
    out_dir = resolved["out_dir"]
    os.makedirs(out_dir, exist_ok=True)
    # the sidecar log is the only artifact carrying a timestamp
    with open(os.path.join(out_dir, "run.log"), "a", encoding="utf-8") as fh:
        stamp = datetime.datetime.now().isoformat(timespec="seconds")
        fh.write(f"{stamp} {argv_line}\n")
    return out_dir


def _meta(resolved, extra=None):
    obj = {"tool": "bgnet", "version": __version__, "config": resolved}
    if extra:
        obj.update(extra)
    return obj


@click.group()
@click.version_option(version=__version__, prog_name="bgnet")
def main():
    """Bayesian graphical model estimation and differential networks."""


@main.command()
@click.argument("csv_path", type=str)
@_shared_options
@click.option("--standardize", is_flag=True, help="Scale columns to unit variance.")
@click.option("--no-trace", is_flag=True, help="Skip writing trace.bin.")
def estimate(csv_path, config_path, standardize, no_trace, **params):
    """Estimate a precision matrix from one cohort CSV."""

    def body():
        resolved = _resolve(params, config_path)
        resolved["standardize"] = bool(standardize)
        out_dir = _prepare_out_dir(resolved, f"estimate {csv_path}")
        data = read_matrix_csv(csv_path, standardize=standardize)
        summary, trace = run_chain(data, _chain_config(resolved))
        edges = threshold_edges(summary.rho_mean, resolved["psi"])
        _write_json(
            os.path.join(out_dir, "summary.json"),
            _meta(resolved, {"summary": summary.to_dict()}),
        )
        if not no_trace:
            save_trace(trace, os.path.join(out_dir, "trace.bin"))
        _write_tsv(
            os.path.join(out_dir, "edges.tsv"),
            ("i", "j", "rho_mean", "omega_mean", "present"),
            _edge_rows(summary, edges),
        )
        click.echo(f"estimate: wrote summary.json, edges.tsv in {out_dir}")

    _guarded(body)


def _run_chain_task(args):
    data, config = args
    summary, _ = run_chain(data, config)
    return summary


@main.command()
@click.argument("csv_a", type=str)
@click.argument("csv_b", type=str)
@_shared_options
@click.option("--standardize", is_flag=True, help="Scale columns to unit variance.")
def diffnet(csv_a, csv_b, config_path, standardize, **params):
    """Differential network between two cohort CSVs (B minus A)."""

    def body():
        resolved = _resolve(params, config_path)
        resolved["standardize"] = bool(standardize)
        out_dir = _prepare_out_dir(resolved, f"diffnet {csv_a} {csv_b}")
        data_a = read_matrix_csv(csv_a, standardize=standardize)
        data_b = read_matrix_csv(csv_b, standardize=standardize)
        if data_a.shape[1] != data_b.shape[1]:
            raise ValueError(
                f"cohorts disagree on p: {data_a.shape[1]} vs {data_b.shape[1]}"
            )
        tasks = [
            (data_a, _chain_config(resolved, chain_index=0)),
            (data_b, _chain_config(resolved, chain_index=1)),
        ]
        if resolved["parallelism"] > 1:
            with ProcessPoolExecutor(max_workers=2) as pool:
                summary_a, summary_b = list(pool.map(_run_chain_task, tasks))
        else:
            summary_a, summary_b = [_run_chain_task(t) for t in tasks]
        network = differential_network(summary_a, summary_b, resolved["psi"])
        payload = {
            "p": summary_a.p,
            "n_a": summary_a.n,
            "n_b": summary_b.n,
            "psi_used": network.psi_used,
            "delta": network.delta.tolist(),
            "rho1": network.rho1.tolist(),
            "rho2": network.rho2.tolist(),
            "n_differential_edges": network.n_differential(),
        }
        _write_json(
            os.path.join(out_dir, "diffnet.json"), _meta(resolved, {"diffnet": payload})
        )
        rows = []
        p = summary_a.p
        for i in range(p):
            for j in range(i + 1, p):
                present = network.differential_edges[i, j]
                rows.append(
                    (
                        str(i), str(j),
                        _fmt(network.rho1[i, j]),
                        _fmt(network.rho2[i, j]),
                        _fmt(network.delta[i, j]),
                        "1" if present else "0",
                        network.edge_class(i, j) or "",
                    )
                )
        _write_tsv(
            os.path.join(out_dir, "delta_edges.tsv"),
            ("i", "j", "rho1", "rho2", "delta", "present", "class"),
            rows,
        )
        click.echo(
            f"diffnet: {network.n_differential()} differential edge(s); "
            f"wrote diffnet.json, delta_edges.tsv in {out_dir}"
        )

    _guarded(body)


@main.command()
@_shared_options
@click.option("--models", default="M1,M2,M3,M4,M5,M6", help="Comma-separated model ids.")
@click.option("--p-values", default="10", help="Comma-separated dimensions.")
@click.option("--replications", type=int, default=50, show_default=True)
@click.option("--estimators", default="bae,bagl,bagr", help="Comma-separated estimators.")
@click.option("--full-lengths", is_flag=True,
              help="Full-length chains instead of the desk-scale default.")
def benchmark(config_path, models, p_values, replications, estimators,
              full_lengths, **params):
    """Replicated synthetic benchmark over the six model topologies."""

    def body():
        resolved = _resolve(params, config_path)
        resolved.update(
            {
                "models": models, "p_values": p_values,
                "replications": replications, "estimators": estimators,
                "full_lengths": bool(full_lengths),
            }
        )
        out_dir = _prepare_out_dir(resolved, "benchmark")
        report = run_benchmark(
            model_ids=tuple(m.strip() for m in models.split(",") if m.strip()),
            p_values=tuple(int(v) for v in p_values.split(",") if v.strip()),
            replications=replications,
            estimators=tuple(e.strip() for e in estimators.split(",") if e.strip()),
            psi=resolved["psi"],
            parallelism=resolved["parallelism"],
            seed=resolved["seed"],
            thinning=resolved["thin"],
            full_lengths=full_lengths,
        )
        with open(os.path.join(out_dir, "tables.csv"), "w", encoding="utf-8") as fh:
            fh.write(report.to_csv_string())
        _write_json(
            os.path.join(out_dir, "tables.json"),
            _meta(resolved, {"report": report.to_json_obj()}),
        )
        failed = len(report.failed())
        click.echo(
            f"benchmark: wrote tables.csv, tables.json in {out_dir}"
            + (f" ({failed} failed replication rows)" if failed else "")
        )

    _guarded(body)


@main.command()
@_shared_options
@click.option("--models", default="M1,M2,M3,M4,M5,M6", help="Comma-separated model ids.")
@click.option("--p", "p_dim", type=int, default=10, show_default=True)
@click.option("--full-lengths", is_flag=True,
              help="Full-length chains instead of the desk-scale default.")
def calibrate(config_path, models, p_dim, full_lengths, **params):
    """Calibrate the edge threshold psi over synthetic models."""

    def body():
        resolved = _resolve(params, config_path)
        resolved.update({"models": models, "p": p_dim, "full_lengths": bool(full_lengths)})
        out_dir = _prepare_out_dir(resolved, "calibrate")
        cases = calibration_cases(
            model_ids=tuple(m.strip() for m in models.split(",") if m.strip()),
            p=p_dim,
            estimator=resolved["prior"],
            seed=resolved["seed"],
            thinning=resolved["thin"],
            full_lengths=full_lengths,
        )
        sweep = calibrate_psi(cases)
        with open(os.path.join(out_dir, "sweep.csv"), "w", encoding="utf-8") as fh:
            fh.write("threshold,model,f1,l1\n")
            for row in sweep.export_rows():
                fh.write(
                    f"{row['threshold']:.3f},{row['model']},"
                    f"{row['f1']:.10g},{row['l1']:.10g}\n"
                )
        _write_json(
            os.path.join(out_dir, "psi.json"),
            _meta(
                resolved,
                {
                    "psi": sweep.psi,
                    "psi_f1_median": sweep.psi_f1_median,
                    "psi_l1_median": sweep.psi_l1_median,
                    "excluded_models": list(sweep.excluded),
                },
            ),
        )
        click.echo(f"calibrate: psi = {sweep.psi:.4f}; wrote sweep.csv, psi.json in {out_dir}")

    _guarded(body)


@main.command()
@click.argument("trace_path", type=str)
@_shared_options
@click.option("--max-lag", type=int, default=300, show_default=True)
def diagnose(trace_path, config_path, max_lag, **params):
    """Mixing report (inefficiency factors) for a saved trace."""

    def body():
        resolved = _resolve(params, config_path)
        resolved["max_lag"] = max_lag
        out_dir = _prepare_out_dir(resolved, f"diagnose {trace_path}")
        trace = load_trace(trace_path)
        report = chain_mixing_report(trace, max_lag=max_lag)
        with open(os.path.join(out_dir, "mixing.csv"), "w", encoding="utf-8") as fh:
            fh.write("i,j,factor\n")
            for row in report.export_rows():
                fh.write(f"{row['i']},{row['j']},{row['factor']:.10g}\n")
        click.echo(
            f"diagnose: median inefficiency factor {report.median_of_elements:.4f} "
            f"over {report.factors.size} elements ({report.lags_used} lags); "
            f"wrote mixing.csv in {out_dir}"
        )

    _guarded(body)


@main.command()
@_shared_options
@click.option("--p-values", default="10,30,50,75", help="Comma-separated dimensions.")
@click.option("--iterations", type=int, default=1000, show_default=True)
def timing(config_path, p_values, iterations, **params):
    """Wall-clock scaling of the elastic-net sweep across dimensions."""

    def body():
        resolved = _resolve(params, config_path)
        resolved.update({"p_values": p_values, "iterations": iterations})
        out_dir = _prepare_out_dir(resolved, "timing")
        rows = timing_sweep(
            tuple(int(v) for v in p_values.split(",") if v.strip()),
            iterations,
            seed=resolved["seed"],
        )
        with open(os.path.join(out_dir, "timing.csv"), "w", encoding="utf-8") as fh:
            fh.write("p,seconds\n")
            for row in rows:
                fh.write(f"{row['p']},{row['seconds']:.6f}\n")
        for row in rows:
            click.echo(f"timing: p={row['p']} {row['seconds']:.3f}s for {iterations} sweeps")
        click.echo(f"timing: wrote timing.csv in {out_dir}")

    _guarded(body)


if __name__ == "__main__":
    main()
