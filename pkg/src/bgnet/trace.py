"""Retained-draw storage and a self-describing on-disk container.

A trace keeps one record per retained sweep: the sweep index plus the
upper triangle (diagonal included, row-major) of omega as float64. On disk
the records follow a JSON header, so a file identifies its own dimensions,
prior, seed, and generator without external context:

    8-byte magic | uint32 header length | header JSON (utf-8) | records

Records are little-endian float64 rows of length 1 + p(p+1)/2, the leading
entry being the sweep index.
"""

import json
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import InputFormatError

__all__ = ["ChainTrace", "save_trace", "load_trace", "trace_partial_correlations"]

_MAGIC = b"BGTRACE1"
_FORMAT_VERSION = 1


@dataclass
class ChainTrace:
    """Retained draws of one chain plus the metadata to reproduce it."""

    p: int
    n: int
    prior_kind: str
    hyperparameters: dict
    seed: int
    chain_index: int
    burn_in: int
    thinning: int
    rng_algorithm: str
    sweep_indices: np.ndarray
    records: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.records = np.ascontiguousarray(self.records, dtype=np.float64)
        self.sweep_indices = np.asarray(self.sweep_indices, dtype=np.int64)
        expected = self.p * (self.p + 1) // 2
        if self.records.ndim != 2 or self.records.shape[1] != expected:
            raise ValueError(
                f"records must be (n_retained, {expected}) for p={self.p}, "
                f"got {self.records.shape}"
            )
        if self.sweep_indices.shape != (self.records.shape[0],):
            raise ValueError("sweep_indices length must match record count")

    @property
    def n_retained(self):
        return self.records.shape[0]

    def header(self):
        return {
            "format": "bgnet-trace",
            "version": _FORMAT_VERSION,
            "p": int(self.p),
            "n": int(self.n),
            "prior_kind": self.prior_kind,
            "hyperparameters": self.hyperparameters,
            "seed": int(self.seed),
            "chain_index": int(self.chain_index),
            "burn_in": int(self.burn_in),
            "thinning": int(self.thinning),
            "rng_algorithm": self.rng_algorithm,
            "n_retained": int(self.n_retained),
        }


def save_trace(trace, path):
    """Write a trace container; deterministic bytes for identical traces."""
    header = json.dumps(trace.header(), sort_keys=True, separators=(",", ":")).encode("utf-8")
    body = np.column_stack(
        [trace.sweep_indices.astype(np.float64), trace.records]
    ).astype("<f8")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        fh.write(body.tobytes())


def load_trace(path):
    """Read a trace container written by :func:`save_trace`."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(_MAGIC) + 4 or blob[: len(_MAGIC)] != _MAGIC:
        raise InputFormatError(f"{path}: not a trace container (bad magic)")
    (header_len,) = struct.unpack_from("<I", blob, len(_MAGIC))
    start = len(_MAGIC) + 4
    if len(blob) < start + header_len:
        raise InputFormatError(f"{path}: truncated header")
    try:
        header = json.loads(blob[start : start + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputFormatError(f"{path}: unreadable header ({exc})") from exc
    for key in ("p", "n", "prior_kind", "n_retained"):
        if key not in header:
            raise InputFormatError(f"{path}: header missing field {key!r}")
    p = int(header["p"])
    n_retained = int(header["n_retained"])
    width = 1 + p * (p + 1) // 2
    payload = blob[start + header_len :]
    expected_bytes = n_retained * width * 8
    if len(payload) != expected_bytes:
        raise InputFormatError(
            f"{path}: expected {expected_bytes} record bytes, found {len(payload)}"
        )
    body = np.frombuffer(payload, dtype="<f8").reshape(n_retained, width)
    return ChainTrace(
        p=p,
        n=int(header["n"]),
        prior_kind=header["prior_kind"],
        hyperparameters=header.get("hyperparameters", {}),
        seed=int(header.get("seed", 0)),
        chain_index=int(header.get("chain_index", 0)),
        burn_in=int(header.get("burn_in", 0)),
        thinning=int(header.get("thinning", 1)),
        rng_algorithm=header.get("rng_algorithm", "unknown"),
        sweep_indices=body[:, 0].astype(np.int64),
        records=body[:, 1:].copy(),
    )


def trace_partial_correlations(trace):
    """Per-draw partial correlations as upper-triangle rows.

    Output matches the record layout: (n_retained, p(p+1)/2) with entries
    rho_ij = -omega_ij / sqrt(omega_ii omega_jj) and ones on the diagonal
    positions.
    """
    p = trace.p
    records = trace.records
    rows, cols = np.triu_indices(p)
    # positions of the diagonal entries inside the triangle layout
    diag_pos = np.flatnonzero(rows == cols)
    diags = records[:, diag_pos]
    denom = np.sqrt(diags[:, rows] * diags[:, cols])
    rho = -records / denom
    rho[:, diag_pos] = 1.0
    return rho
