"""Symmetric-matrix utilities: partitioning, PD checks, partial correlations.

Conventions used throughout the package:

* matrices are plain float64 ndarrays, symmetric up to round-off;
* indices are 0-based;
* "upper triangle" vectors follow ``np.triu_indices`` row-major order and
  include the diagonal unless noted otherwise.
"""

from collections import namedtuple

import numpy as np

from .errors import NotPositiveDefiniteError

__all__ = [
    "cholesky_factor",
    "is_positive_definite",
    "partition",
    "reassemble",
    "partial_correlations",
    "upper_triangle",
    "from_upper_triangle",
]

# Pivots at or below this floor are treated as numerically non-PD everywhere.
PIVOT_FLOOR = 1e-12

Partition = namedtuple("Partition", ["block11", "vec12", "scalar22"])


def _as_square(m):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def cholesky_factor(m, pivot_floor=PIVOT_FLOOR):
    """Return the lower Cholesky factor of ``m``.

    Positive definiteness is decided by this factorization alone: it must
    succeed and every pivot (squared diagonal entry of the factor) must
    exceed ``pivot_floor``. Raises NotPositiveDefiniteError otherwise.
    """
    m = _as_square(m)
    if not np.all(np.isfinite(m)):
        raise NotPositiveDefiniteError("matrix contains non-finite entries")
    try:
        chol = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from exc
    pivots = np.diag(chol) ** 2
    if np.any(pivots <= pivot_floor):
        raise NotPositiveDefiniteError(
            f"pivot {pivots.min():.3e} at or below floor {pivot_floor:.1e}"
        )
    return chol


def is_positive_definite(m, pivot_floor=PIVOT_FLOOR):
    """True when the Cholesky test of :func:`cholesky_factor` passes."""
    try:
        cholesky_factor(m, pivot_floor)
    except (NotPositiveDefiniteError, ValueError):
        return False
    return True


def partition(m, k):
    """Split a symmetric matrix around column/row ``k`` (0-based).

    Returns a Partition(block11, vec12, scalar22) where block11 drops row
    and column ``k``, vec12 is column ``k`` without its diagonal entry, and
    scalar22 is the diagonal entry itself.
    """
    m = _as_square(m)
    p = m.shape[0]
    k = int(k)
    if not 0 <= k < p:
        raise IndexError(f"column {k} out of range for p={p}")
    keep = np.arange(p) != k
    return Partition(m[np.ix_(keep, keep)], m[keep, k], m[k, k])


def reassemble(part, k):
    """Inverse of :func:`partition`: rebuild the full symmetric matrix."""
    block11, vec12, scalar22 = part
    block11 = _as_square(block11)
    d = block11.shape[0]
    vec12 = np.asarray(vec12, dtype=float)
    if vec12.shape != (d,):
        raise ValueError("vec12 length must match block11 dimension")
    p = d + 1
    k = int(k)
    if not 0 <= k < p:
        raise IndexError(f"column {k} out of range for p={p}")
    out = np.empty((p, p))
    keep = np.arange(p) != k
    out[np.ix_(keep, keep)] = block11
    out[keep, k] = vec12
    out[k, keep] = vec12
    out[k, k] = scalar22
    return out


def partial_correlations(omega):
    """Partial correlation matrix of a positive definite precision matrix.

    rho_ij = -omega_ij / sqrt(omega_ii * omega_jj), with unit diagonal.
    Scale-invariant: rescaling omega by any c > 0 leaves the result fixed.
    """
    omega = _as_square(omega)
    cholesky_factor(omega)  # rejects non-PD input
    d = np.sqrt(np.diag(omega))
    rho = -omega / np.outer(d, d)
    np.fill_diagonal(rho, 1.0)
    return rho


def upper_triangle(m):
    """Upper triangle of a square matrix, diagonal included, row-major."""
    m = _as_square(m)
    iu = np.triu_indices(m.shape[0])
    return m[iu].copy()


def from_upper_triangle(vec, p):
    """Rebuild a symmetric matrix from :func:`upper_triangle` output."""
    vec = np.asarray(vec, dtype=float)
    expected = p * (p + 1) // 2
    if vec.shape != (expected,):
        raise ValueError(f"expected {expected} entries for p={p}, got {vec.shape}")
    out = np.zeros((p, p))
    iu = np.triu_indices(p)
    out[iu] = vec
    out.T[iu] = vec
    return out
