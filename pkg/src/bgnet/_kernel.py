"""Jitted inner loop of the block Gibbs sweep.

One compiled function advances a full sweep: p column updates followed by
the latent-scale refresh (lasso-type priors only). All random variates are
drawn by the caller with numpy's generator and passed in as arrays, so the
stream layout is owned entirely by Python code; the kernel is deterministic
arithmetic. A nonnegative return value is the index of the column whose
conditional factorization failed; -1 means success.

Prior kinds are encoded as integers: 0 elastic-net, 1 lasso, 2 ridge.
"""

import numpy as np
from numba import njit

KIND_EN = 0
KIND_LASSO = 1
KIND_RIDGE = 2


@njit(cache=True)
def _chol_lower(a, out):
    # Lower Cholesky factor; 1 signals a pivot at/below the 1e-12 floor
    # (the comparison is written so NaN input also fails).
    d = a.shape[0]
    for i in range(d):
        for j in range(i + 1):
            s = a[i, j]
            for k in range(j):
                s -= out[i, k] * out[j, k]
            if i == j:
                if not s > 1e-12:
                    return 1
                out[i, i] = np.sqrt(s)
            else:
                out[i, j] = s / out[j, j]
        for j in range(i + 1, d):
            out[i, j] = 0.0
    return 0


@njit(cache=True)
def _invert_from_chol(chol, out):
    # out = (L L^T)^{-1} from R = L^{-1}: out = R^T R.
    d = chol.shape[0]
    r = np.zeros((d, d))
    for i in range(d):
        r[i, i] = 1.0 / chol[i, i]
        for j in range(i):
            s = 0.0
            for k in range(j, i):
                s += chol[i, k] * r[k, j]
            r[i, j] = -s / chol[i, i]
    for i in range(d):
        for j in range(i + 1):
            s = 0.0
            for k in range(i, d):
                s += r[k, i] * r[k, j]
            out[i, j] = s
            out[j, i] = s


@njit(cache=True)
def sweep(omega, phi, lam, S, dstar, c_diag, gam_raw, z_raw, ig_z, ig_u, kind, literal):
    """Advance omega (and phi for lasso-type kinds) by one full sweep.

    gam_raw holds unit-rate gamma draws of shape n/2+1, one per column;
    z_raw[k] the standard normals for column k's beta; ig_z/ig_u the raw
    normal/uniform pairs for the latent-scale draws in i<j row-major order.
    dstar is the precomputed shrinkage diagonal (depends on kind), c_diag
    the constant added to s_kk in the gamma rate.
    """
    p = omega.shape[0]
    d = p - 1
    omega11 = np.empty((d, d))
    lfac = np.empty((d, d))
    inv11 = np.empty((d, d))
    cinv = np.empty((d, d))
    lc = np.empty((d, d))
    s12 = np.empty(d)
    y = np.empty(d)
    mu = np.empty(d)
    beta = np.empty(d)

    for k in range(p):
        ii = 0
        for i in range(p):
            if i == k:
                continue
            jj = 0
            for j in range(p):
                if j == k:
                    continue
                omega11[ii, jj] = omega[i, j]
                jj += 1
            s12[ii] = S[i, k]
            ii += 1
        if _chol_lower(omega11, lfac) != 0:
            return k
        _invert_from_chol(lfac, inv11)
        c = S[k, k] + c_diag
        if literal:
            src = omega11
        else:
            src = inv11
        for i in range(d):
            for j in range(d):
                cinv[i, j] = c * src[i, j]
        ii = 0
        for i in range(p):
            if i == k:
                continue
            cinv[ii, ii] += dstar[i, k]
            ii += 1
        if _chol_lower(cinv, lc) != 0:
            return k
        # beta ~ N(-C s12, C) with C = cinv^{-1}: mean from two triangular
        # solves, noise from one back-substitution of the factor transpose.
        for i in range(d):
            s = -s12[i]
            for j in range(i):
                s -= lc[i, j] * y[j]
            y[i] = s / lc[i, i]
        for i in range(d - 1, -1, -1):
            s = y[i]
            for j in range(i + 1, d):
                s -= lc[j, i] * mu[j]
            mu[i] = s / lc[i, i]
        for i in range(d - 1, -1, -1):
            s = z_raw[k, i]
            for j in range(i + 1, d):
                s -= lc[j, i] * beta[j]
            beta[i] = s / lc[i, i]
        for i in range(d):
            beta[i] += mu[i]
        quad = 0.0
        for i in range(d):
            s = 0.0
            for j in range(d):
                s += inv11[i, j] * beta[j]
            quad += beta[i] * s
        ii = 0
        for i in range(p):
            if i == k:
                continue
            omega[i, k] = beta[ii]
            omega[k, i] = beta[ii]
            ii += 1
        omega[k, k] = 2.0 * gam_raw[k] / c + quad

    if kind != KIND_RIDGE:
        t = 0
        for i in range(p):
            for j in range(i + 1, p):
                w_abs = abs(omega[i, j])
                lij = lam[i, j]
                if w_abs < 1e-10:
                    mu_ig = 1e10
                else:
                    mu_ig = lij / w_abs
                lam_ig = lij * lij
                nu = ig_z[t] * ig_z[t]
                wv = mu_ig * nu
                if wv == 0.0:
                    x = mu_ig
                else:
                    # stable small root of the inverse-Gaussian transform
                    disc = np.sqrt(wv * (wv + 4.0 * lam_ig))
                    x = 4.0 * lam_ig * mu_ig * wv / ((disc + wv) * (disc + wv))
                if ig_u[t] <= mu_ig / (mu_ig + x):
                    delta = x
                else:
                    delta = mu_ig * mu_ig / max(x, 1e-300)
                if delta < 1e-100:
                    delta = 1e-100
                elif delta > 1e100:
                    delta = 1e100
                val = 1.0 / delta
                phi[i, j] = val
                phi[j, i] = val
                t += 1
    return -1
