"""Numba backend for the hot kernels.

Mirrors numpy_impl operation-for-operation (same pivoting, same seeds, same
update order) so the two backends agree to rounding and can be benchmarked
against each other.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_SAFMIN = np.finfo(np.float64).tiny
_EPS = np.finfo(np.float64).eps
_BISECT_ITERS = 72
_INVIT_SWEEPS = 3
# Inverse-iteration right-hand sides start at this norm so that repeated
# near-singular solves amplify into, not past, the double range.
_RHS_SCALE = 1e-30

_LCG_MULT = np.uint64(6364136223846793005)
_LCG_INC = np.uint64(1442695040888963407)
_SEED_GAMMA = np.uint64(0x9E3779B97F4A7C15)


@njit(cache=True)
def _sturm_count(d, e2, x, pivmin):
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    count = 1 if q <= 0.0 else 0
    for i in range(1, d.shape[0]):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q <= 0.0:
            count += 1
    return count


@njit(cache=True)
def _bisect_all(d, e2, gl, gu, pivmin):
    n = d.shape[0]
    w = np.empty(n)
    for k in range(n):
        lo = gl
        hi = gu
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            if _sturm_count(d, e2, mid, pivmin) >= k + 1:
                hi = mid
            else:
                lo = mid
        w[k] = 0.5 * (lo + hi)
    return w


def bisect_eigenvalues(d, e):
    """All eigenvalues of the symmetric tridiagonal (d, e), ascending."""
    n = d.shape[0]
    if n == 1:
        return d.astype(np.float64).copy()
    eps = np.finfo(np.float64).eps
    radius = np.zeros(n)
    radius[:-1] += np.abs(e)
    radius[1:] += np.abs(e)
    gl = float(np.min(d - radius))
    gu = float(np.max(d + radius))
    span = max(gu - gl, 1.0)
    gl -= eps * span
    gu += eps * span
    e2 = e * e
    pivmin = _SAFMIN * max(1.0, float(np.max(e2)))
    return _bisect_all(d, e2, gl, gu, pivmin)


@njit(cache=True)
def _lcg_fill_column(out, col):
    state = np.uint64(col + 1) * _SEED_GAMMA
    for i in range(out.shape[0]):
        state = state * _LCG_MULT + _LCG_INC
        out[i, col] = np.float64(state >> np.uint64(11)) * 2.0**-53 * 2.0 - 1.0


@njit(cache=True)
def _scale_vector(x, target):
    """Rescale x to norm `target`, overflow-safely (max-abs first)."""
    n = x.shape[0]
    amax = 0.0
    for i in range(n):
        if abs(x[i]) > amax:
            amax = abs(x[i])
    if amax > 0.0:
        for i in range(n):
            x[i] /= amax
    nrm = 0.0
    for i in range(n):
        nrm += x[i] * x[i]
    nrm = np.sqrt(nrm)
    if nrm > 0.0:
        for i in range(n):
            x[i] = x[i] * (target / nrm)


@njit(cache=True)
def _invit_column(d, e, lam, pivmin, x):
    """One inverse-iteration pass set for a single shift; x holds the start
    vector on entry and the unnormalized refined vector on exit."""
    n = d.shape[0]
    dd = np.empty(n)
    dl = np.empty(n - 1)
    du = np.empty(n - 1)
    du2 = np.zeros(max(n - 2, 0))
    swap = np.zeros(n - 1, dtype=np.bool_)
    for i in range(n):
        dd[i] = d[i] - lam
    for i in range(n - 1):
        dl[i] = e[i]
        du[i] = e[i]
    for i in range(n - 1):
        if abs(dd[i]) >= abs(dl[i]):
            if abs(dd[i]) < pivmin:
                dd[i] = -pivmin if dd[i] < 0.0 else pivmin
            fact = dl[i] / dd[i]
            dd[i + 1] = dd[i + 1] - fact * du[i]
            if i < n - 2:
                du2[i] = 0.0
            dl[i] = fact
            swap[i] = False
        else:
            fact = dd[i] / dl[i]
            dd[i] = dl[i]
            old_du_i = du[i]
            du[i] = dd[i + 1]
            dd[i + 1] = old_du_i - fact * dd[i + 1]
            if i < n - 2:
                du2[i] = du[i + 1]
                du[i + 1] = -fact * du[i + 1]
            dl[i] = fact
            swap[i] = True
    if abs(dd[n - 1]) < pivmin:
        dd[n - 1] = -pivmin if dd[n - 1] < 0.0 else pivmin

    for _ in range(_INVIT_SWEEPS):
        _scale_vector(x, _RHS_SCALE)
        for i in range(n - 1):
            old_i = x[i]
            old_ip = x[i + 1]
            if swap[i]:
                x[i] = old_ip
                x[i + 1] = old_i - dl[i] * old_ip
            else:
                x[i + 1] = old_ip - dl[i] * old_i
        x[n - 1] = x[n - 1] / dd[n - 1]
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2]
        for i in range(n - 3, -1, -1):
            x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i]
    _scale_vector(x, 1.0)


@njit(cache=True)
def _orthogonalize_clusters(w, v, ctol):
    n = v.shape[0]
    k = w.shape[0]
    start = 0
    for stop in range(1, k + 1):
        if stop < k and w[stop] - w[stop - 1] <= ctol:
            continue
        if stop - start > 1:
            for _ in range(2):
                for j in range(start, stop):
                    for p in range(start, j):
                        dot = 0.0
                        for i in range(n):
                            dot += v[i, p] * v[i, j]
                        for i in range(n):
                            v[i, j] -= dot * v[i, p]
                    nj = 0.0
                    for i in range(n):
                        nj += v[i, j] * v[i, j]
                    nj = np.sqrt(nj)
                    if nj > 0.0:
                        for i in range(n):
                            v[i, j] /= nj
        start = stop


@njit(cache=True)
def _invit_all(d, e, lams, pivmin, ctol):
    n = d.shape[0]
    k = lams.shape[0]
    v = np.empty((n, k))
    for col in range(k):
        _lcg_fill_column(v, col)
    for col in range(k):
        _invit_column(d, e, lams[col], pivmin, v[:, col])
    _orthogonalize_clusters(lams, v, ctol)
    return v


def inverse_iteration(d, e, lams):
    """Unit eigenvectors for the precomputed eigenvalues, columns in order."""
    n = d.shape[0]
    if n == 1:
        return np.ones((1, lams.shape[0]))
    scale = max(float(np.max(np.abs(d))) + 2.0 * float(np.max(np.abs(e))), 1.0)
    # A floor of eps^2 * scale perturbs eigenvectors negligibly while capping
    # the amplification of each near-singular solve at ~1/(eps^2 scale).
    pivmin = _EPS * _EPS * scale
    return _invit_all(d, e, lams, pivmin, 1e-8 * scale)


def tridiag_eigh(d, e):
    """Full eigendecomposition of a symmetric tridiagonal matrix.

    Returns (eigenvalues ascending, eigenvector matrix with unit columns).
    """
    d = np.ascontiguousarray(d, dtype=np.float64)
    e = np.ascontiguousarray(e, dtype=np.float64)
    w = bisect_eigenvalues(d, e)
    if d.shape[0] == 1:
        return w, np.ones((1, 1))
    v = inverse_iteration(d, e, w)
    return w, v


@njit(cache=True)
def _rk4_run(d, e, a, h, steps):
    n = a.shape[0]
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    tmp = np.empty(n, dtype=np.complex128)
    for _ in range(steps):
        _deriv(d, e, a, k1)
        for i in range(n):
            tmp[i] = a[i] + (0.5 * h) * k1[i]
        _deriv(d, e, tmp, k2)
        for i in range(n):
            tmp[i] = a[i] + (0.5 * h) * k2[i]
        _deriv(d, e, tmp, k3)
        for i in range(n):
            tmp[i] = a[i] + h * k3[i]
        _deriv(d, e, tmp, k4)
        for i in range(n):
            a[i] = a[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    return a


@njit(cache=True)
def _deriv(d, e, v, out):
    # two passes, matching the numpy backend's slice order exactly
    n = v.shape[0]
    for i in range(n):
        out[i] = d[i] * v[i]
    for i in range(n - 1):
        out[i] = out[i] + e[i] * v[i + 1]
    for i in range(1, n):
        out[i] = out[i] + e[i - 1] * v[i - 1]
    for i in range(n):
        out[i] = -1j * out[i]


def rk4_evolve(d, e, amps0, t, steps):
    """Integrate da/dt = -i H a with classic fixed-step RK4."""
    a = np.array(amps0, dtype=np.complex128)
    if steps == 0 or t == 0.0:
        return a
    d = np.ascontiguousarray(d, dtype=np.float64)
    e = np.ascontiguousarray(e, dtype=np.float64)
    return _rk4_run(d, e, a, t / steps, steps)
