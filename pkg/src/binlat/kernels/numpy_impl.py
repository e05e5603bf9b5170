"""Pure-numpy backend for the hot kernels.

Same algorithms as the numba backend (Sturm-sequence bisection, inverse
iteration with a partially pivoted tridiagonal LU, fixed-step RK4), with the
per-eigenvalue / per-element loops replaced by vectorized sweeps so the
fallback stays usable at the lattice sizes of interest.
"""

from __future__ import annotations

import numpy as np

_SAFMIN = np.finfo(np.float64).tiny
_EPS = np.finfo(np.float64).eps

# Bisection halves the Gershgorin interval this many times; enough to pin
# every eigenvalue to the last representable bit for any sane scale.
_BISECT_ITERS = 72
_INVIT_SWEEPS = 3
# Inverse-iteration right-hand sides start at this norm so that repeated
# near-singular solves amplify into, not past, the double range.
_RHS_SCALE = 1e-30

# 64-bit LCG used to seed inverse-iteration start vectors deterministically.
_LCG_MULT = np.uint64(6364136223846793005)
_LCG_INC = np.uint64(1442695040888963407)
_SEED_GAMMA = np.uint64(0x9E3779B97F4A7C15)


def _sturm_counts(d, e2, xs, pivmin):
    """Number of eigenvalues below each shift in xs (vectorized over shifts)."""
    q = d[0] - xs
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    counts = (q <= 0.0).astype(np.int64)
    for i in range(1, d.shape[0]):
        q = d[i] - xs - e2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        counts += q <= 0.0
    return counts


def bisect_eigenvalues(d, e):
    """All eigenvalues of the symmetric tridiagonal (d, e), ascending."""
    n = d.shape[0]
    if n == 1:
        return d.astype(np.float64).copy()
    radius = np.zeros(n)
    radius[:-1] += np.abs(e)
    radius[1:] += np.abs(e)
    gl = float(np.min(d - radius))
    gu = float(np.max(d + radius))
    span = max(gu - gl, 1.0)
    gl -= _EPS * span
    gu += _EPS * span
    e2 = e * e
    pivmin = _SAFMIN * max(1.0, float(np.max(e2)) if n > 1 else 1.0)

    lo = np.full(n, gl)
    hi = np.full(n, gu)
    want = np.arange(1, n + 1)  # eigenvalue k is below x once count(x) >= k+1
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        counts = _sturm_counts(d, e2, mid, pivmin)
        above = counts >= want
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return 0.5 * (lo + hi)


def _lcg_start_vectors(n, cols):
    """Deterministic start matrix in [-1, 1); column k depends only on k."""
    state = (np.arange(1, cols + 1, dtype=np.uint64)) * _SEED_GAMMA
    out = np.empty((n, cols))
    for i in range(n):
        state = state * _LCG_MULT + _LCG_INC
        out[i] = (state >> np.uint64(11)).astype(np.float64) * 2.0**-53 * 2.0 - 1.0
    return out


def _scale_columns(v, target):
    """Rescale every column to norm `target`, overflow-safely (max-abs first)."""
    amax = np.max(np.abs(v), axis=0)
    v /= np.where(amax > 0.0, amax, 1.0)
    norms = np.sqrt(np.sum(v * v, axis=0))
    v *= target / np.where(norms > 0.0, norms, 1.0)


def _factor_shifted(d, e, lams, pivmin):
    """Pivoted LU of T - lam*I for every shift in lams (column-wise)."""
    n = d.shape[0]
    k = lams.shape[0]
    dd = d[:, None] - lams[None, :]
    dl = np.broadcast_to(e[:, None], (n - 1, k)).copy()
    du = dl.copy()
    du2 = np.zeros((max(n - 2, 0), k))
    swap = np.zeros((n - 1, k), dtype=bool)
    for i in range(n - 1):
        no_swap = np.abs(dd[i]) >= np.abs(dl[i])
        dd_i = np.where(
            no_swap & (np.abs(dd[i]) < pivmin),
            np.where(dd[i] < 0.0, -pivmin, pivmin),
            dd[i],
        )
        denom = np.where(no_swap, dd_i, dl[i])
        numer = np.where(no_swap, dl[i], dd[i])
        fact = numer / denom
        old_du_i = du[i].copy()
        dd[i] = np.where(no_swap, dd_i, dl[i])
        du[i] = np.where(no_swap, old_du_i, dd[i + 1])
        dd[i + 1] = np.where(no_swap, dd[i + 1] - fact * old_du_i, old_du_i - fact * dd[i + 1])
        if i < n - 2:
            du2[i] = np.where(no_swap, 0.0, du[i + 1])
            du[i + 1] = np.where(no_swap, du[i + 1], -fact * du[i + 1])
        dl[i] = fact
        swap[i] = ~no_swap
    dd[n - 1] = np.where(
        np.abs(dd[n - 1]) < pivmin,
        np.where(dd[n - 1] < 0.0, -pivmin, pivmin),
        dd[n - 1],
    )
    return dd, dl, du, du2, swap


def _solve_factored(x, dd, dl, du, du2, swap):
    """Solve the factored systems in place, one RHS column per shift."""
    n = x.shape[0]
    for i in range(n - 1):
        old_i = x[i].copy()
        old_ip = x[i + 1].copy()
        x[i] = np.where(swap[i], old_ip, old_i)
        x[i + 1] = np.where(swap[i], old_i - dl[i] * old_ip, old_ip - dl[i] * old_i)
    x[n - 1] = x[n - 1] / dd[n - 1]
    if n > 1:
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i]
    return x


def inverse_iteration(d, e, lams):
    """Unit eigenvectors for the precomputed eigenvalues, columns in order.

    Eigenvalues closer than ~1e-8 * scale are treated as one cluster and
    orthogonalized directly; that covers exact degeneracy (e.g. decoupled
    sites), while plain inverse iteration resolves everything wider.
    """
    n = d.shape[0]
    k = lams.shape[0]
    if n == 1:
        return np.ones((1, k))
    scale = max(float(np.max(np.abs(d))) + 2.0 * float(np.max(np.abs(e))), 1.0)
    # A floor of eps^2 * scale perturbs eigenvectors negligibly while capping
    # the amplification of each near-singular solve at ~1/(eps^2 scale).
    pivmin = _EPS * _EPS * scale

    dd, dl, du, du2, swap = _factor_shifted(d, e, lams, pivmin)
    v = _lcg_start_vectors(n, k)
    for _ in range(_INVIT_SWEEPS):
        _scale_columns(v, _RHS_SCALE)
        v = _solve_factored(v, dd, dl, du, du2, swap)
    _scale_columns(v, 1.0)

    ctol = 1e-8 * scale
    start = 0
    for stop in range(1, k + 1):
        if stop < k and lams[stop] - lams[stop - 1] <= ctol:
            continue
        if stop - start > 1:
            for _ in range(2):  # two MGS passes for safety
                for j in range(start, stop):
                    for p in range(start, j):
                        v[:, j] -= (v[:, p] @ v[:, j]) * v[:, p]
                    nj = np.sqrt(v[:, j] @ v[:, j])
                    if nj > 0.0:
                        v[:, j] /= nj
        start = stop
    return v


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


def rk4_evolve(d, e, amps0, t, steps):
    """Integrate da/dt = -i H a with classic fixed-step RK4.

    H is the symmetric tridiagonal (d, e); amps0 is complex and copied.
    """
    a = np.array(amps0, dtype=np.complex128)
    n = a.shape[0]
    if steps == 0 or t == 0.0:
        return a
    h = t / steps

    def deriv(v):
        y = d * v
        if n > 1:
            y[:-1] = y[:-1] + e * v[1:]
            y[1:] = y[1:] + e * v[:-1]
        return -1j * y

    for _ in range(steps):
        k1 = deriv(a)
        k2 = deriv(a + (0.5 * h) * k1)
        k3 = deriv(a + (0.5 * h) * k2)
        k4 = deriv(a + h * k3)
        a = a + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return a
