"""Spectra and unitary propagators of finite lattice Hamiltonians.

Two independent routes to the same decomposition:

* closed-form spectra built from Fibonacci-polynomial roots, with
  eigenvector components evaluated through the real Morgan-Voyce recurrences
  (analytic_spectrum_bi, analytic_spectrum_alternating_sign);
* an in-repo iterative tridiagonal eigensolver (Sturm-sequence bisection plus
  inverse iteration) that knows nothing about the closed forms
  (numeric_spectrum).

Time evolution comes either from the eigendecomposition,
U(t) = V exp(-i L t) V^T, or from a fixed-step RK4 integration of the
site-amplitude equations (propagate_ode), again deliberately independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from binlat import kernels
from binlat.lattice import BI, HamiltonianMatrix, LatticeSpec, build_hamiltonian

ANALYTIC_BI = "analytic_bi"
ANALYTIC_ALTERNATING = "analytic_alternating_sign"
NUMERIC = "numeric"


class ConvergenceError(RuntimeError):
    """Raised when the iterative eigensolver fails its residual check."""


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (ascending) and orthonormal eigenvectors (one per column)."""

    eigenvalues: np.ndarray   # (N,)
    eigenvectors: np.ndarray  # (N, N), column k belongs to eigenvalues[k]
    provenance: str

    @property
    def size(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass(frozen=True)
class Propagator:
    """Dense unitary U(t) mapping input-site amplitudes to output-site amplitudes."""

    time: float
    matrix: np.ndarray  # (N, N) complex

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def _fix_column_signs(v: np.ndarray) -> np.ndarray:
    """Make the first non-negligible component of every column positive."""
    for k in range(v.shape[1]):
        col = v[:, k]
        thresh = 1e-6 * np.max(np.abs(col))
        for x in col:
            if abs(x) > thresh:
                if x < 0.0:
                    v[:, k] = -col
                break
    return v


def _morgan_voyce_table(x: float, count: int, big: bool) -> np.ndarray:
    """b_0..b_{count-1}(x) (big=False) or B_0..B_{count-1}(x) (big=True)."""
    out = np.empty(count)
    out[0] = 1.0
    if count > 1:
        out[1] = x + 2.0 if big else x + 1.0
        for r in range(2, count):
            out[r] = (x + 2.0) * out[r - 1] - out[r - 2]
    return out


def analytic_spectrum_bi(N: int, beta: float) -> Spectrum:
    """Closed-form spectrum of the finite BI lattice (unit coupling, +/-beta diagonal).

    Eigenvalues are +/- sqrt(beta^2 + 4 cos^2(j pi / (N+1))); the mid-band
    value for odd N is +beta only (the characteristic polynomial carries a
    single (beta - lambda) factor).  Eigenvector components are Morgan-Voyce
    polynomials at -4 cos^2(j pi / (N+1)), evaluated in real arithmetic.
    """
    if N < 2:
        raise ValueError(f"lattice needs at least 2 sites, got {N}")
    if beta < 0.0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    j = np.arange(1, N + 1)
    cos_j = np.cos(j * np.pi / (N + 1))
    mags = np.sqrt(beta**2 + 4.0 * cos_j**2)
    eigenvalues = np.where(j <= N // 2, -mags, mags)

    n_even = (N + 1) // 2   # even sites 0, 2, ...
    n_odd = N // 2          # odd sites 1, 3, ...
    even_signs = np.where(np.arange(n_even) % 2 == 0, 1.0, -1.0)   # (-1)^(k/2)
    odd_signs = np.where(np.arange(n_odd) % 2 == 0, -1.0, 1.0)     # (-1)^((k+1)/2)

    V = np.empty((N, N))
    for idx in range(N):
        lam = eigenvalues[idx]
        x = -4.0 * cos_j[idx] ** 2
        col = np.empty(N)
        col[0::2] = even_signs * _morgan_voyce_table(x, n_even, big=False)
        if n_odd:
            col[1::2] = odd_signs * (beta - lam) * _morgan_voyce_table(x, n_odd, big=True)
        V[:, idx] = col / np.linalg.norm(col)
    _fix_column_signs(V)
    return Spectrum(eigenvalues=eigenvalues, eigenvectors=V, provenance=ANALYTIC_BI)


def alternating_sign_hamiltonian(N: int) -> HamiltonianMatrix:
    """Zero diagonal, couplings -(-1)^j: the pure alternating part of a BC lattice."""
    if N < 2:
        raise ValueError(f"lattice needs at least 2 sites, got {N}")
    signs = np.where(np.arange(N - 1) % 2 == 0, 1.0, -1.0)
    return HamiltonianMatrix(diagonal=np.zeros(N), offdiagonal=-signs)


def analytic_spectrum_alternating_sign(N: int) -> Spectrum:
    """Closed-form spectrum of the alternating-sign coupling matrix.

    The eigenvalues 2 cos(k pi/(N+1)), k = 1..N, are exactly those of the
    uniform chain; the sign alternation only re-gauges the eigenvectors.
    Components come out of the Fibonacci recurrence at imaginary arguments,
    which the Morgan-Voyce split turns into real arithmetic: even site 2r gets
    b_r(-lambda^2), odd site 2r+1 gets -lambda B_r(-lambda^2).
    """
    if N < 2:
        raise ValueError(f"lattice needs at least 2 sites, got {N}")
    k = np.arange(N, 0, -1)
    eigenvalues = 2.0 * np.cos(k * np.pi / (N + 1))

    n_even = (N + 1) // 2
    n_odd = N // 2
    V = np.empty((N, N))
    for idx in range(N):
        lam = eigenvalues[idx]
        x = -lam * lam
        col = np.empty(N)
        col[0::2] = _morgan_voyce_table(x, n_even, big=False)
        if n_odd:
            col[1::2] = -lam * _morgan_voyce_table(x, n_odd, big=True)
        V[:, idx] = col / np.linalg.norm(col)
    _fix_column_signs(V)
    return Spectrum(eigenvalues=eigenvalues, eigenvectors=V, provenance=ANALYTIC_ALTERNATING)


def eigen_residual(H: HamiltonianMatrix, spectrum: Spectrum) -> float:
    """max-abs of H V - V Lambda; the basic correctness certificate."""
    V = spectrum.eigenvectors
    HV = H.diagonal[:, None] * V
    HV[:-1] += H.offdiagonal[:, None] * V[1:]
    HV[1:] += H.offdiagonal[:, None] * V[:-1]
    return float(np.max(np.abs(HV - V * spectrum.eigenvalues[None, :])))


def numeric_spectrum(H: HamiltonianMatrix) -> Spectrum:
    """Eigendecomposition by Sturm bisection + inverse iteration (in-repo solver)."""
    w, V = kernels.tridiag_eigh(H.diagonal, H.offdiagonal)
    _fix_column_signs(V)
    spectrum = Spectrum(eigenvalues=w, eigenvectors=V, provenance=NUMERIC)
    scale = max(H.norm_bound(), 1.0)
    resid = eigen_residual(H, spectrum)
    ortho = float(np.max(np.abs(V.T @ V - np.eye(H.size))))
    # inverted comparison so NaN from a failed solve also trips the check
    if not (resid <= 1e-8 * scale and ortho <= 1e-8):
        raise ConvergenceError(
            f"tridiagonal eigensolver failed: N={H.size}, "
            f"residual={resid:.3e} (scale {scale:.3e}), orthogonality defect={ortho:.3e}"
        )
    return spectrum


def propagator(spectrum: Spectrum, t: float) -> Propagator:
    """U(t) = V exp(-i Lambda t) V^T from a real orthonormal eigensystem."""
    if t < 0.0:
        raise ValueError(f"propagation time must be >= 0, got {t}")
    V = spectrum.eigenvectors
    phases = np.exp(-1j * spectrum.eigenvalues * t)
    return Propagator(time=t, matrix=(V * phases[None, :]) @ V.T)


def propagate_ode(H: HamiltonianMatrix, amps0: np.ndarray, t: float, steps: int) -> np.ndarray:
    """Fixed-step RK4 integration of i da/dt = H a, independent of the spectral route.

    Requires a unit-norm start vector and a step small enough that
    (t/steps) * ||H|| < 0.1.
    """
    amps0 = np.asarray(amps0, dtype=np.complex128)
    if amps0.shape != (H.size,):
        raise ValueError(f"amplitude vector has shape {amps0.shape}, expected ({H.size},)")
    norm = float(np.linalg.norm(amps0))
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"input amplitudes must be unit norm, got ||a|| = {norm}")
    if t < 0.0:
        raise ValueError(f"propagation time must be >= 0, got {t}")
    if t == 0.0:
        return amps0.copy()
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    h_bound = H.norm_bound()
    if (t / steps) * h_bound >= 0.1:
        raise ValueError(
            f"step too large: (t/steps)*||H|| = {(t / steps) * h_bound:.3g} >= 0.1; "
            f"use at least {math.ceil(10.0 * t * h_bound) + 1} steps"
        )
    return kernels.rk4_evolve(H.diagonal, H.offdiagonal, amps0, t, steps)


def min_ode_steps(H: HamiltonianMatrix, t: float, target: float = 0.05) -> int:
    """Smallest step count keeping (t/steps)*||H|| below target."""
    if t == 0.0:
        return 1
    return max(1, math.ceil(t * H.norm_bound() / target))


def commutator_check(N: int, g0: float, delta: float) -> float:
    """max-abs of [g0*(uniform coupling), delta*(alternating-sign coupling)].

    Zero would mean the two pieces of a BC Hamiltonian share eigenvectors and
    could be diagonalized jointly; for N >= 3 the value is strictly positive,
    so the alternating part alone does not capture a general BC lattice.
    """
    if N < 2:
        raise ValueError(f"lattice needs at least 2 sites, got {N}")
    ones = np.ones(N - 1)
    A = g0 * (np.diag(ones, 1) + np.diag(ones, -1))
    alt = delta * alternating_sign_hamiltonian(N).offdiagonal
    B = np.diag(alt, 1) + np.diag(alt, -1)
    return float(np.max(np.abs(A @ B - B @ A)))


def lattice_spectrum(spec: LatticeSpec, analytic: bool = True) -> Spectrum:
    """Spectrum of a finite lattice, preferring the closed form when one exists.

    The closed form covers BI lattices (any beta, including the uniform chain
    at beta = 0); every other case falls back to the numeric solver.
    """
    if not spec.is_finite:
        raise ValueError("infinite lattice has no discrete spectrum; use the bloch module")
    if analytic and spec.kind == BI:
        return analytic_spectrum_bi(spec.sites, spec.beta)
    return numeric_spectrum(build_hamiltonian(spec))
