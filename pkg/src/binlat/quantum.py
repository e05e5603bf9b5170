"""Input states and transport observables.

All observables are expressed through the propagator with the convention
U[out, in]: the amplitude reaching site q from site p is U[q, p], matching
a(t) = U(t) a(0).

Input states cover single photons in a site basis or in Gaussian-like /
Poisson-like superpositions, multi-photon Fock inputs on one site,
two-photon product states, and two-site NOON states.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from binlat.spectral import Propagator, Spectrum


@dataclass(frozen=True)
class FockSingleSite:
    """m photons entering one waveguide."""

    site: int
    photons: int = 1

    def __post_init__(self):
        if self.photons < 1:
            raise ValueError(f"photon number must be >= 1, got {self.photons}")
        if self.site < 0:
            raise ValueError(f"site must be >= 0, got {self.site}")


@dataclass(frozen=True)
class SinglePhotonSuperposition:
    """One photon spread over the lattice with unit-norm amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-8:
            raise ValueError(f"superposition amplitudes must be unit norm, got {norm}")
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class GaussianLike:
    """Gaussian envelope of width w0 with transverse momentum q, centred on the lattice."""

    w0: float
    q: float = 0.0

    def __post_init__(self):
        if self.w0 <= 0.0:
            raise ValueError(f"width must be > 0, got {self.w0}")


@dataclass(frozen=True)
class PoissonLike:
    """Coherent-state-like weights alpha^j / sqrt(j!) over the sites."""

    alpha: complex


@dataclass(frozen=True)
class ProductTwoPhoton:
    """One photon in each of two distinct waveguides."""

    site_a: int
    site_b: int

    def __post_init__(self):
        if self.site_a == self.site_b:
            raise ValueError("product state needs two distinct sites")


@dataclass(frozen=True)
class Noon:
    """(|m,0> + e^{i m phase} |0,m>)/sqrt(2) across two waveguides."""

    site_a: int
    site_b: int
    photons: int = 2
    phase: float = 0.0

    def __post_init__(self):
        if self.site_a == self.site_b:
            raise ValueError("NOON state needs two distinct sites")
        if self.photons < 2:
            raise ValueError(f"NOON photon number must be >= 2, got {self.photons}")


InputState = (
    FockSingleSite
    | SinglePhotonSuperposition
    | GaussianLike
    | PoissonLike
    | ProductTwoPhoton
    | Noon
)


def make_gaussian_state(N: int, w0: float, q: float = 0.0) -> np.ndarray:
    """Unit-norm amplitudes exp(-k^2/(2 w0^2) + i q k / 2), k = j - N//2."""
    if N < 3:
        raise ValueError(f"Gaussian input needs at least 3 sites, got {N}")
    if w0 <= 0.0:
        raise ValueError(f"width must be > 0, got {w0}")
    k = np.arange(N, dtype=float) - (N // 2)
    amps = np.exp(-(k**2) / (2.0 * w0**2) + 0.5j * q * k)
    return amps / np.linalg.norm(amps)


def make_poisson_state(N: int, alpha: complex) -> np.ndarray:
    """Unit-norm amplitudes proportional to alpha^j / sqrt(j!), j = 0..N-1.

    Weights are accumulated in log space, so large |alpha| cannot overflow.
    Warns when the truncation at N sites cuts off more than 1e-6 of the
    untruncated distribution.
    """
    if N < 2:
        raise ValueError(f"Poisson input needs at least 2 sites, got {N}")
    alpha = complex(alpha)
    a2 = abs(alpha) ** 2
    if alpha == 0:
        amps = np.zeros(N, dtype=np.complex128)
        amps[0] = 1.0
        return amps
    j = np.arange(N, dtype=float)
    log_mag = j * math.log(abs(alpha)) - 0.5 * np.array([math.lgamma(x + 1.0) for x in j])
    log_mag -= np.max(log_mag)
    amps = np.exp(log_mag + 1j * j * np.angle(alpha))

    tail = _poisson_tail(a2, N)
    if tail > 1e-6:
        warnings.warn(
            f"Poisson input truncated at N={N} loses weight {tail:.3g} "
            f"(|alpha|^2 = {a2:.3g}); increase the lattice size",
            stacklevel=2,
        )
    return amps / np.linalg.norm(amps)


def _poisson_tail(lam: float, start: int) -> float:
    """P(X >= start) for X ~ Poisson(lam), by direct log-space summation."""
    if lam == 0.0:
        return 0.0
    total = 0.0
    log_p = start * math.log(lam) - lam - math.lgamma(start + 1.0)
    p = math.exp(log_p)
    k = start
    while p > 1e-18 * (1.0 + total) or k < start + 10:
        total += p
        k += 1
        p *= lam / k
        if k > start + 10_000:
            break
    return total


def materialize(state: InputState, N: int) -> InputState:
    """Turn parameterized single-photon distributions into explicit amplitude vectors."""
    if isinstance(state, GaussianLike):
        return SinglePhotonSuperposition(make_gaussian_state(N, state.w0, state.q))
    if isinstance(state, PoissonLike):
        return SinglePhotonSuperposition(make_poisson_state(N, state.alpha))
    return state


def total_photons(state: InputState) -> int:
    if isinstance(state, FockSingleSite):
        return state.photons
    if isinstance(state, (ProductTwoPhoton,)):
        return 2
    if isinstance(state, Noon):
        return state.photons
    return 1


def _check_sites(state: InputState, N: int) -> None:
    sites = []
    if isinstance(state, FockSingleSite):
        sites = [state.site]
    elif isinstance(state, (ProductTwoPhoton, Noon)):
        sites = [state.site_a, state.site_b]
    elif isinstance(state, SinglePhotonSuperposition):
        if state.amplitudes.shape[0] != N:
            raise ValueError(
                f"superposition has {state.amplitudes.shape[0]} amplitudes for an N={N} lattice"
            )
    for s in sites:
        if not 0 <= s < N:
            raise ValueError(f"site {s} outside lattice of {N} sites")


def mean_photon_numbers(U: Propagator, state: InputState) -> np.ndarray:
    """Mean photon number per waveguide after propagation.

    Fock{p, m}: m |U[q, p]|^2.  Superpositions: |sum_j alpha_j U[q, j]|^2.
    Product{j, k}: |U[q, j]|^2 + |U[q, k]|^2.  NOON: (m/2) of the same sum.
    """
    N = U.size
    state = materialize(state, N)
    _check_sites(state, N)
    M = U.matrix
    if isinstance(state, FockSingleSite):
        return state.photons * np.abs(M[:, state.site]) ** 2
    if isinstance(state, SinglePhotonSuperposition):
        return np.abs(M @ state.amplitudes) ** 2
    if isinstance(state, ProductTwoPhoton):
        return np.abs(M[:, state.site_a]) ** 2 + np.abs(M[:, state.site_b]) ** 2
    if isinstance(state, Noon):
        return (state.photons / 2.0) * (
            np.abs(M[:, state.site_a]) ** 2 + np.abs(M[:, state.site_b]) ** 2
        )
    raise TypeError(f"unsupported input state {type(state).__name__}")


def fidelity(U: Propagator, state: np.ndarray) -> float:
    """|<psi(0)|psi(t)>|^2 for a unit-norm single-photon amplitude vector."""
    state = np.asarray(state, dtype=np.complex128)
    norm = float(np.linalg.norm(state))
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"state must be unit norm, got {norm}")
    overlap = np.vdot(state, U.matrix @ state)
    return float(abs(overlap) ** 2)


def state_fidelity(U: Propagator, state: InputState) -> float:
    """|<psi(0)|psi(t)>|^2 for any supported input state.

    Multi-photon overlaps reduce to powers and 2x2 permanents of propagator
    entries; single-photon states fall back to the plain fidelity.
    """
    N = U.size
    state = materialize(state, N)
    _check_sites(state, N)
    M = U.matrix
    if isinstance(state, FockSingleSite):
        return float(abs(M[state.site, state.site]) ** (2 * state.photons))
    if isinstance(state, SinglePhotonSuperposition):
        return fidelity(U, state.amplitudes)
    if isinstance(state, ProductTwoPhoton):
        a, b = state.site_a, state.site_b
        overlap = M[a, a] * M[b, b] + M[a, b] * M[b, a]
        return float(abs(overlap) ** 2)
    if isinstance(state, Noon):
        a, b, m = state.site_a, state.site_b, state.photons
        ph = np.exp(1j * m * state.phase)
        overlap = 0.5 * (
            M[a, a] ** m + ph * M[a, b] ** m + np.conj(ph) * M[b, a] ** m + M[b, b] ** m
        )
        return float(abs(overlap) ** 2)
    raise TypeError(f"unsupported input state {type(state).__name__}")


def center_of_mass(mean_photons: np.ndarray) -> float:
    """Photon-number-weighted mean site index."""
    mean_photons = np.asarray(mean_photons, dtype=float)
    total = float(np.sum(mean_photons))
    if total <= 0.0:
        raise ValueError("center of mass of an all-zero distribution is undefined")
    sites = np.arange(mean_photons.shape[0], dtype=float)
    return float(np.sum(sites * mean_photons) / total)


def two_photon_correlation(U: Propagator, state: ProductTwoPhoton | Noon) -> np.ndarray:
    """Joint detection matrix Gamma[p, q] for two-photon inputs.

    Product: |U[p,j] U[q,k] + U[p,k] U[q,j]|^2.
    NOON:    |U[p,j] U[q,j]|^2 + |U[p,k] U[q,k]|^2
             + 2 Re(e^{i m phase} U*[p,j] U*[q,j] U[p,k] U[q,k]).
    """
    N = U.size
    _check_sites(state, N)
    M = U.matrix
    a = M[:, state.site_a]
    b = M[:, state.site_b]
    if isinstance(state, ProductTwoPhoton):
        amp = np.outer(a, b) + np.outer(b, a)
        return np.abs(amp) ** 2
    if isinstance(state, Noon):
        xa = np.outer(a, a)
        xb = np.outer(b, b)
        ph = np.exp(1j * state.photons * state.phase)
        gamma = np.abs(xa) ** 2 + np.abs(xb) ** 2 + 2.0 * np.real(ph * np.conj(xa) * xb)
        return gamma
    raise TypeError(f"two-photon correlation needs a product or NOON input, got {type(state).__name__}")


@dataclass(frozen=True)
class ObservableSeries:
    """Per-sample observables over a time grid, ready for file emission."""

    times: np.ndarray
    mean_photons: np.ndarray    # (T, N)
    fidelity: np.ndarray        # (T,)
    center_of_mass: np.ndarray  # (T,)
    input_label: str = field(default="", compare=False)


def _input_columns(state: InputState, N: int) -> np.ndarray:
    """Basis/superposition columns whose evolution determines every observable."""
    if isinstance(state, FockSingleSite):
        cols = np.zeros((N, 1), dtype=np.complex128)
        cols[state.site, 0] = 1.0
        return cols
    if isinstance(state, SinglePhotonSuperposition):
        return state.amplitudes[:, None]
    cols = np.zeros((N, 2), dtype=np.complex128)
    cols[state.site_a, 0] = 1.0
    cols[state.site_b, 1] = 1.0
    return cols


def observable_sweep(spectrum: Spectrum, state: InputState, times: np.ndarray) -> ObservableSeries:
    """Mean photon numbers, fidelity and centre of mass over a time grid.

    Evolves only the input-relevant propagator columns through the
    eigenbasis, so a sweep costs O(T N^2) rather than T full matrix builds.
    """
    N = spectrum.size
    state = materialize(state, N)
    _check_sites(state, N)
    times = np.asarray(times, dtype=float)
    V = spectrum.eigenvectors
    cols = _input_columns(state, N)
    coeffs = V.T @ cols  # (N, r)

    mean = np.empty((times.shape[0], N))
    fid = np.empty(times.shape[0])
    com = np.empty(times.shape[0])
    for it, t in enumerate(times):
        phases = np.exp(-1j * spectrum.eigenvalues * t)
        evolved = V @ (phases[:, None] * coeffs)  # columns of U(t) restricted to inputs
        if isinstance(state, FockSingleSite):
            p = state.photons * np.abs(evolved[:, 0]) ** 2
            fid[it] = abs(evolved[state.site, 0]) ** (2 * state.photons)
        elif isinstance(state, SinglePhotonSuperposition):
            p = np.abs(evolved[:, 0]) ** 2
            fid[it] = abs(np.vdot(state.amplitudes, evolved[:, 0])) ** 2
        elif isinstance(state, ProductTwoPhoton):
            p = np.abs(evolved[:, 0]) ** 2 + np.abs(evolved[:, 1]) ** 2
            a, b = state.site_a, state.site_b
            fid[it] = abs(evolved[a, 0] * evolved[b, 1] + evolved[b, 0] * evolved[a, 1]) ** 2
        elif isinstance(state, Noon):
            p = (state.photons / 2.0) * (np.abs(evolved[:, 0]) ** 2 + np.abs(evolved[:, 1]) ** 2)
            a, b, m = state.site_a, state.site_b, state.photons
            ph = np.exp(1j * m * state.phase)
            overlap = 0.5 * (
                evolved[a, 0] ** m
                + ph * evolved[a, 1] ** m
                + np.conj(ph) * evolved[b, 0] ** m
                + evolved[b, 1] ** m
            )
            fid[it] = abs(overlap) ** 2
        else:
            raise TypeError(f"unsupported input state {type(state).__name__}")
        mean[it] = p
        com[it] = center_of_mass(p)
    return ObservableSeries(
        times=times,
        mean_photons=mean,
        fidelity=fid,
        center_of_mass=com,
        input_label=type(state).__name__,
    )
