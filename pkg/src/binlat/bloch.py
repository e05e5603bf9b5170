"""Impulse responses of infinite lattices by Brillouin-zone quadrature.

E_j^(m)(z) is the field amplitude at site j after distance z for a unit
input at site m, obtained as a zone integral over Bloch phase phi with the
composite trapezoid rule.  The integrands are smooth and 2*pi-periodic, so
the rule converges spectrally; an empirical node-count rule guards against
undersampling the e^{i(j-m)phi} * oscillatory-kernel product.

Conventions.  Amplitudes follow the classical field equations (evolution
e^{+iHz}); the finite-lattice quantum propagator e^{-iHt} is the complex
conjugate, which is what finite_vs_infinite_check accounts for.  Both band
branches (+/- Omega) enter the kernel; the on-site term of the BI lattice
enters with the parity of the site it acts on, so sources on either
sublattice are handled.
"""

from __future__ import annotations

import functools
import math
import warnings

import numpy as np

from binlat.lattice import BC, BI, LatticeSpec, build_hamiltonian
from binlat.spectral import numeric_spectrum


class AccuracyWarning(UserWarning):
    """Quadrature was asked to run below the empirical node-count rule."""


def required_nodes(j: int, m: int, z: float) -> int:
    """Empirical minimum node count for site offset j-m and distance z."""
    need = 8.0 * (abs(j - m) + 2.0 * z)
    n = max(64, int(math.ceil(need)))
    return n + (n % 2)


def _check_nodes(j: int, m: int, z: float, nodes: int) -> None:
    if nodes < 64 or nodes % 2:
        raise ValueError(f"nodes must be even and >= 64, got {nodes}")
    need = required_nodes(j, m, z)
    if nodes < need:
        warnings.warn(
            f"{nodes} quadrature nodes is below the rule-of-thumb {need} "
            f"for |j-m|={abs(j - m)}, z={z}; result may be inaccurate",
            AccuracyWarning,
            stacklevel=3,
        )


def _phi_grid(nodes: int) -> np.ndarray:
    return -np.pi + 2.0 * np.pi * np.arange(nodes) / nodes


def infinite_amplitude_bi(j: int, m: int, z: float, beta: float, nodes: int = 512) -> complex:
    """Amplitude E_j^(m)(z) on the infinite BI lattice.

    Kernel: cos(Omega z) + i (2 cos phi + (-1)^j beta) sin(Omega z)/Omega with
    Omega = sqrt(beta^2 + 4 cos^2 phi).  The (-1)^j carries the sublattice on
    which the on-site detuning acts; for even source sites it reduces to the
    e^{i pi (m-j)} form.  At beta = 0 the removable Omega = 0 point is
    extended continuously by sin(Omega z)/Omega -> z.
    """
    if z < 0.0:
        raise ValueError(f"z must be >= 0, got {z}")
    # negative beta is accepted: it describes the same lattice with the two
    # sublattices swapped, which the parity factors track correctly
    _check_nodes(j, m, z, nodes)
    phi = _phi_grid(nodes)
    omega = np.sqrt(beta**2 + 4.0 * np.cos(phi) ** 2)
    safe = np.where(omega > 1e-12, omega, 1.0)
    s = np.where(omega > 1e-12, np.sin(omega * z) / safe, z)
    sign_j = -1.0 if j % 2 else 1.0
    kernel = np.cos(omega * z) + 1j * (2.0 * np.cos(phi) + sign_j * beta) * s
    return complex(np.mean(np.exp(1j * (j - m) * phi) * kernel))


def infinite_amplitude_bc(
    j: int, m: int, z: float, g0: float, delta: float, nodes: int = 512
) -> complex:
    """Amplitude E_j^(m)(z) on the infinite BC lattice.

    With w(phi) = g0 cos phi + i delta sin phi and Omega = 2|w|, the kernel is
    cos(Omega z) for equal site parities and i e^{-/+ i theta} sin(Omega z)
    for (j even, m odd) / (j odd, m even), where e^{i theta} = w/|w| is the
    square-root branch taken continuously around the zone.
    """
    if z < 0.0:
        raise ValueError(f"z must be >= 0, got {z}")
    if abs(delta) >= g0:
        raise ValueError(f"BC lattice requires |delta| < g0, got g0={g0}, delta={delta}")
    _check_nodes(j, m, z, nodes)
    phi = _phi_grid(nodes)
    w = g0 * np.cos(phi) + 1j * delta * np.sin(phi)
    aw = np.abs(w)
    omega = 2.0 * aw
    if (j - m) % 2 == 0:
        kernel = np.cos(omega * z).astype(np.complex128)
    else:
        branch = np.where(aw > 1e-300, w / np.where(aw > 1e-300, aw, 1.0), 0.0)
        if j % 2 == 0:  # j even, m odd
            branch = np.conj(branch)
        kernel = 1j * branch * np.sin(omega * z)
    return complex(np.mean(np.exp(1j * (m - j) * phi) * kernel))


def infinite_amplitude(spec: LatticeSpec, j: int, m: int, z: float, nodes: int = 512) -> complex:
    """Dispatch on the lattice kind of an infinite spec."""
    if spec.is_finite:
        raise ValueError("expected an infinite lattice spec")
    if spec.kind == BI:
        return infinite_amplitude_bi(j, m, z, spec.beta, nodes)
    return infinite_amplitude_bc(j, m, z, spec.g0, spec.delta, nodes)


def impulse_response_table(
    spec: LatticeSpec, m: int, js: np.ndarray, zs: np.ndarray, nodes: int = 512
) -> np.ndarray:
    """E_j^(m)(z) for a site range and z grid, shape (len(zs), len(js))."""
    js = np.asarray(js, dtype=int)
    zs = np.asarray(zs, dtype=float)
    out = np.empty((zs.shape[0], js.shape[0]), dtype=np.complex128)
    for iz, z in enumerate(zs):
        for ij, j in enumerate(js):
            out[iz, ij] = infinite_amplitude(spec, int(j), m, float(z), nodes)
    return out


@functools.lru_cache(maxsize=8)
def _cached_spectrum(kind: str, g0: float, delta: float, beta: float, sites: int):
    spec = LatticeSpec(kind=kind, sites=sites, g0=g0, delta=delta, beta=beta)
    return numeric_spectrum(build_hamiltonian(spec))


def finite_vs_infinite_check(
    j: int, m: int, z: float, spec: LatticeSpec, N_large: int
) -> float:
    """|E_infinite - finite-lattice amplitude| deep in the bulk of a large lattice.

    The infinite sites (j, m) are mapped onto the finite lattice with an even
    offset (sublattice parity preserved) around its middle.  The finite side
    uses the classical propagator, conj(e^{-iHz}); for BC the finite matrix is
    built with the coupling alternation of the infinite-lattice field
    equations, i.e. delta -> -delta relative to build_hamiltonian's pattern.
    """
    if z < 0.0:
        raise ValueError(f"z must be >= 0, got {z}")
    offset = (N_large // 2) & ~1
    j_f, m_f = j + offset, m + offset
    margin = int(math.ceil(2.0 * z + 20.0))
    if min(j_f, m_f) < margin or max(j_f, m_f) > N_large - 1 - margin:
        raise ValueError(
            f"sites {j}, {m} map to {j_f}, {m_f}: closer than {margin} sites to an "
            f"edge of the N={N_large} lattice; edge reflections would contaminate"
        )
    if spec.kind == BI:
        spectrum = _cached_spectrum(BI, 0.0, 0.0, spec.beta, N_large)
    else:
        spectrum = _cached_spectrum(BC, spec.g0, -spec.delta, 0.0, N_large)
    w = spectrum.eigenvalues
    V = spectrum.eigenvectors
    finite_amp = np.conj(np.sum(V[j_f] * np.exp(-1j * w * z) * V[m_f]))

    nodes = max(512, 2 * required_nodes(j, m, z))
    infinite_amp = infinite_amplitude(spec, j, m, z, nodes)
    return float(abs(infinite_amp - finite_amp))
