"""Lattice models: parameter conventions, finite Hamiltonians, dispersion relations.

Two binary lattices are supported, both dimensionless:

* BC: identical waveguides, couplings alternating between g0 + delta and
  g0 - delta.  Here g0 = (g1 + g2)/2 and delta = (g1 - g2)/2, so delta = 0
  recovers the uniform lattice with coupling g0.
* BI: homogeneous unit coupling, on-site term alternating +beta / -beta
  (beta = index contrast over coupling, in units of the coupling).

Finite lattices have N sites indexed 0..N-1 and N-1 couplings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BC = "bc"
BI = "bi"


@dataclass(frozen=True)
class LatticeSpec:
    """Single source of truth for a lattice model.

    sites=None marks an infinite lattice (dispersion / Bloch integrals only).
    """

    kind: str
    sites: int | None = None
    g0: float = 0.0
    delta: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.kind not in (BC, BI):
            raise ValueError(f"lattice kind must be 'bc' or 'bi', got {self.kind!r}")
        if self.sites is not None and self.sites < 2:
            raise ValueError(f"finite lattice needs at least 2 sites, got {self.sites}")
        if self.kind == BC:
            if self.g0 <= 0.0:
                raise ValueError(f"BC lattice requires g0 > 0, got {self.g0}")
            if abs(self.delta) >= self.g0:
                raise ValueError(
                    f"BC lattice requires |delta| < g0 (both couplings positive), "
                    f"got g0={self.g0}, delta={self.delta}"
                )
        else:
            if self.beta < 0.0:
                raise ValueError(f"BI lattice requires beta >= 0, got {self.beta}")

    @classmethod
    def bc(cls, g0: float, delta: float, sites: int | None = None) -> "LatticeSpec":
        return cls(kind=BC, sites=sites, g0=g0, delta=delta)

    @classmethod
    def bc_from_couplings(cls, g1: float, g2: float, sites: int | None = None) -> "LatticeSpec":
        """Build a BC spec from the two physical couplings g1, g2."""
        return cls.bc(g0=(g1 + g2) / 2.0, delta=(g1 - g2) / 2.0, sites=sites)

    @classmethod
    def bi(cls, beta: float, sites: int | None = None) -> "LatticeSpec":
        return cls(kind=BI, sites=sites, beta=beta)

    @property
    def is_finite(self) -> bool:
        return self.sites is not None


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Symmetric tridiagonal Hamiltonian, stored as diagonal + one off-diagonal band."""

    diagonal: np.ndarray    # (N,)
    offdiagonal: np.ndarray  # (N-1,)

    @property
    def size(self) -> int:
        return self.diagonal.shape[0]

    def to_dense(self) -> np.ndarray:
        H = np.diag(self.diagonal)
        H += np.diag(self.offdiagonal, 1) + np.diag(self.offdiagonal, -1)
        return H

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diagonal * v
        out[:-1] = out[:-1] + self.offdiagonal * v[1:]
        out[1:] = out[1:] + self.offdiagonal * v[:-1]
        return out

    def norm_bound(self) -> float:
        """Cheap upper bound on the spectral radius (max Gershgorin row sum)."""
        if self.size == 1:
            return abs(float(self.diagonal[0]))
        r = np.zeros(self.size)
        r[:-1] += np.abs(self.offdiagonal)
        r[1:] += np.abs(self.offdiagonal)
        return float(np.max(np.abs(self.diagonal) + r))


def build_hamiltonian(spec: LatticeSpec) -> HamiltonianMatrix:
    """Tridiagonal Hamiltonian of a finite lattice.

    BI: diagonal[j] = (-1)^j beta, unit couplings.
    BC: zero diagonal, coupling between j and j+1 equal to g0 - (-1)^j delta.
    """
    if not spec.is_finite:
        raise ValueError("infinite lattice has no finite Hamiltonian; use the bloch module")
    N = spec.sites
    signs = np.where(np.arange(N) % 2 == 0, 1.0, -1.0)
    if spec.kind == BI:
        diagonal = spec.beta * signs
        offdiagonal = np.ones(N - 1)
    else:
        diagonal = np.zeros(N)
        offdiagonal = spec.g0 - signs[: N - 1] * spec.delta
    return HamiltonianMatrix(diagonal=diagonal, offdiagonal=offdiagonal)


def dispersion_bc(phi, g0: float, delta: float):
    """Positive branch of the BC dispersion: 2 sqrt(delta^2 + (g0^2 - delta^2) cos^2 phi).

    Accepts a scalar or array phi; |delta| <= g0 is required for a real band.
    """
    if abs(delta) > g0:
        raise ValueError(f"BC dispersion requires |delta| <= g0, got g0={g0}, delta={delta}")
    phi = np.asarray(phi, dtype=float)
    omega = 2.0 * np.sqrt(delta**2 + (g0**2 - delta**2) * np.cos(phi) ** 2)
    return omega if omega.ndim else float(omega)


def dispersion_bi(phi, beta: float):
    """Positive branch of the BI dispersion: sqrt(beta^2 + 4 cos^2 phi)."""
    if beta < 0.0:
        raise ValueError(f"BI dispersion requires beta >= 0, got {beta}")
    phi = np.asarray(phi, dtype=float)
    omega = np.sqrt(beta**2 + 4.0 * np.cos(phi) ** 2)
    return omega if omega.ndim else float(omega)


@dataclass(frozen=True)
class DispersionCurve:
    """Sampled band: omega over a phi grid, for the plus or minus branch."""

    phi: np.ndarray
    omega: np.ndarray
    band: str  # "plus" | "minus"


def dispersion_curves(spec: LatticeSpec, phi: np.ndarray) -> tuple[DispersionCurve, DispersionCurve]:
    """Both dispersion branches of an infinite lattice over a phi grid."""
    phi = np.asarray(phi, dtype=float)
    if spec.kind == BI:
        omega = dispersion_bi(phi, spec.beta)
    else:
        omega = dispersion_bc(phi, spec.g0, spec.delta)
    return (
        DispersionCurve(phi=phi, omega=omega, band="plus"),
        DispersionCurve(phi=phi, omega=-omega, band="minus"),
    )
