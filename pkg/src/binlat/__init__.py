"""Binary photonic lattice simulator.

Simulates classical light propagation and quantum photon transport in
one-dimensional waveguide arrays whose unit cell alternates either the
nearest-neighbour coupling (BC lattice) or the on-site refractive index
(BI lattice).  Finite lattices are diagonalized both in closed form
(Fibonacci / Morgan-Voyce polynomials) and with an in-repo tridiagonal
eigensolver; infinite lattices are handled by Brillouin-zone quadrature.
"""

from binlat.lattice import LatticeSpec, HamiltonianMatrix, build_hamiltonian, dispersion_bc, dispersion_bi
from binlat.spectral import (
    Spectrum,
    Propagator,
    analytic_spectrum_bi,
    analytic_spectrum_alternating_sign,
    numeric_spectrum,
    propagator,
    propagate_ode,
    commutator_check,
)

__version__ = "0.1.0"

__all__ = [
    "LatticeSpec",
    "HamiltonianMatrix",
    "build_hamiltonian",
    "dispersion_bc",
    "dispersion_bi",
    "Spectrum",
    "Propagator",
    "analytic_spectrum_bi",
    "analytic_spectrum_alternating_sign",
    "numeric_spectrum",
    "propagator",
    "propagate_ode",
    "commutator_check",
    "__version__",
]
