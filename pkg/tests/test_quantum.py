import numpy as np
import pytest

from binlat.lattice import LatticeSpec
from binlat.quantum import (
    FockSingleSite,
    GaussianLike,
    Noon,
    PoissonLike,
    ProductTwoPhoton,
    SinglePhotonSuperposition,
    center_of_mass,
    fidelity,
    make_gaussian_state,
    make_poisson_state,
    materialize,
    mean_photon_numbers,
    observable_sweep,
    state_fidelity,
    total_photons,
    two_photon_correlation,
)
from binlat.spectral import analytic_spectrum_bi, lattice_spectrum, propagator


def _uniform_two_site(t):
    return propagator(analytic_spectrum_bi(2, 0.0), t)


def test_gaussian_state_shape():
    amps = make_gaussian_state(101, 7.0, 0.0)
    assert np.linalg.norm(amps) == pytest.approx(1.0, abs=1e-12)
    mags = np.abs(amps)
    assert np.argmax(mags) == 50
    assert np.allclose(mags, mags[::-1], atol=1e-15)
    # |amp(center +- w0)| / |amp(center)| = exp(-1/2)
    assert mags[57] / mags[50] == pytest.approx(np.exp(-0.5), abs=1e-12)
    assert mags[43] / mags[50] == pytest.approx(np.exp(-0.5), abs=1e-12)


def test_gaussian_magnitudes_ignore_tilt():
    flat = np.abs(make_gaussian_state(31, 4.0, 0.0))
    tilted = np.abs(make_gaussian_state(31, 4.0, 0.55 * np.pi))
    assert np.allclose(flat, tilted, atol=1e-14)


def test_gaussian_rejects_bad_args():
    with pytest.raises(ValueError):
        make_gaussian_state(2, 1.0)
    with pytest.raises(ValueError):
        make_gaussian_state(11, 0.0)


def test_poisson_state_mode():
    amps = make_poisson_state(101, np.sqrt(50.0))
    assert np.linalg.norm(amps) == pytest.approx(1.0, abs=1e-12)
    probs = np.abs(amps) ** 2
    # consecutive Poisson weights cross unity at j = |alpha|^2: the mode sits
    # at 49/50 (equal weights for integer |alpha|^2)
    assert np.argmax(probs) in (49, 50)
    assert probs[49] == pytest.approx(probs[50], rel=1e-10)


def test_poisson_trivial_and_truncation():
    amps = make_poisson_state(11, 0.0)
    assert amps[0] == 1.0
    assert np.all(amps[1:] == 0.0)
    with pytest.warns(UserWarning):
        make_poisson_state(10, np.sqrt(50.0))  # heavy truncation loss


def test_poisson_complex_alpha_phases():
    alpha = 2.0 * np.exp(0.3j)
    amps = make_poisson_state(40, alpha)
    # phase of amplitude j advances like j * arg(alpha)
    ratios = amps[1:6] / amps[0:5]
    assert np.allclose(np.angle(ratios), 0.3, atol=1e-12)


def test_materialize():
    state = materialize(GaussianLike(w0=3.0, q=0.1), 21)
    assert isinstance(state, SinglePhotonSuperposition)
    assert state.amplitudes.shape == (21,)
    fock = FockSingleSite(site=2, photons=3)
    assert materialize(fock, 21) is fock


def test_mean_photons_at_zero_time():
    U = propagator(analytic_spectrum_bi(7, 0.5), 0.0)
    n = mean_photon_numbers(U, FockSingleSite(site=3, photons=4))
    expect = np.zeros(7)
    expect[3] = 4.0
    assert np.allclose(n, expect, atol=1e-14)


def test_mean_photons_conservation():
    U = propagator(analytic_spectrum_bi(11, 0.5), 3.7)
    cases = [
        (FockSingleSite(site=2, photons=3), 3.0),
        (SinglePhotonSuperposition(make_gaussian_state(11, 2.0, 0.2)), 1.0),
        (ProductTwoPhoton(site_a=1, site_b=6), 2.0),
        (Noon(site_a=1, site_b=6, photons=5, phase=0.4), 5.0),
        (GaussianLike(w0=2.0, q=0.0), 1.0),
        (PoissonLike(alpha=1.2), 1.0),
    ]
    for state, total in cases:
        n = mean_photon_numbers(U, state)
        assert total_photons(materialize(state, 11)) == total
        assert np.sum(n) == pytest.approx(total, abs=1e-10)
        assert np.all(n >= -1e-15)


def test_mean_photons_two_site_closed_form():
    U = _uniform_two_site(np.pi / 4)
    n = mean_photon_numbers(U, FockSingleSite(site=0))
    assert np.allclose(n, [0.5, 0.5], atol=1e-12)


def test_fock_single_photon_matches_classical_intensity():
    U = propagator(analytic_spectrum_bi(9, 0.5), 2.2)
    n = mean_photon_numbers(U, FockSingleSite(site=4, photons=1))
    assert np.allclose(n, np.abs(U.matrix[:, 4]) ** 2, atol=1e-14)


def test_fidelity_basics():
    s = analytic_spectrum_bi(5, 0.5)
    state = make_gaussian_state(5, 1.0, 0.0)
    assert fidelity(propagator(s, 0.0), state) == pytest.approx(1.0, abs=1e-12)
    for t in (0.3, 2.0, 11.0):
        assert fidelity(propagator(s, t), state) <= 1.0 + 1e-12
    U = _uniform_two_site(np.pi / 2)
    assert fidelity(U, np.array([1.0, 0.0])) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        fidelity(U, np.array([1.0, 1.0]))  # not unit norm


def test_state_fidelity_multiphoton():
    U0 = propagator(analytic_spectrum_bi(6, 0.5), 0.0)
    assert state_fidelity(U0, FockSingleSite(site=2, photons=3)) == pytest.approx(1.0, abs=1e-12)
    assert state_fidelity(U0, ProductTwoPhoton(0, 3)) == pytest.approx(1.0, abs=1e-12)
    assert state_fidelity(U0, Noon(0, 3, photons=2, phase=0.7)) == pytest.approx(1.0, abs=1e-12)
    # Fock fidelity is the single-photon return probability to the mth power
    U = propagator(analytic_spectrum_bi(6, 0.5), 1.3)
    p1 = abs(U.matrix[2, 2]) ** 2
    assert state_fidelity(U, FockSingleSite(site=2, photons=3)) == pytest.approx(p1**3, rel=1e-12)


def test_center_of_mass():
    assert center_of_mass(np.array([0.0, 0.0, 2.0, 0.0])) == 2.0
    assert center_of_mass(np.array([0.25, 0.5, 0.25])) == 1.0
    v = np.zeros(21)
    v[10], v[20] = 0.5, 0.5
    assert center_of_mass(v) == 15.0
    with pytest.raises(ValueError):
        center_of_mass(np.zeros(4))


def test_two_photon_product_at_zero_time():
    U = propagator(analytic_spectrum_bi(5, 0.5), 0.0)
    gamma = two_photon_correlation(U, ProductTwoPhoton(1, 3))
    expect = np.zeros((5, 5))
    expect[1, 3] = expect[3, 1] = 1.0
    assert np.allclose(gamma, expect, atol=1e-12)


def test_two_photon_noon_at_zero_time():
    U = propagator(analytic_spectrum_bi(5, 0.5), 0.0)
    gamma = two_photon_correlation(U, Noon(1, 3, photons=2, phase=0.9))
    expect = np.zeros((5, 5))
    expect[1, 1] = expect[3, 3] = 1.0
    assert np.allclose(gamma, expect, atol=1e-12)


def test_hong_ou_mandel_suppression():
    # two-site uniform lattice: Gamma[0,1](t) = cos^2(2t) by hand, so photons
    # never exit in different ports at t = pi/8 + k pi/4 ... and 0.5 at pi/8
    for t in (0.1, np.pi / 8, np.pi / 4, 0.9):
        U = _uniform_two_site(t)
        gamma = two_photon_correlation(U, ProductTwoPhoton(0, 1))
        assert gamma[0, 1] == pytest.approx(np.cos(2 * t) ** 2, abs=1e-10)
    U = _uniform_two_site(np.pi / 8)
    gamma = two_photon_correlation(U, ProductTwoPhoton(0, 1))
    assert gamma[0, 1] == pytest.approx(0.5, abs=1e-10)


def test_two_photon_symmetry_and_sum_rule():
    rng = np.random.default_rng(37)
    for N in (2, 4, 5, 8):
        beta = float(rng.uniform(0.0, 1.5))
        t = float(rng.uniform(0.0, 6.0))
        U = propagator(analytic_spectrum_bi(N, beta), t)
        a, b = 0, N - 1
        gamma = two_photon_correlation(U, ProductTwoPhoton(a, b))
        assert np.max(np.abs(gamma - gamma.T)) < 1e-14
        assert np.sum(gamma) == pytest.approx(2.0, abs=1e-8)
        noon = two_photon_correlation(U, Noon(a, b, photons=2, phase=float(rng.uniform(0, 2 * np.pi))))
        assert np.max(np.abs(noon - noon.T)) < 1e-14
        assert np.min(noon) > -1e-12


def test_two_photon_rejects_equal_sites():
    with pytest.raises(ValueError):
        ProductTwoPhoton(2, 2)
    with pytest.raises(ValueError):
        Noon(2, 2)


def test_sweep_trivial_sample():
    spec = lattice_spectrum(LatticeSpec.bi(0.5, 9))
    state = GaussianLike(w0=2.0, q=0.0)
    series = observable_sweep(spec, state, np.array([0.0]))
    assert series.fidelity[0] == pytest.approx(1.0, abs=1e-12)
    amps = make_gaussian_state(9, 2.0, 0.0)
    assert np.allclose(series.mean_photons[0], np.abs(amps) ** 2, atol=1e-12)
    assert series.center_of_mass[0] == pytest.approx(4.0, abs=1e-12)


def test_sweep_conservation_every_sample():
    spec = lattice_spectrum(LatticeSpec.bi(0.5, 31))
    times = np.linspace(0.0, 25.0, 120)
    for state, total in (
        (GaussianLike(w0=3.0, q=0.55 * np.pi), 1.0),
        (FockSingleSite(site=15, photons=2), 2.0),
        (Noon(10, 20, photons=3, phase=0.2), 3.0),
    ):
        series = observable_sweep(spec, state, times)
        assert np.max(np.abs(series.mean_photons.sum(axis=1) - total)) < 1e-10
        assert np.all(series.fidelity <= 1.0 + 1e-12)
        assert np.all(series.fidelity >= 0.0)
        assert np.all((series.center_of_mass >= 0.0) & (series.center_of_mass <= 30.0))


def test_sweep_matches_pointwise_operations():
    spec = lattice_spectrum(LatticeSpec.bi(0.5, 13))
    state = ProductTwoPhoton(4, 8)
    times = np.array([0.0, 0.7, 2.9])
    series = observable_sweep(spec, state, times)
    for i, t in enumerate(times):
        U = propagator(spec, float(t))
        assert np.allclose(series.mean_photons[i], mean_photon_numbers(U, state), atol=1e-12)
        assert series.fidelity[i] == pytest.approx(state_fidelity(U, state), abs=1e-12)


def test_gaussian_drift_antisymmetric_in_tilt():
    # reversing the tilt reverses the initial centre-of-mass drift exactly
    # (odd lattice, envelope symmetric about the central site)
    spec = lattice_spectrum(LatticeSpec.bi(0.5, 101))
    times = np.linspace(0.0, 3.0, 40)
    q = 0.55 * np.pi
    plus = observable_sweep(spec, GaussianLike(w0=7.0, q=q), times)
    minus = observable_sweep(spec, GaussianLike(w0=7.0, q=-q), times)
    drift_plus = plus.center_of_mass - plus.center_of_mass[0]
    drift_minus = minus.center_of_mass - minus.center_of_mass[0]
    assert np.max(np.abs(drift_plus)) > 0.05  # the tilt does move the packet
    assert np.max(np.abs(drift_plus + drift_minus)) < 1e-9
