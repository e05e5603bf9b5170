"""Backend-parity and robustness tests for the hot kernels."""

import numpy as np
import pytest

import binlat.kernels as kernels
from binlat.kernels import numpy_impl

numba_impl = pytest.importorskip("binlat.kernels.numba_impl")


def _random_tridiag(rng, n):
    return rng.normal(size=n), rng.normal(size=n - 1)


def test_active_backend_exposed():
    assert kernels.BACKEND in ("numba", "numpy")


@pytest.mark.parametrize("n", [2, 3, 7, 24, 101])
def test_backends_agree(n):
    rng = np.random.default_rng(n)
    d, e = _random_tridiag(rng, n)
    w1, v1 = numpy_impl.tridiag_eigh(d, e)
    w2, v2 = numba_impl.tridiag_eigh(d, e)
    # identical algorithms, identical seeds: agreement to rounding
    assert np.max(np.abs(w1 - w2)) < 1e-13
    assert np.max(np.abs(v1 - v2)) < 1e-12


@pytest.mark.parametrize("impl", [numpy_impl, numba_impl], ids=["numpy", "numba"])
def test_against_lapack(impl):
    rng = np.random.default_rng(42)
    for n in (2, 3, 5, 16, 64):
        d, e = _random_tridiag(rng, n)
        w, v = impl.tridiag_eigh(d, e)
        dense = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        w_ref = np.linalg.eigvalsh(dense)
        scale = np.max(np.abs(dense))
        assert np.max(np.abs(w - w_ref)) < 1e-12 * max(1.0, scale)
        assert np.max(np.abs(dense @ v - v * w[None, :])) < 1e-11 * max(1.0, scale)
        assert np.max(np.abs(v.T @ v - np.eye(n))) < 1e-11


@pytest.mark.parametrize("impl", [numpy_impl, numba_impl], ids=["numpy", "numba"])
def test_constant_diagonal_degenerate(impl):
    w, v = impl.tridiag_eigh(np.full(6, 0.7), np.zeros(5))
    assert np.allclose(w, 0.7, atol=1e-14)
    assert np.max(np.abs(v.T @ v - np.eye(6))) < 1e-12


@pytest.mark.parametrize("impl", [numpy_impl, numba_impl], ids=["numpy", "numba"])
def test_decoupled_blocks(impl):
    # zero couplings in the middle split the chain; spectrum is the union
    d = np.array([0.3, -0.1, 0.9, 0.2, -0.6])
    e = np.array([0.8, 0.0, 0.0, 0.4])
    w, v = impl.tridiag_eigh(d, e)
    dense = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.allclose(np.sort(w), np.linalg.eigvalsh(dense), atol=1e-13)
    assert np.max(np.abs(dense @ v - v * w[None, :])) < 1e-12


@pytest.mark.parametrize("impl", [numpy_impl, numba_impl], ids=["numpy", "numba"])
def test_single_site(impl):
    w, v = impl.tridiag_eigh(np.array([1.3]), np.zeros(0))
    assert w[0] == 1.3
    assert v[0, 0] == 1.0


@pytest.mark.parametrize("impl", [numpy_impl, numba_impl], ids=["numpy", "numba"])
def test_rk4_two_site_exact(impl):
    # H = sigma_x: a(t) = (cos t, -i sin t) from a(0) = (1, 0)
    a0 = np.array([1.0, 0.0], dtype=np.complex128)
    t = 0.9
    a = impl.rk4_evolve(np.zeros(2), np.ones(1), a0, t, 400)
    assert abs(a[0] - np.cos(t)) < 1e-10
    assert abs(a[1] + 1j * np.sin(t)) < 1e-10
    # input untouched
    assert a0[1] == 0.0


def test_rk4_backends_agree():
    rng = np.random.default_rng(8)
    n = 31
    d, e = _random_tridiag(rng, n)
    a0 = rng.normal(size=n) + 1j * rng.normal(size=n)
    a0 /= np.linalg.norm(a0)
    a1 = numpy_impl.rk4_evolve(d, e, a0, 2.0, 500)
    a2 = numba_impl.rk4_evolve(d, e, a0, 2.0, 500)
    assert np.max(np.abs(a1 - a2)) < 1e-13
