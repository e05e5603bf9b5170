import numpy as np
import pytest

from binlat.poly import (
    fib_eval,
    fib_eval_scaled,
    fib_root_residual,
    fib_roots,
    morgan_voyce_eval,
)
from oracles import fibonacci_coefficients, morgan_voyce_coefficients, poly_value


def test_fib_base_cases():
    for x in (0.0, 1.5, -2.0, 0.3 + 0.7j):
        assert fib_eval(1, x) == 1
        assert fib_eval(2, x) == x


def test_fib_integer_sequence():
    # F_n(1) is the integer Fibonacci sequence 1, 1, 2, 3, 5, 8, ...
    values = [fib_eval(n, 1.0) for n in range(1, 9)]
    assert values == [1, 1, 2, 3, 5, 8, 13, 21]


def test_fib_hand_value():
    # F5(x) = x^4 + 3x^2 + 1 by expanding the recurrence, so F5(2) = 16 + 12 + 1
    assert fib_eval(5, 2.0) == 29


def test_fib_rejects_bad_order():
    with pytest.raises(ValueError):
        fib_eval(0, 1.0)
    with pytest.raises(ValueError):
        fib_eval(-3, 1.0)
    with pytest.raises(ValueError):
        fib_eval_scaled(0, 1.0)


def test_fib_against_coefficient_oracle():
    rng = np.random.default_rng(7)
    for n in range(1, 20):
        coeffs = fibonacci_coefficients(n)
        for x in rng.uniform(-2, 2, 4) + 1j * rng.uniform(-2, 2, 4):
            expect = poly_value(coeffs, complex(x))
            got = fib_eval(n, complex(x))
            assert abs(got - expect) <= 1e-12 * max(1.0, abs(expect))


def test_fib_recurrence_consistency():
    rng = np.random.default_rng(11)
    for x in rng.uniform(-3.0, 3.0, 25):
        for n in range(2, 26):
            lhs = fib_eval(n + 1, x)
            rhs = x * fib_eval(n, x) + fib_eval(n - 1, x)
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_morgan_voyce_base_cases():
    for x in (-1.0, 0.0, 2.5):
        assert morgan_voyce_eval("b", 0, x) == 1.0
        assert morgan_voyce_eval("B", 0, x) == 1.0
        assert morgan_voyce_eval("b", 1, x) == x + 1.0
        assert morgan_voyce_eval("B", 1, x) == x + 2.0


def test_morgan_voyce_hand_values():
    # B1(-4 cos^2(pi/3)) = -4/4 + 2 = 1
    assert morgan_voyce_eval("B", 1, -4.0 * np.cos(np.pi / 3) ** 2) == pytest.approx(1.0, abs=1e-14)
    # b2(x) = x^2 + 3x + 1, so b2(0) = 1
    assert morgan_voyce_eval("b", 2, 0.0) == 1.0


def test_morgan_voyce_rejects_bad_args():
    with pytest.raises(ValueError):
        morgan_voyce_eval("c", 1, 0.0)
    with pytest.raises(ValueError):
        morgan_voyce_eval("b", -1, 0.0)


def test_morgan_voyce_against_coefficient_oracle():
    # all coefficients are positive, so Horner on the coefficient lists is
    # well conditioned for x >= 0 at any order but only at low order for
    # x < 0 (alternating cancellation)
    rng = np.random.default_rng(13)
    for n in range(0, 16):
        cb = morgan_voyce_coefficients("b", n)
        cB = morgan_voyce_coefficients("B", n)
        xs = list(rng.uniform(0.0, 2.0, 3))
        if n <= 6:
            xs += list(rng.uniform(-4.0, 0.0, 3))
        for x in xs:
            assert morgan_voyce_eval("b", n, x) == pytest.approx(
                poly_value(cb, x).real, rel=1e-11, abs=1e-11)
            assert morgan_voyce_eval("B", n, x) == pytest.approx(
                poly_value(cB, x).real, rel=1e-11, abs=1e-11)


def test_cross_family_identities():
    # F_{2n+1}(y) = b_n(y^2) and F_{2n+2}(y) = y B_n(y^2)
    rng = np.random.default_rng(17)
    for _ in range(40):
        y = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        n = int(rng.integers(0, 16))
        lhs = fib_eval(2 * n + 1, y)
        rhs = morgan_voyce_eval("b", n, y * y)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))
        lhs = fib_eval(2 * n + 2, y)
        rhs = y * morgan_voyce_eval("B", n, y * y)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_fib_roots_small_cases():
    assert fib_roots(2) == [0j]
    roots = fib_roots(4)  # F4(x) = x^3 + 2x = x (x^2 + 2)
    expect = [-1j * np.sqrt(2), 0j, 1j * np.sqrt(2)]
    assert np.allclose(roots, expect, atol=1e-15)


def test_fib_roots_are_roots():
    for r in fib_roots(8):
        assert abs(fib_eval(8, r)) < 1e-10


def test_fib_roots_purity_and_order():
    for n in (2, 5, 12, 31):
        roots = fib_roots(n)
        assert len(roots) == n - 1
        ims = [r.imag for r in roots]
        assert all(r.real == 0.0 for r in roots)
        assert all(abs(im) < 2.0 for im in ims)
        assert ims == sorted(ims)


def test_fib_roots_rejects_bad_order():
    with pytest.raises(ValueError):
        fib_roots(1)


def test_scaled_eval_matches_plain():
    rng = np.random.default_rng(19)
    for _ in range(10):
        x = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        n = int(rng.integers(1, 35))
        mant, expo = fib_eval_scaled(n, x)
        assert mant * 2.0**expo == pytest.approx(fib_eval(n, x), rel=1e-13, abs=1e-300)


def test_scaled_eval_survives_overflow():
    # plain recurrence overflows around n ~ 1500 at x = 3; scaled mode keeps going
    mant, expo = fib_eval_scaled(3000, 3.0)
    assert np.isfinite(mant.real)
    assert expo > 4000  # growth rate log2((3+sqrt(13))/2) ~ 1.7 bits per order


def test_root_residuals_scaled_mode():
    for n in range(2, 41):
        for r in fib_roots(n):
            assert fib_root_residual(n, r) < 1e-9
