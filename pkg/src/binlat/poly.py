"""Fibonacci and Morgan-Voyce polynomial families.

Fibonacci polynomials: F1(x) = 1, F2(x) = x, F_{n+1} = x F_n + F_{n-1}.
Morgan-Voyce polynomials: b0 = 1, b1 = x + 1 and B0 = 1, B1 = x + 2, both
continued by p_{n+1} = (x + 2) p_n - p_{n-1}.

The two families interlock: F_{2n+1}(y) = b_n(y^2) and
F_{2n+2}(y) = y B_n(y^2), which is what lets eigenvectors of the lattice
Hamiltonians be evaluated in purely real arithmetic even though the
Fibonacci roots are imaginary.
"""

from __future__ import annotations

import math

SMALL_B = "b"
BIG_B = "B"

# Mantissas are renormalized by this exact power of two whenever they leave
# [2^-512, 2^512], so scaling never rounds.
_SCALE_EXP = 512
_SCALE_UP = 2.0**_SCALE_EXP
_SCALE_DOWN = 2.0**-_SCALE_EXP


def fib_eval(n: int, x: complex) -> complex:
    """Evaluate the nth Fibonacci polynomial F_n at x by forward recurrence.

    n must be >= 1.  Overflows for large n with |x| well above 2; use
    fib_eval_scaled for residual checks at high order.
    """
    if n < 1:
        raise ValueError(f"Fibonacci polynomial order must be >= 1, got {n}")
    prev, cur = 0j, 1 + 0j  # F0 = 0, F1 = 1
    for _ in range(n - 1):
        prev, cur = cur, x * cur + prev
    return cur


def fib_eval_scaled(n: int, x: complex) -> tuple[complex, int]:
    """Evaluate F_n(x) as (mantissa, exponent) with value mantissa * 2**exponent.

    The recurrence is renormalized by exact powers of two, so the result is
    rounding-identical to plain forward recurrence while never overflowing.
    """
    if n < 1:
        raise ValueError(f"Fibonacci polynomial order must be >= 1, got {n}")
    prev, cur = 0j, 1 + 0j
    expo = 0
    for _ in range(n - 1):
        prev, cur = cur, x * cur + prev
        m = max(abs(cur.real), abs(cur.imag), abs(prev.real), abs(prev.imag))
        if m > _SCALE_UP:
            prev *= _SCALE_DOWN
            cur *= _SCALE_DOWN
            expo += _SCALE_EXP
        elif 0.0 < m < _SCALE_DOWN:
            prev *= _SCALE_UP
            cur *= _SCALE_UP
            expo -= _SCALE_EXP
    return cur, expo


def morgan_voyce_eval(kind: str, n: int, x: float) -> float:
    """Evaluate the nth Morgan-Voyce polynomial b_n (kind="b") or B_n (kind="B")."""
    if kind not in (SMALL_B, BIG_B):
        raise ValueError(f"Morgan-Voyce kind must be 'b' or 'B', got {kind!r}")
    if n < 0:
        raise ValueError(f"Morgan-Voyce order must be >= 0, got {n}")
    if n == 0:
        return 1.0
    prev = 1.0
    cur = x + 1.0 if kind == SMALL_B else x + 2.0
    for _ in range(n - 1):
        prev, cur = cur, (x + 2.0) * cur - prev
    return cur


def fib_roots(n: int) -> list[complex]:
    """Roots of F_n in closed form: 2i cos(k pi / n), k = 1..n-1.

    All roots are purely imaginary with |Im| < 2, returned sorted by imaginary
    part ascending.  Real parts are exactly zero, and the set is exactly
    symmetric: the k and n-k roots are built as a +- pair, with an exact zero
    in the middle for even n.
    """
    if n < 2:
        raise ValueError(f"F_n has roots only for n >= 2, got {n}")
    upper = [2.0 * math.cos(k * math.pi / n) for k in range(1, (n - 1) // 2 + 1)]
    ims = [-y for y in upper]
    if n % 2 == 0:
        ims.append(0.0)
    ims.extend(reversed(upper))
    return [complex(0.0, y) for y in ims]


def _abs_scaled(mantissa: complex, exponent: int) -> float:
    """|value| for a (mantissa, exponent) pair, saturating instead of overflowing."""
    try:
        return abs(mantissa) * 2.0**exponent
    except OverflowError:
        return math.inf


def fib_root_residual(n: int, root: complex) -> float:
    """|F_n(root)| evaluated in scaled mode."""
    mant, expo = fib_eval_scaled(n, root)
    return _abs_scaled(mant, expo)
