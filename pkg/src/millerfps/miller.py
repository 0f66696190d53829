"""Coefficients of ``B_a o f`` by the generalized J.C.P. Miller recurrence.

For ``f = b_0 + b_1 z + ...`` with ``|b_0| < 1`` the composition
``B_a o f = c_0 + c_1 z + ...`` satisfies

    c_0 = (1 + b_0)**a
    c_n = 1/(n (1 + b_0)) * sum_{k=1..n} b_k c_{n-k} (k a - (n - k)),   n >= 1

which for ``b_0 = 0`` collapses to the classical Miller formula for
nonunit series.
"""

from __future__ import annotations

import cmath

import numpy as np

from .series import (
    CompositionError,
    Series,
    as_exponent,
    can_compose_binomial,
)

__all__ = ["principal_power", "miller_recursive", "miller_original"]


def principal_power(w, a) -> complex:
    """``w**a`` on the principal branch of the logarithm."""
    w = complex(w)
    a = complex(a)
    if w == 0:
        if a == 0:
            return 1 + 0j
        if a.real > 0:
            return 0j
        raise ZeroDivisionError("0 raised to an exponent with Re(a) <= 0")
    # exact or correctly rounded special cases first
    if a == 0.5:
        return cmath.sqrt(w)
    if a.imag == 0 and a.real.is_integer() and abs(a.real) <= 64:
        return w ** int(a.real)
    if a.imag == 0 and w.imag == 0 and w.real > 0:
        return complex(w.real ** a.real)
    return cmath.exp(a * cmath.log(w))


def miller_recursive(f: Series, a) -> Series:
    """Coefficients of ``B_a o f`` up to ``f.order`` (single forward pass).

    Natural exponents run through the same recurrence; for them the
    existence check always passes, but ``1 + b_0`` must still be nonzero.
    """
    a = as_exponent(a)
    verdict = can_compose_binomial(f, a)
    if not verdict.exists:
        raise CompositionError(verdict)
    b = f.coeffs
    u = 1 + b[0]
    if u == 0:
        # only reachable for natural a with b_0 = -1
        raise ZeroDivisionError("recurrence needs 1 + f(0) != 0")
    av = a.value
    N = f.order
    c = np.zeros(N + 1, dtype=complex)
    c[0] = principal_power(u, av)
    for n in range(1, N + 1):
        k = np.arange(1, n + 1)
        weights = k * av - (n - k)
        c[n] = np.dot(b[1 : n + 1] * weights, c[n - 1 :: -1][:n]) / (n * u)
    return Series(c)


def miller_original(f: Series, a) -> Series:
    """Classical Miller recurrence, valid only for nonunit ``f`` (``b_0 == 0``).

    c_0 = 1,   c_n = 1/n * sum_{k=0..n-1} (a (n - k) - k) c_k b_{n-k}
    """
    if f.coeffs[0] != 0:
        raise ValueError("classical Miller formula needs f(0) == 0")
    av = as_exponent(a).value
    b = f.coeffs
    N = f.order
    c = np.zeros(N + 1, dtype=complex)
    c[0] = 1
    for n in range(1, N + 1):
        acc = 0j
        for k in range(n):
            acc += (av * (n - k) - k) * c[k] * b[n - k]
        c[n] = acc / n
    return Series(c)
