"""Worked applications of the generalized Miller formula.

* closed-form coefficients of ``B_a o (b_0 + z**nbar)``;
* multiplicative inverses of power series, recursively and by an explicit
  sum over integer partitions;
* a truncated Taylor-series (epsilon-)solution of

      y' = sqrt(1 + exp(x**2) / 2) * y,    y(0) = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .miller import miller_recursive, principal_power
from .series import (
    CompositionError,
    Series,
    as_exponent,
    binomial_coefficient,
    can_compose_binomial,
)
from .trudi import compensated_sum

__all__ = [
    "monomial_shift_coeffs",
    "invert_series_recursive",
    "invert_series_explicit",
    "PartitionTerm",
    "partition_terms",
    "inverse_weight",
    "half_exp_square",
    "OdeSolution",
    "ode_epsilon_solution",
    "EXPLICIT_INVERSE_MAX_ORDER",
]

EXPLICIT_INVERSE_MAX_ORDER = 20


def monomial_shift_coeffs(b0, nbar: int, a, N: int) -> Series:
    """Coefficients of ``B_a o (b0 + z**nbar)`` from their closed form.

    c_0 = (1 + b0)**a, c_{k nbar} = (a/k) (1 + b0)**(a-k) binom(a-1, k-1),
    and every other coefficient vanishes.
    """
    if nbar < 2:
        raise ValueError("nbar must be an integer >= 2")
    ex = as_exponent(a)
    if ex.natural_value is not None:
        raise ValueError("closed form is stated for exponents outside N_0")
    probe = Series([b0, 1.0])
    verdict = can_compose_binomial(probe, ex)
    if not verdict.exists:
        raise CompositionError(verdict)
    av = ex.value
    u = 1 + complex(b0)
    c = np.zeros(N + 1, dtype=complex)
    c[0] = principal_power(u, av)
    for k in range(1, N // nbar + 1):
        c[k * nbar] = av / k * principal_power(u, av - k) * binomial_coefficient(av - 1, k - 1)
    return Series(c)


def invert_series_recursive(f: Series) -> Series:
    """``1/f`` via ``c_0 = 1/b_0``, ``c_n = -(1/b_0) sum_{k=1..n} b_k c_{n-k}``."""
    b = f.coeffs
    if b[0] == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    N = f.order
    c = np.zeros(N + 1, dtype=complex)
    c[0] = 1 / b[0]
    for n in range(1, N + 1):
        c[n] = -np.dot(b[1 : n + 1], c[n - 1 :: -1][:n]) / b[0]
    return Series(c)


@dataclass(frozen=True)
class PartitionTerm:
    """Partition ``n = n_1 k_1 + ... + n_m k_m`` with ``n_1 < ... < n_m``."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        parts = [p for p, _ in self.pairs]
        if any(p <= 0 for p in parts) or any(k <= 0 for _, k in self.pairs):
            raise ValueError("parts and multiplicities must be positive")
        if any(x >= y for x, y in zip(parts, parts[1:])):
            raise ValueError("parts must be strictly increasing")

    @property
    def n(self) -> int:
        return sum(p * k for p, k in self.pairs)

    @property
    def length(self) -> int:
        return sum(k for _, k in self.pairs)


def _partitions(n: int, largest: int) -> Iterator[list[int]]:
    if n == 0:
        yield []
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield [first] + rest


def partition_terms(n: int) -> Iterator[PartitionTerm]:
    """Every partition of ``n`` once, largest leading part first."""
    for parts in _partitions(n, n):
        counts: dict[int, int] = {}
        for p in parts:
            counts[p] = counts.get(p, 0) + 1
        yield PartitionTerm(tuple(sorted(counts.items())))


def inverse_weight(term: PartitionTerm) -> int:
    """Integer weight of ``prod b_{n_i}**k_i`` in the n-th coefficient of ``1/f``.

    Splitting off the first part ``n_i`` leaves ``(K-1)! / (k_1! ... (k_i-1)! ... k_m!)``
    orderings of the rest, where ``K = k_1 + ... + k_m``; summing over ``i``
    gives the multinomial ``K! / (k_1! ... k_m!)``, signed ``(-1)**K``.
    """
    K = term.length
    w = math.factorial(K)
    for _, k in term.pairs:
        w //= math.factorial(k)
    return -w if K % 2 else w


def invert_series_explicit(f: Series, max_order: int = EXPLICIT_INVERSE_MAX_ORDER) -> Series:
    """``1/f`` for ``f(0) = 1`` by summing over integer partitions.

    For a general nonzero constant term rescale first:
    ``1/f = (1/b_0) * 1/(f/b_0)``.
    """
    b = f.coeffs
    if b[0] != 1:
        raise ValueError("explicit inverse needs f(0) == 1; rescale f by 1/f(0) first")
    N = f.order
    if N > max_order:
        raise ValueError(f"explicit inverse capped at order {max_order}, got {N}")
    c = np.zeros(N + 1, dtype=complex)
    c[0] = 1
    for n in range(1, N + 1):
        terms = []
        for term in partition_terms(n):
            prod = complex(inverse_weight(term))
            for p, k in term.pairs:
                prod *= b[p] ** k
            terms.append(prod)
        c[n] = compensated_sum(terms)
    return Series(c)


def half_exp_square(N: int) -> Series:
    """``exp(x**2) / 2`` truncated at ``x**N``: coefficient of ``x**(2n)`` is ``1/(2 n!)``."""
    c = np.zeros(N + 1)
    for n in range(N // 2 + 1):
        c[2 * n] = 1 / (2 * math.factorial(n))
    return Series(c)


@dataclass(frozen=True)
class OdeSolution:
    degree: int
    a_coeffs: Series
    c_coeffs: Series
    grid: tuple[tuple[float, float, float], ...]

    def coefficient_rows(self):
        """``(n, c_n, a_n)`` with real parts, in the layout of the coefficient table."""
        return [
            (n, self.c_coeffs[n].real, self.a_coeffs[n].real)
            for n in range(self.degree + 1)
        ]


def _rhs_factor(x: float) -> float:
    return math.sqrt(1 + 0.5 * math.exp(x * x))


def ode_epsilon_solution(
    N: int = 20, grid_step: float = 0.01, x_max: float = 1.0
) -> OdeSolution:
    """Degree-``N`` Taylor polynomial solving ``y' = F(x) y``, ``y(0) = 1``.

    ``F = B_{1/2} o (exp(x**2)/2)`` is expanded with the Miller recurrence;
    matching coefficients of ``y' = F y`` gives
    ``a_n = (1/n) sum_{i=0..n-1} a_i c_{n-1-i}``. Grid rows hold
    ``(x, y_N(x), y_N'(x) - F(x) y_N(x))`` with the exact scalar ``F``.
    """
    if N < 1:
        raise ValueError("degree must be >= 1")
    if grid_step <= 0:
        raise ValueError("grid step must be positive")
    c = miller_recursive(half_exp_square(N), 0.5).coeffs
    a = np.zeros(N + 1, dtype=complex)
    a[0] = 1
    for n in range(1, N + 1):
        a[n] = np.dot(a[:n], c[n - 1 :: -1][:n]) / n
    y = Series(a)
    dy = Series(np.arange(1, N + 1) * a[1:])
    rows = []
    steps = int(math.floor(x_max / grid_step + 1e-9))
    for k in range(steps + 1):
        x = k * grid_step
        yx = y(x).real
        rows.append((x, yx, dy(x).real - _rhs_factor(x) * yx))
    return OdeSolution(N, y, Series(c), tuple(rows))
