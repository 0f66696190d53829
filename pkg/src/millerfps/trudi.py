"""Hessenberg determinants by the generalized Trudi expansion, and the
explicit (non-recursive) form of the generalized Miller coefficients.

Both expansions sum over subsets ``{s_1 < ... < s_l}`` of ``[m]`` with
``s_l = m``. Such a subset is the same thing as an integer composition of
``m`` (its gap sequence ``s_q - s_{q-1}`` with ``s_0 = 0``), so there are
exactly ``2**(m-1)`` of them.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator

import numpy as np
from scipy.linalg import solve_triangular

from .miller import miller_recursive, principal_power
from .series import (
    CompositionError,
    Series,
    as_exponent,
    can_compose_binomial,
)

__all__ = [
    "HessenbergMatrix",
    "CompositionIter",
    "compensated_sum",
    "trudi_terms",
    "trudi_det",
    "trudi_det_constant_superdiag",
    "miller_explicit",
    "miller_triangular_system",
    "solve_miller_system",
    "DEFAULT_EXPLICIT_MAX_ORDER",
]

DEFAULT_EXPLICIT_MAX_ORDER = 20


def compensated_sum(terms: Iterable[complex]) -> complex:
    """Correctly rounded sum of complex terms (``math.fsum`` per component)."""
    re, im = [], []
    for t in terms:
        re.append(t.real)
        im.append(t.imag)
    return complex(math.fsum(re), math.fsum(im))


class HessenbergMatrix:
    """Square complex matrix with ``a[i, j] == 0`` whenever ``j > i + 1``.

    Stored 0-based; :meth:`entry` uses the 1-based indexing of the
    expansion formulas.
    """

    __slots__ = ("_a",)

    def __init__(self, entries):
        a = np.array(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise ValueError("Hessenberg matrix must be square and non-empty")
        if np.any(np.triu(a, 2)):
            raise ValueError("entries above the first superdiagonal must be zero")
        a.flags.writeable = False
        self._a = a

    @property
    def n(self) -> int:
        return self._a.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._a

    def entry(self, i: int, j: int) -> complex:
        return self._a[i - 1, j - 1]

    def superdiagonal(self) -> np.ndarray:
        return np.diagonal(self._a, 1)

    def __repr__(self) -> str:
        return f"HessenbergMatrix({self._a.tolist()!r})"


class CompositionIter:
    """Integer compositions of ``m`` in lexicographic order.

    Each composition ``(e_1, ..., e_l)`` is the gap sequence of a subset
    ``{s_1 < ... < s_l = m}`` of ``[m]``; :meth:`subsets` yields the
    subsets themselves.
    """

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("m must be a positive integer")
        self.m = m

    def __len__(self) -> int:
        return 2 ** (self.m - 1)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        # Iterative lex-order walk; the stack holds the current prefix.
        m = self.m
        prefix: list[int] = [1]
        total = 1
        while True:
            if total == m:
                yield tuple(prefix)
                # backtrack: drop the last part and bump the one before it
                last = prefix.pop()
                total -= last
                if not prefix:
                    return
                prefix[-1] += 1
                total += 1
            else:
                prefix.append(1)
                total += 1

    def subsets(self) -> Iterator[tuple[int, ...]]:
        for gaps in self:
            yield tuple(np.cumsum(gaps).tolist())


def trudi_terms(A: HessenbergMatrix) -> Iterator[complex]:
    """Signed products of the generalized Trudi expansion of ``det(A)``.

    One term per subset ``{s_1 < ... < s_l = n}``:

        (-1)**(n-l) * prod_q a[s_q, s_{q-1}+1] * prod_{k not in S} a[k, k+1]
    """
    n = A.n
    a = A.entries
    for gaps in CompositionIter(n):
        l = len(gaps)
        prod = 1 + 0j
        prev = 0
        for g in gaps:
            s = prev + g
            prod *= a[s - 1, prev]  # a_{s_q, s_{q-1}+1}, 0-based
            for k in range(prev + 1, s):
                prod *= a[k - 1, k]  # a_{k, k+1} for k skipped by S
            prev = s
        yield -prod if (n - l) % 2 else prod


def trudi_det(A: HessenbergMatrix) -> complex:
    """Determinant of a Hessenberg matrix via the generalized Trudi formula."""
    return compensated_sum(trudi_terms(A))


def trudi_det_constant_superdiag(A: HessenbergMatrix, a) -> complex:
    """Trudi's formula when every superdiagonal entry equals ``a``.

    det(A) = sum_l (-a)**(n-l) sum_S prod_q a[s_q, s_{q-1}+1]
    """
    a = complex(a)
    sup = A.superdiagonal()
    if np.any(sup != a):
        raise ValueError("superdiagonal is not constant")
    n = A.n
    m = A.entries
    powers = [(-a) ** k for k in range(n)]
    terms = []
    for gaps in CompositionIter(n):
        prod = 1 + 0j
        prev = 0
        for g in gaps:
            prod *= m[prev + g - 1, prev]
            prev += g
        terms.append(powers[n - len(gaps)] * prod)
    return compensated_sum(terms)


def miller_explicit(f: Series, a, max_order: int = DEFAULT_EXPLICIT_MAX_ORDER) -> Series:
    """Coefficients of ``B_a o f`` from the closed-form (subset-sum) expression.

    For n >= 2,

        c_n = a (1+b_0)**(a-1) * [ b_n + sum_{j=1..n-1} b_j
              sum_{S subset [n-j], max S = n-j} (1+b_0)**(-l)
              prod_q (a (s_q - s_{q-1}) - s_{q-1} - j) / (s_q + j) * b_{s_q - s_{q-1}} ]

    The cost grows like ``2**N``; ``max_order`` guards against accidental
    large inputs. Natural exponents are handed to :func:`miller_recursive`.
    """
    ex = as_exponent(a)
    verdict = can_compose_binomial(f, ex)
    if not verdict.exists:
        raise CompositionError(verdict)
    if ex.natural_value is not None:
        return miller_recursive(f, ex)
    N = f.order
    if N > max_order:
        raise ValueError(f"explicit formula capped at order {max_order}, got {N}")
    av = ex.value
    b = f.coeffs
    u = 1 + b[0]
    inv_u_pow = [principal_power(u, -l) for l in range(N + 1)]
    c = np.zeros(N + 1, dtype=complex)
    c[0] = principal_power(u, av)
    prefactor = av * principal_power(u, av - 1)
    if N >= 1:
        c[1] = prefactor * b[1]
    for n in range(2, N + 1):
        terms = [b[n]]
        for j in range(1, n):
            if b[j] == 0:
                continue
            for gaps in CompositionIter(n - j):
                prod = b[j] * inv_u_pow[len(gaps)]
                prev = 0
                for g in gaps:
                    s = prev + g
                    prod *= (av * g - prev - j) / (s + j) * b[g]
                    prev = s
                terms.append(prod)
        c[n] = prefactor * compensated_sum(terms)
    return Series(c)


def miller_triangular_system(f: Series, a) -> tuple[np.ndarray, np.ndarray]:
    """Unit lower-triangular system ``B c = rhs`` satisfied by ``c_1 .. c_N``.

    ``B[i, j] = -((i - j) a - j) / (i (1 + b_0)) * b_{i-j}`` for ``i > j``
    (1-based), and ``rhs = a (1 + b_0)**(a-1) * (b_1, ..., b_N)``.
    """
    av = as_exponent(a).value
    b = f.coeffs
    N = f.order
    u = 1 + b[0]
    B = np.eye(N, dtype=complex)
    for i in range(1, N + 1):
        for j in range(1, i):
            B[i - 1, j - 1] = -((i - j) * av - j) / (i * u) * b[i - j]
    rhs = av * principal_power(u, av - 1) * b[1:]
    return B, rhs


def solve_miller_system(f: Series, a) -> Series:
    """Recover ``B_a o f`` by forward substitution on the triangular system."""
    av = as_exponent(a).value
    u = 1 + f.coeffs[0]
    c0 = principal_power(u, av)
    if f.order == 0:
        return Series([c0])
    B, rhs = miller_triangular_system(f, av)
    tail = solve_triangular(B, rhs, lower=True, unit_diagonal=True)
    return Series(np.concatenate([[c0], tail]))
