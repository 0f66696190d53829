"""Truncated power series in ``q`` variables and the multivariable Miller
recursion for ``B_r o f``.

Coefficients are stored densely, one slot per multi-index of total degree
``<= N``, in degree-graded lexicographic order: degrees ascend, and within
one degree the indices run lexicographically downward, e.g. for q = 2:
``(0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...``.
"""

from __future__ import annotations

import itertools
import math
import numbers
from functools import lru_cache

import numpy as np

from .miller import principal_power
from .series import (
    CompositionError,
    ExistenceReason,
    ExistenceVerdict,
    Series,
    as_exponent,
)

__all__ = [
    "MultiIndexLayout",
    "MultiSeries",
    "multivar_cauchy_product",
    "partial_derivative",
    "multivar_miller_recursive",
    "miller_coefficient_via_axis",
    "axis_discrepancy",
]


def _indices_of_degree(q: int, d: int):
    """All ``c in N_0**q`` with ``|c| = d``, lexicographically descending."""
    if q == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _indices_of_degree(q - 1, d - first):
            yield (first,) + rest


class MultiIndexLayout:
    """Bijection between multi-indices of degree ``<= order`` and array ranks."""

    def __init__(self, q: int, order: int):
        if q < 1:
            raise ValueError("q must be a positive integer")
        if order < 0:
            raise ValueError("order must be nonnegative")
        self.q = q
        self.order = order
        self.indices: list[tuple[int, ...]] = [
            c for d in range(order + 1) for c in _indices_of_degree(q, d)
        ]
        self.rank = {c: k for k, c in enumerate(self.indices)}
        self.array = np.array(self.indices, dtype=np.int64).reshape(-1, q)
        self.degrees = self.array.sum(axis=1)
        # mixed-radix codes so that code(a) + code(b) == code(a + b)
        self._radix = (order + 1) ** np.arange(q, dtype=np.int64)
        self.codes = self.array @ self._radix
        lookup = np.full((order + 1) ** q, -1, dtype=np.int64)
        lookup[self.codes] = np.arange(len(self.indices))
        self._lookup = lookup
        self.degree_start = [
            math.comb(d + q - 1, q) if d > 0 else 0 for d in range(order + 2)
        ]

    def __len__(self) -> int:
        return len(self.indices)

    def rank_of_codes(self, codes: np.ndarray) -> np.ndarray:
        return self._lookup[codes]


@lru_cache(maxsize=64)
def _layout(q: int, order: int) -> MultiIndexLayout:
    return MultiIndexLayout(q, order)


class MultiSeries:
    """Immutable truncated q-variable power series ``sum_c f_c X**c``, ``|c| <= N``."""

    __slots__ = ("_q", "_order", "_c")

    def __init__(self, q: int, order: int, coeffs=None):
        layout = _layout(q, order)
        if coeffs is None:
            c = np.zeros(len(layout), dtype=complex)
        else:
            c = np.array(coeffs, dtype=complex).ravel()
            if len(c) != len(layout):
                raise ValueError(
                    f"expected {len(layout)} coefficients for q={q}, N={order}, got {len(c)}"
                )
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.flags.writeable = False
        self._q = q
        self._order = order
        self._c = c

    @classmethod
    def from_dict(cls, q: int, order: int, terms: dict) -> "MultiSeries":
        """Build from ``{multi_index: value}``; unlisted indices are zero."""
        layout = _layout(q, order)
        c = np.zeros(len(layout), dtype=complex)
        for idx, val in terms.items():
            idx = tuple(int(v) for v in idx)
            if len(idx) != q or min(idx) < 0:
                raise ValueError(f"bad multi-index {idx} for q={q}")
            if sum(idx) <= order:
                c[layout.rank[idx]] = val
        return cls(q, order, c)

    @classmethod
    def constant(cls, q: int, order: int, value=1.0) -> "MultiSeries":
        return cls.from_dict(q, order, {(0,) * q: value})

    @classmethod
    def from_series(cls, f: Series) -> "MultiSeries":
        return cls(1, f.order, f.coeffs)

    def to_series(self) -> Series:
        if self._q != 1:
            raise ValueError("only a 1-variable series converts to Series")
        return Series(self._c)

    @property
    def q(self) -> int:
        return self._q

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def layout(self) -> MultiIndexLayout:
        return _layout(self._q, self._order)

    def __getitem__(self, idx) -> complex:
        idx = tuple(idx)
        if sum(idx) > self._order:
            raise KeyError(f"{idx} exceeds truncation order {self._order}")
        return self._c[self.layout.rank[idx]]

    def items(self):
        return zip(self.layout.indices, self._c)

    def __repr__(self) -> str:
        nz = {c: v for c, v in self.items() if v != 0}
        return f"MultiSeries(q={self._q}, order={self._order}, {nz!r})"

    def truncate(self, order: int) -> "MultiSeries":
        """Keep degrees ``<= order``; raising the order pads with zeros."""
        return MultiSeries.from_dict(self._q, order, dict(self.items()))

    def _check(self, other: "MultiSeries") -> None:
        if self._q != other._q or self._order != other._order:
            raise ValueError(
                f"shape mismatch: (q={self._q}, N={self._order}) vs "
                f"(q={other._q}, N={other._order})"
            )

    def __add__(self, other):
        if isinstance(other, numbers.Number):
            other = MultiSeries.constant(self._q, self._order, other)
        if not isinstance(other, MultiSeries):
            return NotImplemented
        self._check(other)
        return MultiSeries(self._q, self._order, self._c + other._c)

    __radd__ = __add__

    def __neg__(self):
        return MultiSeries(self._q, self._order, -self._c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return MultiSeries(self._q, self._order, self._c * other)
        if isinstance(other, MultiSeries):
            return multivar_cauchy_product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return MultiSeries(self._q, self._order, self._c * other)
        return NotImplemented


def multivar_cauchy_product(f: MultiSeries, g: MultiSeries) -> MultiSeries:
    """``h_c = sum_{a + b = c} f_a g_b`` for every ``|c| <= N``."""
    f._check(g)
    layout = f.layout
    N = f.order
    h = np.zeros(len(layout), dtype=complex)
    fc, gc = f.coeffs, g.coeffs
    for ra in np.flatnonzero(fc):
        # partners b with |a| + |b| <= N occupy a prefix of the graded layout
        room = N - layout.degrees[ra]
        nb = layout.degree_start[room + 1]
        target = layout.rank_of_codes(layout.codes[:nb] + layout.codes[ra])
        h[target] += fc[ra] * gc[:nb]
    return MultiSeries(f.q, N, h)


def partial_derivative(f: MultiSeries, i: int) -> MultiSeries:
    """``D_i f`` with ``(D_i f)_c = (c_i + 1) f_{c + e^i}``; ``i`` is 1-based."""
    if not 1 <= i <= f.q:
        raise ValueError(f"axis {i} out of range 1..{f.q}")
    if f.order == 0:
        raise ValueError("derivative needs order >= 1")
    out = _layout(f.q, f.order - 1)
    src = f.layout
    unit = np.zeros(f.q, dtype=np.int64)
    unit[i - 1] = 1
    shifted = src.rank_of_codes(out.array @ src._radix + unit @ src._radix)
    c = (out.array[:, i - 1] + 1) * f.coeffs[shifted]
    return MultiSeries(f.q, f.order - 1, c)


def _existence(f: MultiSeries, r) -> None:
    if r.natural_value is None and not abs(f.coeffs[0]) < 1:
        raise CompositionError(
            ExistenceVerdict(False, ExistenceReason.Fails),
            "composition B_r o f does not exist: requires |f_theta| < 1 "
            "for a non-natural exponent",
        )


def _box(upper):
    return itertools.product(*(range(u + 1) for u in upper))


def miller_coefficient_via_axis(
    f: MultiSeries, h: np.ndarray, target: tuple[int, ...], i: int, r
) -> complex:
    """Evaluate ``h_{c + e^i}`` from lower-degree coefficients ``h``.

    ``target`` is ``c + e^i`` (so ``target[i-1] >= 1``); ``h`` must already
    hold every coefficient of degree below ``|target|``. Equating the
    ``X**c`` coefficients of ``(1 + f) D_i h = r h D_i f`` gives

        h_{c+e^i} (c_i + 1)(1 + f_0) =
            sum_{b <= c, b_i = c_i} (c_i + 1) [r f_{b+e^i} h_{c-b} - [b != c] f_{c-b} h_{b+e^i}]
          + sum_{b <= c - e^i} (b_i + 1) [r f_{b+e^i} h_{c-b} - f_{c-b} h_{b+e^i}]

    The ``[b != c]`` terms vanish for ``q = 1`` but not otherwise.
    """
    rank = f.layout.rank
    fc = f.coeffs
    ax = i - 1
    c = list(target)
    c[ax] -= 1
    ci = c[ax]
    rv = as_exponent(r).value

    first = 0j
    cross = 0j
    upper = list(c)
    ct = tuple(c)
    for b in _box(upper):
        if b[ax] != ci:
            continue
        bi = list(b)
        bi[ax] += 1
        bi = tuple(bi)
        rest = tuple(x - y for x, y in zip(c, b))
        first += (ci + 1) * fc[rank[bi]] * h[rank[rest]]
        if b != ct:
            cross += (ci + 1) * fc[rank[rest]] * h[rank[bi]]

    second = -cross
    if ci > 0:
        upper[ax] -= 1
        for b in _box(upper):
            bi = list(b)
            bi[ax] += 1
            bi = tuple(bi)
            rest = tuple(x - y for x, y in zip(c, b))
            second += (b[ax] + 1) * (
                rv * fc[rank[bi]] * h[rank[rest]] - fc[rank[rest]] * h[rank[bi]]
            )
    return (rv * first + second) / ((ci + 1) * (1 + fc[0]))


def multivar_miller_recursive(
    f: MultiSeries, r, cross_check: bool = False, rtol: float = 1e-10
) -> MultiSeries:
    """Coefficients of ``B_r o f`` by the multivariable Miller recursion.

    Each coefficient is computed once, degree by degree, using the smallest
    axis along which its index is positive. With ``cross_check`` every
    index with two or more positive coordinates is recomputed along its
    second positive axis and an ``ArithmeticError`` is raised if the two
    disagree beyond ``rtol``.
    """
    r = as_exponent(r)
    _existence(f, r)
    u = 1 + f.coeffs[0]
    if u == 0:
        raise ZeroDivisionError("recursion needs 1 + f_theta != 0")
    layout = f.layout
    h = np.zeros(len(layout), dtype=complex)
    h[0] = principal_power(u, r.value)
    for k in range(1, len(layout)):
        target = layout.indices[k]
        axes = [j + 1 for j, v in enumerate(target) if v > 0]
        h[k] = miller_coefficient_via_axis(f, h, target, axes[0], r)
        if cross_check and len(axes) > 1:
            alt = miller_coefficient_via_axis(f, h, target, axes[1], r)
            if abs(alt - h[k]) > rtol * max(abs(h[k]), abs(alt), 1e-300):
                raise ArithmeticError(
                    f"axis disagreement at {target}: {h[k]!r} vs {alt!r}"
                )
    return MultiSeries(f.q, f.order, h)


def axis_discrepancy(f: MultiSeries, r, h: MultiSeries | None = None) -> float:
    """Largest relative spread of ``h_c`` over all admissible axes, taken over
    every multi-index with at least two positive coordinates."""
    if h is None:
        h = multivar_miller_recursive(f, r)
    hc = h.coeffs
    worst = 0.0
    for k, target in enumerate(h.layout.indices):
        axes = [j + 1 for j, v in enumerate(target) if v > 0]
        if len(axes) < 2:
            continue
        vals = [miller_coefficient_via_axis(f, hc, target, ax, r) for ax in axes]
        scale = max(abs(v) for v in vals)
        if scale == 0:
            continue
        spread = max(abs(v - hc[k]) for v in vals) / scale
        worst = max(worst, spread)
    return worst
