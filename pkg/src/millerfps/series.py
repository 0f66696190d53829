"""Truncated one-variable formal power series over the complex numbers.

A :class:`Series` of order ``N`` stores the coefficients ``c_0 .. c_N``;
everything above ``z**N`` is unknown and never inferred. Operations between
series require equal orders and return a series of the same (or, for the
derivative, one lower) order.
"""

from __future__ import annotations

import enum
import math
import numbers
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Series",
    "BinomialExponent",
    "ExistenceReason",
    "ExistenceVerdict",
    "CompositionError",
    "cauchy_product",
    "derivative",
    "binomial_coefficient",
    "can_compose_binomial",
    "as_exponent",
]


class CompositionError(ValueError):
    """Raised when ``B_a o f`` does not exist as a formal power series."""

    def __init__(self, verdict: "ExistenceVerdict", message: str | None = None):
        self.verdict = verdict
        if message is None:
            message = (
                "composition B_a o f does not exist: requires |f(0)| < 1 "
                "for a non-natural exponent"
            )
        super().__init__(message)


class Series:
    """Immutable truncated power series ``c_0 + c_1 z + ... + c_N z**N``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs, order: int | None = None):
        c = np.array(coeffs, dtype=complex).ravel()
        if order is not None:
            if order < 0:
                raise ValueError("order must be nonnegative")
            if len(c) > order + 1:
                c = c[: order + 1]
            elif len(c) < order + 1:
                c = np.concatenate([c, np.zeros(order + 1 - len(c), dtype=complex)])
        if len(c) == 0:
            raise ValueError("a series needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")
        c.flags.writeable = False
        self._c = c

    @classmethod
    def zero(cls, order: int) -> "Series":
        return cls([], order=order)

    @classmethod
    def one(cls, order: int) -> "Series":
        return cls([1.0], order=order)

    @classmethod
    def variable(cls, order: int) -> "Series":
        """The series ``z`` truncated at ``order``."""
        return cls([0.0, 1.0], order=order)

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, n):
        return self._c[n]

    def __iter__(self):
        return iter(self._c)

    def __repr__(self) -> str:
        return f"Series({self._c.tolist()!r})"

    def truncate(self, order: int) -> "Series":
        """Drop (or zero-pad up to) terms beyond ``z**order``."""
        return Series(self._c, order=order)

    def __call__(self, x):
        """Evaluate the truncated polynomial at ``x`` by Horner's rule."""
        acc = 0j
        for coef in self._c[::-1]:
            acc = acc * x + coef
        return acc

    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            _check_orders(self, other)
            return other
        if isinstance(other, numbers.Number):
            return Series([other], order=self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Series(self._c + other._c)

    __radd__ = __add__

    def __neg__(self):
        return Series(-self._c)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Series(self._c - other._c)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return Series(self._c * other)
        if isinstance(other, Series):
            return cauchy_product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return Series(self._c * other)
        return NotImplemented


def _check_orders(f: Series, g: Series) -> None:
    if f.order != g.order:
        raise ValueError(f"order mismatch: {f.order} != {g.order}")


def cauchy_product(f: Series, g: Series) -> Series:
    """Product of two series of the same order, truncated at that order."""
    _check_orders(f, g)
    return Series(np.convolve(f.coeffs, g.coeffs)[: f.order + 1])


def derivative(f: Series) -> Series:
    """Formal derivative; the result has order ``f.order - 1``."""
    if f.order < 1:
        raise ValueError("derivative needs a series of order >= 1")
    n = np.arange(1, f.order + 1)
    return Series(n * f.coeffs[1:])


def _natural_value(a) -> int | None:
    """Return ``int(a)`` if ``a`` is exactly a nonnegative integer, else None."""
    a = complex(a)
    if a.imag != 0 or a.real < 0 or not a.real.is_integer():
        return None
    return int(a.real)


def binomial_coefficient(a, n: int) -> complex:
    """Generalized binomial coefficient ``a (a-1) ... (a-n+1) / n!``.

    The falling factorial stops at the first exactly-zero factor, so
    ``binomial_coefficient(k, n)`` is exactly 0 whenever ``k`` is a
    natural number below ``n``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    a = complex(a)
    k = _natural_value(a)
    if k is not None and k < n:
        return 0j
    if k is not None:
        return complex(math.comb(k, n))
    acc = 1 + 0j
    for j in range(n):
        acc *= (a - j) / (j + 1)
    return acc


@dataclass(frozen=True)
class BinomialExponent:
    """Exponent of the binomial series ``B_a``."""

    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        if not (math.isfinite(self.value.real) and math.isfinite(self.value.imag)):
            raise ValueError("exponent must be finite")

    @property
    def is_natural(self) -> bool:
        """True iff the exponent is a positive integer."""
        k = _natural_value(self.value)
        return k is not None and k > 0

    @property
    def natural_value(self) -> int | None:
        return _natural_value(self.value)


def as_exponent(a) -> BinomialExponent:
    return a if isinstance(a, BinomialExponent) else BinomialExponent(a)


class ExistenceReason(enum.Enum):
    ModulusLessThanOne = "modulus_less_than_one"
    NaturalExponentPolynomial = "natural_exponent_polynomial"
    ConstantSeriesConvergent = "constant_series_convergent"
    Fails = "fails"


@dataclass(frozen=True)
class ExistenceVerdict:
    exists: bool
    reason: ExistenceReason

    def __bool__(self) -> bool:
        return self.exists


def can_compose_binomial(f: Series, a) -> ExistenceVerdict:
    """Decide whether ``B_a o f`` exists.

    Natural exponents (including ``a = 0``) make ``B_a`` a polynomial, so
    the composition always exists. Otherwise it exists iff ``|f(0)| < 1``.
    A constant ``f`` is judged by the same open-disk rule; the boundary
    circle is rejected even where the scalar series happens to converge.
    """
    a = as_exponent(a)
    if a.natural_value is not None:
        return ExistenceVerdict(True, ExistenceReason.NaturalExponentPolynomial)
    if abs(f.coeffs[0]) < 1:
        if f.order == 0 or not np.any(f.coeffs[1:]):
            return ExistenceVerdict(True, ExistenceReason.ConstantSeriesConvergent)
        return ExistenceVerdict(True, ExistenceReason.ModulusLessThanOne)
    return ExistenceVerdict(False, ExistenceReason.Fails)
