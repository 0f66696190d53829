"""Truncated formal power series and the generalized J.C.P. Miller formula."""

from .applications import (
    OdeSolution,
    PartitionTerm,
    invert_series_explicit,
    invert_series_recursive,
    monomial_shift_coeffs,
    ode_epsilon_solution,
    partition_terms,
)
from .miller import miller_original, miller_recursive, principal_power
from .multivar import (
    MultiSeries,
    axis_discrepancy,
    multivar_cauchy_product,
    multivar_miller_recursive,
    partial_derivative,
)
from .series import (
    BinomialExponent,
    CompositionError,
    ExistenceReason,
    ExistenceVerdict,
    Series,
    binomial_coefficient,
    can_compose_binomial,
    cauchy_product,
    derivative,
)
from .trudi import (
    CompositionIter,
    HessenbergMatrix,
    miller_explicit,
    solve_miller_system,
    trudi_det,
    trudi_det_constant_superdiag,
)

__version__ = "0.1.0"
