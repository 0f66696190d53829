import math
from collections import Counter

import numpy as np
import pytest

from millerfps import (
    CompositionError,
    PartitionTerm,
    Series,
    invert_series_explicit,
    invert_series_recursive,
    miller_explicit,
    miller_recursive,
    monomial_shift_coeffs,
    ode_epsilon_solution,
    partition_terms,
)
from millerfps.applications import half_exp_square, inverse_weight
from oracles import (
    compositions_brute,
    convolve_loops,
    inverse_by_compositions,
    max_rel,
    random_complex,
    rng,
)


class TestMonomialShift:
    def test_small_case(self):
        c = monomial_shift_coeffs(0.5, 3, 0.5, 6).coeffs
        assert c[0] == pytest.approx(1.5**0.5, rel=1e-15)
        assert c[3] == pytest.approx(0.5 * 1.5**-0.5, rel=1e-15)
        assert c[1] == c[2] == c[4] == c[5] == 0

    @pytest.mark.parametrize("nbar", [2, 3, 4, 5])
    def test_against_recursions(self, nbar):
        b0, a = 0.3 - 0.2j, -1.3 + 0.4j
        f = Series([b0] + [0] * (nbar - 1) + [1], order=12)
        got = monomial_shift_coeffs(b0, nbar, a, 12).coeffs
        assert max_rel(got, miller_recursive(f, a).coeffs) < 1e-11
        assert max_rel(got, miller_explicit(f, a).coeffs) < 1e-9
        support = [n for n in range(13) if got[n] != 0]
        assert all(n % nbar == 0 for n in support)

    def test_preconditions(self):
        with pytest.raises(CompositionError):
            monomial_shift_coeffs(1.2, 3, 0.5, 6)
        with pytest.raises(ValueError):
            monomial_shift_coeffs(0.2, 1, 0.5, 6)
        with pytest.raises(ValueError):
            monomial_shift_coeffs(0.2, 3, 2, 6)


class TestInverse:
    def test_one(self):
        assert invert_series_recursive(Series([1], order=5)).coeffs.tolist() == [1, 0, 0, 0, 0, 0]

    def test_one_plus_z(self):
        want = [(-1) ** n for n in range(7)]
        assert invert_series_recursive(Series([1, 1], order=6)).coeffs.tolist() == want
        assert invert_series_explicit(Series([1, 1], order=6)).coeffs.tolist() == want

    def test_product_is_unit(self):
        g = rng(1)
        for _ in range(10):
            b = random_complex(g, 11)
            b[0] = 1
            inv = invert_series_recursive(Series(b)).coeffs
            prod = convolve_loops(b, inv)
            assert np.max(np.abs(np.array(prod) - np.eye(1, 11)[0])) < 1e-12

    def test_general_constant_term(self):
        f = Series([2.0, 1.0, 3.0], order=6)
        prod = (f * invert_series_recursive(f)).coeffs
        assert np.allclose(prod, np.eye(1, 7)[0], atol=1e-14)

    def test_zero_constant(self):
        with pytest.raises(ZeroDivisionError):
            invert_series_recursive(Series([0, 1]))

    def test_explicit_first_coefficient(self):
        g = rng(2)
        b = random_complex(g, 4)
        b[0] = 1
        assert invert_series_explicit(Series(b)).coeffs[1] == -b[1]

    def test_explicit_agrees(self):
        g = rng(3)
        for _ in range(10):
            b = random_complex(g, 10)
            b[0] = 1
            f = Series(b)
            assert max_rel(invert_series_explicit(f).coeffs, invert_series_recursive(f).coeffs) < 1e-10

    def test_explicit_requires_unit_constant(self):
        with pytest.raises(ValueError):
            invert_series_explicit(Series([2, 1]))

    def test_inverse_is_binomial_minus_one(self):
        g = rng(4)
        b = random_complex(g, 9)
        b[0] = 1
        f = Series(b)
        assert max_rel(invert_series_recursive(f).coeffs, miller_recursive(f - 1, -1).coeffs) < 1e-12


class TestPartitions:
    @pytest.mark.parametrize("n", range(1, 16))
    def test_each_partition_once(self, n):
        terms = list(partition_terms(n))
        keys = [t.pairs for t in terms]
        assert len(keys) == len(set(keys))
        assert all(t.n == n for t in terms)
        # multisets of parts from brute-force compositions
        brute = {tuple(sorted(Counter(c).items())) for c in compositions_brute(n)}
        assert set(keys) == brute

    def test_invalid_term(self):
        with pytest.raises(ValueError):
            PartitionTerm(((2, 1), (1, 1)))

    @pytest.mark.parametrize("n", range(1, 11))
    def test_weights_count_signed_arrangements(self, n):
        # weight of prod b_{n_i}**k_i must equal the signed number of
        # compositions whose multiset of parts is that partition
        counted = Counter()
        for comp in compositions_brute(n):
            counted[tuple(sorted(Counter(comp).items()))] += (-1) ** len(comp)
        for t in partition_terms(n):
            assert inverse_weight(t) == counted[t.pairs]

    def test_mixed_part_weight(self):
        # b1^2 b2 in the 4th coefficient: orderings 112, 121, 211
        assert inverse_weight(PartitionTerm(((1, 2), (2, 1)))) == -3

    def test_explicit_vs_compositions_oracle(self):
        g = rng(5)
        b = random_complex(g, 9)
        b[0] = 1
        got = invert_series_explicit(Series(b)).coeffs
        ref = [inverse_by_compositions(b, n) for n in range(9)]
        assert max_rel(got, ref) < 1e-12


class TestOde:
    def test_half_exp_square(self):
        f = half_exp_square(6).coeffs
        assert f.tolist() == [0.5, 0, 0.5, 0, 0.25, 0, 1 / 12]

    def test_leading_coefficients(self):
        sol = ode_epsilon_solution(10, 0.1)
        c, a = sol.c_coeffs.coeffs, sol.a_coeffs.coeffs
        assert c[0] == pytest.approx(1.2247448713915900, abs=5e-15)
        assert c[2] == pytest.approx(0.2041241452319310, abs=5e-15)
        assert c[10] == pytest.approx(-0.0000511885395065, abs=1e-16)
        assert a[0] == 1
        assert a[1] == pytest.approx(1.2247448713915900, abs=5e-15)
        assert a[2] == pytest.approx(0.75, abs=5e-15)
        assert a[3] == pytest.approx(0.3742275995918740, abs=5e-15)

    def test_series_solves_the_equation(self):
        sol = ode_epsilon_solution(15, 0.1)
        y, F = sol.a_coeffs, sol.c_coeffs
        dy = np.arange(1, 16) * y.coeffs[1:]
        Fy = convolve_loops(F.coeffs[:15], y.coeffs[:15])
        assert np.max(np.abs(dy - Fy)) < 1e-15

    def test_grid(self):
        sol = ode_epsilon_solution(20, 0.01)
        assert len(sol.grid) == 101
        x0, y0, r0 = sol.grid[0]
        assert (x0, y0, r0) == (0.0, 1.0, 0.0)
        assert sol.grid[1][1] == pytest.approx(1.01232282472150, abs=1e-14)
        assert sol.grid[50][2] == pytest.approx(-1.07172e-11, rel=1e-3)

    def test_residual_at_origin_is_exact(self):
        for N in (1, 5, 20):
            assert ode_epsilon_solution(N, 0.5).grid[0][2] == 0

    def test_bad_args(self):
        with pytest.raises(ValueError):
            ode_epsilon_solution(0, 0.01)
        with pytest.raises(ValueError):
            ode_epsilon_solution(5, 0)
