import math

import numpy as np
import pytest

from millerfps import (
    CompositionError,
    MultiSeries,
    Series,
    axis_discrepancy,
    miller_recursive,
    multivar_cauchy_product,
    multivar_miller_recursive,
    partial_derivative,
)
from millerfps.multivar import MultiIndexLayout
from oracles import (
    all_indices,
    compose_partial_sum,
    falling_binomial,
    max_rel,
    multivar_convolve_loops,
    random_complex,
    random_in_disk,
    rng,
)


def random_multi(gen, q, N, theta_radius=0.8):
    layout = MultiIndexLayout(q, N)
    c = random_complex(gen, len(layout))
    c[0] = random_in_disk(gen, theta_radius)
    return MultiSeries(q, N, c)


def as_dict(f):
    return {c: v for c, v in f.items()}


class TestLayout:
    def test_graded_lex(self):
        assert MultiIndexLayout(2, 2).indices == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]

    @pytest.mark.parametrize("q,N", [(1, 5), (2, 4), (3, 4), (4, 3)])
    def test_size_and_bijection(self, q, N):
        lay = MultiIndexLayout(q, N)
        assert len(lay) == math.comb(N + q, q)
        assert sorted(lay.indices) == sorted(all_indices(q, N))
        assert all(lay.rank[c] == k for k, c in enumerate(lay.indices))

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            MultiSeries(2, 2, [1, 2, 3])


class TestProduct:
    def test_two_linear_factors(self):
        p = MultiSeries.from_dict(2, 2, {(0, 0): 1, (1, 0): 1}) * MultiSeries.from_dict(
            2, 2, {(0, 0): 1, (0, 1): 1}
        )
        want = {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1}
        for c, v in p.items():
            assert v == want.get(c, 0)

    def test_identity(self):
        f = random_multi(rng(1), 2, 5)
        one = MultiSeries.constant(2, 5)
        assert np.array_equal((f * one).coeffs, f.coeffs)

    def test_matches_direct_loops(self):
        g = rng(2)
        f, h = random_multi(g, 3, 4), random_multi(g, 3, 4)
        ref = multivar_convolve_loops(3, 4, as_dict(f), as_dict(h))
        got = multivar_cauchy_product(f, h)
        assert max_rel([got[c] for c in ref], list(ref.values())) < 1e-13

    def test_mismatch(self):
        with pytest.raises(ValueError):
            multivar_cauchy_product(MultiSeries(2, 3), MultiSeries(3, 3))
        with pytest.raises(ValueError):
            multivar_cauchy_product(MultiSeries(2, 3), MultiSeries(2, 2))


class TestPartialDerivative:
    def test_monomial(self):
        f = MultiSeries.from_dict(2, 3, {(2, 1): 1})
        d = partial_derivative(f, 1)
        assert d.order == 2
        assert {c: v for c, v in d.items() if v} == {(1, 1): 2}

    def test_constant(self):
        d = partial_derivative(MultiSeries.constant(3, 2, 4.0), 2)
        assert not np.any(d.coeffs)

    def test_bad_axis_or_order(self):
        with pytest.raises(ValueError):
            partial_derivative(MultiSeries(2, 2), 3)
        with pytest.raises(ValueError):
            partial_derivative(MultiSeries(2, 0), 1)

    @pytest.mark.parametrize("i", [1, 2, 3])
    def test_leibniz(self, i):
        g = rng(10 + i)
        f, h = random_multi(g, 3, 5), random_multi(g, 3, 5)
        lhs = partial_derivative(f * h, i)
        rhs = partial_derivative(f, i) * h.truncate(4) + f.truncate(4) * partial_derivative(h, i)
        scale = np.max(np.abs(rhs.coeffs))
        assert np.max(np.abs(lhs.coeffs - rhs.coeffs)) <= 1e-12 * scale


class TestMultivarMiller:
    def test_r_equals_one(self):
        f = random_multi(rng(3), 3, 4)
        h = multivar_miller_recursive(f, 1)
        ref = (1 + f).coeffs
        assert np.max(np.abs(h.coeffs - ref)) <= 1e-14 * np.max(np.abs(ref))

    def test_one_variable_reduction(self):
        g = rng(4)
        for _ in range(10):
            b = random_complex(g, 12)
            b[0] = random_in_disk(g, 0.9)
            a = complex(*g.uniform(-3, 3, 2))
            h = multivar_miller_recursive(MultiSeries(1, 11, b), a)
            assert max_rel(h.coeffs, miller_recursive(Series(b), a).coeffs) < 1e-11

    def test_linear_argument_closed_form(self):
        # (1 + t + x1 + x2)**r = sum_c binom(r, |c|) multinom(c) (1+t)**(r-|c|) X**c
        t, r = 0.4, 0.5
        f = MultiSeries.from_dict(2, 4, {(0, 0): t, (1, 0): 1, (0, 1): 1})
        h = multivar_miller_recursive(f, r)
        for c, v in h.items():
            d = sum(c)
            want = falling_binomial(r, d) * math.comb(d, c[0]) * (1 + t) ** (r - d)
            assert abs(v - want) <= 1e-12 * abs(want)

    def test_matches_composition_partial_sums(self):
        t, r = 0.4, 0.5
        fd = {(0, 0): t, (1, 0): 1.0, (0, 1): 1.0}
        f = MultiSeries.from_dict(2, 4, fd)
        ref = compose_partial_sum(2, 4, fd, lambda n: falling_binomial(r, n))
        h = multivar_miller_recursive(f, r)
        assert max_rel([h[c] for c in ref], list(ref.values())) < 1e-9

    def test_random_partial_sums(self):
        g = rng(44)
        f = random_multi(g, 2, 3, theta_radius=0.3)
        r = complex(*g.uniform(-2, 2, 2))
        ref = compose_partial_sum(2, 3, as_dict(f), lambda n: falling_binomial(r, n))
        h = multivar_miller_recursive(f, r)
        assert max_rel([h[c] for c in ref], list(ref.values())) < 1e-9

    def test_existence(self):
        f = MultiSeries.from_dict(2, 2, {(0, 0): 1.0, (1, 0): 1})
        with pytest.raises(CompositionError):
            multivar_miller_recursive(f, 0.5)
        # natural exponent is a polynomial: always defined
        multivar_miller_recursive(f, 2)

    @pytest.mark.parametrize("q", [2, 3])
    def test_axis_consistency(self, q):
        g = rng(50 + q)
        f = random_multi(g, q, 5)
        r = complex(*g.uniform(-2, 2, 2))
        assert axis_discrepancy(f, r) < 1e-10
        multivar_miller_recursive(f, r, cross_check=True)

    def test_prefix_property(self):
        g = rng(9)
        f = random_multi(g, 2, 6)
        r = -0.3 + 0.8j
        full = multivar_miller_recursive(f, r)
        for n in range(6):
            part = multivar_miller_recursive(f.truncate(n), r)
            for c, v in part.items():
                assert v == pytest.approx(full[c], rel=1e-13)

    @pytest.mark.parametrize("q,N", [(2, 4), (3, 3)])
    def test_chain_rule(self, q, N):
        g = rng(7 * q + N)
        f = random_multi(g, q, N)
        r = complex(*g.uniform(-2, 2, 2))
        h = multivar_miller_recursive(f, r)
        h1 = multivar_miller_recursive(f.truncate(N - 1), r - 1)
        for i in range(1, q + 1):
            lhs = partial_derivative(h, i)
            rhs = r * h1 * partial_derivative(f, i)
            assert max_rel(lhs.coeffs, rhs.coeffs) < 1e-9
