import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpsparse.errors import CapExceeded, NonpositiveP
from lpsparse.khintchine import (
    RademacherInstance,
    compositions,
    gray_code,
    gray_flips,
    haagerup_constant,
    khintchine_bound_check,
    khintchine_sum_even_exact,
    khintchine_sum_exhaustive,
    multinomial,
    multinomial_ratio,
    multinomial_ratio_max,
    partitions,
    signed_sums,
)


def brute_moment(c, p):
    """Independent oracle: plain loop over itertools.product of signs."""
    total = math.fsum(
        abs(math.fsum(ci * e for ci, e in zip(c, eps))) ** p
        for eps in itertools.product((1, -1), repeat=len(c))
    )
    return total / 2 ** len(c)


def brute_ratio_max(k, n):
    return max(multinomial_ratio(t) for t in compositions(k, n))


# magnitudes below 1e-3 would underflow |sum|^p for the larger p used here
coefficient = st.one_of(st.just(0.0), st.floats(1e-3, 10), st.floats(-10, -1e-3))
coeffs = st.lists(coefficient, min_size=1, max_size=9)


class TestGray:
    def test_single_bit_steps(self):
        seen = {0}
        state = 0
        for bit, new in gray_flips(6):
            state ^= 1 << bit
            assert (state >> bit) & 1 == new
            seen.add(state)
        assert seen == set(range(64))

    def test_gray_code_values(self):
        assert [gray_code(i) for i in range(8)] == [0, 1, 3, 2, 6, 7, 5, 4]

    def test_signed_sums_cover_all_patterns(self):
        c = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0]
        sums = np.concatenate(list(signed_sums(c)))
        expect = sorted(sum(ci * e for ci, e in zip(c, eps)) for eps in itertools.product((1, -1), repeat=10))
        np.testing.assert_array_equal(np.sort(sums), expect)


class TestExhaustive:
    def test_single(self):
        assert khintchine_sum_exhaustive([1], 2) == 1

    def test_two_ones_fourth(self):
        # (16 + 0 + 0 + 16) / 4
        assert khintchine_sum_exhaustive([1, 1], 4) == 8

    def test_three_four(self):
        assert khintchine_sum_exhaustive([3, 4], 2) == 25

    def test_cap(self):
        with pytest.raises(CapExceeded):
            khintchine_sum_exhaustive([1.0] * 25, 2)
        with pytest.raises(CapExceeded):
            khintchine_sum_exhaustive([1.0] * 5, 2, max_n=4)

    @pytest.mark.parametrize("n", [1, 3, 8, 9, 12])
    @pytest.mark.parametrize("p", [1, 2.5, 3, 6])
    def test_matches_brute_force(self, n, p):
        c = np.random.default_rng(n).normal(size=n).tolist()
        assert khintchine_sum_exhaustive(c, p) == pytest.approx(brute_moment(c, p), rel=1e-12)

    def test_equal_coefficients_fourth_moment(self):
        # E(sum eps)^4 = 3N^2 - 2N, scaled by 1/N^2
        for n in (1, 2, 5, 16):
            s = khintchine_sum_exhaustive([1 / math.sqrt(n)] * n, 4)
            assert s == pytest.approx(3 - 2 / n, rel=1e-12)

    def test_large_n_orthogonality(self):
        c = np.random.default_rng(5).normal(size=20)
        assert khintchine_sum_exhaustive(c, 2) == pytest.approx(float(np.sum(c**2)), rel=1e-12)

    @given(coeffs)
    def test_orthogonality(self, c):
        s2 = khintchine_sum_exhaustive(c, 2)
        expect = math.fsum(x * x for x in c)
        assert abs(s2 - expect) <= 1e-12 * expect + 1e-300

    @given(coeffs, st.floats(1, 8), st.randoms(use_true_random=False))
    def test_symmetry(self, c, p, rnd):
        base = khintchine_sum_exhaustive(c, p)
        perm = list(c)
        rnd.shuffle(perm)
        flipped = [x if rnd.random() < 0.5 else -x for x in perm]
        assert khintchine_sum_exhaustive(flipped, p) == pytest.approx(base, rel=1e-12, abs=1e-300)

    @given(coeffs, st.floats(1, 8), st.floats(-5, 5))
    def test_scaling(self, c, p, t):
        lhs = khintchine_sum_exhaustive([t * x for x in c], p)
        rhs = abs(t) ** p * khintchine_sum_exhaustive(c, p)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-300)

    @given(coeffs, st.floats(1, 10), st.floats(1, 10))
    def test_lyapunov(self, c, p1, p2):
        p1, p2 = sorted((p1, p2))
        a = khintchine_sum_exhaustive(c, p1) ** (1 / p1)
        b = khintchine_sum_exhaustive(c, p2) ** (1 / p2)
        assert a <= b * (1 + 1e-10)


class TestEvenExact:
    def test_two_ones(self):
        # t = (2,0), (1,1), (0,2) give 1 + 6 + 1
        assert khintchine_sum_even_exact([1, 1], 2) == 8

    def test_single(self):
        assert khintchine_sum_even_exact([1], 1) == 1

    def test_three_ones(self):
        assert khintchine_sum_even_exact([1, 1, 1], 1) == 3

    def test_is_exact_rational(self):
        v = khintchine_sum_even_exact([Fraction(1, 3), Fraction(2, 7)], 2)
        assert isinstance(v, Fraction)
        assert v == Fraction(brute_moment_exact([Fraction(1, 3), Fraction(2, 7)], 4))

    def test_cap(self):
        with pytest.raises(CapExceeded):
            khintchine_sum_even_exact([1] * 30, 8, cap=1000)

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=20), min_size=1, max_size=10),
        st.integers(1, 4),
    )
    def test_oracle_equivalence(self, c, k):
        exact = khintchine_sum_even_exact(c, k)
        approx = khintchine_sum_exhaustive([float(x) for x in c], 2 * k)
        assert approx == pytest.approx(float(exact), rel=1e-10, abs=1e-300)


def brute_moment_exact(c, p):
    total = sum(sum(ci * e for ci, e in zip(c, eps)) ** p for eps in itertools.product((1, -1), repeat=len(c)))
    return Fraction(total, 2 ** len(c))


class TestRatioConstant:
    def test_k1_n2(self):
        assert multinomial_ratio_max(1, 2) == 1

    def test_k2_n2(self):
        # t = (1,1): 6/2 = 3; t = (2,0): 1
        assert multinomial_ratio_max(2, 2) == 3

    def test_k2_n1(self):
        assert multinomial_ratio_max(2, 1) == 1

    @pytest.mark.parametrize("k", range(1, 7))
    @pytest.mark.parametrize("n", range(1, 6))
    def test_partitions_match_compositions(self, k, n):
        assert multinomial_ratio_max(k, n) == brute_ratio_max(k, n)

    def test_exceeds_k_over_2_to_k(self):
        # documented: the measured constant exceeds (k/2)^k for small k
        assert multinomial_ratio_max(2, 2) > Fraction(2, 2) ** 2

    def test_partitions(self):
        assert sorted(partitions(4, 2)) == [(2, 2), (3, 1), (4,)]
        assert len(list(partitions(6, 6))) == 11

    def test_multinomial(self):
        assert multinomial(4, [2, 2]) == 6
        assert multinomial(10, [3, 3, 4]) == 4200

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.fractions(-3, 3, max_denominator=10), min_size=1, max_size=5), st.integers(1, 4))
    def test_bounds_even_moment(self, c, k):
        s = khintchine_sum_even_exact(c, k)
        norm2 = sum(x * x for x in c)
        assert s <= multinomial_ratio_max(k, len(c)) * norm2**k


class TestHaagerup:
    def test_p2(self):
        assert haagerup_constant(2) == 1

    def test_small_p(self):
        assert haagerup_constant(0.5) == 1 == haagerup_constant(1)

    def test_p4(self):
        # sqrt(2) (3/4)^(1/4), Gamma(5/2) = (3/4) sqrt(pi)
        assert haagerup_constant(4) == pytest.approx(math.sqrt(2) * 0.75**0.25, rel=1e-12)
        assert haagerup_constant(4) == pytest.approx(1.316074, abs=1e-6)

    def test_p3(self):
        assert haagerup_constant(3) == pytest.approx(math.sqrt(2) * math.pi ** (-1 / 6), rel=1e-12)
        assert haagerup_constant(3) == pytest.approx(1.16858, abs=1e-5)

    def test_continuous_at_two(self):
        assert haagerup_constant(2 + 1e-9) == pytest.approx(1, abs=1e-8)

    def test_nonpositive(self):
        with pytest.raises(NonpositiveP):
            haagerup_constant(0)

    @pytest.mark.parametrize("n", range(2, 15))
    def test_even_p_is_double_factorial(self, n):
        # Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!) gives B_{2n}^{2n} = (2n-1)!!
        p = 2 * n
        gamma_half = math.factorial(2 * n) * math.sqrt(math.pi) / (4**n * math.factorial(n))
        closed = math.sqrt(2) * (gamma_half / math.sqrt(math.pi)) ** (1 / p)
        assert haagerup_constant(p) == pytest.approx(closed, rel=1e-10)
        double_fact = math.prod(range(1, 2 * n, 2))
        assert haagerup_constant(p) ** p == pytest.approx(double_fact, rel=1e-10)

    @given(st.floats(1, 200))
    def test_below_sqrt_p(self, p):
        assert haagerup_constant(p) <= math.sqrt(p)


class TestBoundCheck:
    def test_two_ones(self):
        rep = khintchine_bound_check(RademacherInstance((1.0, 1.0), 4))
        assert rep.lhs == 8
        assert rep.bound_theorem == pytest.approx(64, rel=1e-15)
        assert rep.verdict
        assert rep.ratio_constant == 3

    def test_single_equality(self):
        rep = khintchine_bound_check(RademacherInstance((1.0,), 1))
        assert rep.lhs == 1 and rep.bound_theorem == 1 and rep.verdict

    def test_equal_sixteen(self):
        rep = khintchine_bound_check(RademacherInstance((0.25,) * 16, 4))
        assert rep.lhs == pytest.approx(2.875, abs=1e-12)
        assert rep.bound_haagerup == pytest.approx(3, rel=1e-12)
        assert rep.verdict_haagerup

    @settings(deadline=None)
    @given(coeffs, st.floats(1, 12))
    def test_bounds_hold(self, c, p):
        rep = khintchine_bound_check(RademacherInstance(tuple(c), p))
        assert rep.verdict
        assert rep.verdict_haagerup
