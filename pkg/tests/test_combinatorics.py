import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ihwt.combinatorics import (
    count_supports,
    distinct_partitions,
    enumerate_supports,
    max_support_size,
    maximal_supports,
)
from ihwt.core import EnumerationLimitError, UnsupportedWeightsError, WeightVector
from oracles import distinct_partitions_product, feasible_subsets

SQ2, SQ3 = math.sqrt(2), math.sqrt(3)

int_weights = st.lists(st.integers(1, 10), min_size=1, max_size=12).map(
    lambda sq: WeightVector(np.sqrt(sq))
)


class TestMaxSupportSize:
    def test_unit_weights(self):
        assert max_support_size(np.ones(50), 7) == 7

    def test_sqrt_weights(self):
        # 1 + 2 + ... + 13 = 91 <= 100 < 105
        assert max_support_size(WeightVector.sqrt_index(100), 100) == 13

    def test_fractional_budget(self):
        assert max_support_size([1, SQ2, SQ3], 2.5) == 1

    @given(int_weights, st.integers(0, 30))
    def test_matches_enumeration(self, w, s):
        biggest = max(len(t) for t in enumerate_supports(w, s))
        assert max_support_size(w, s) == biggest


class TestCountSupports:
    def test_binomial(self):
        assert count_supports(np.ones(5), 2) == 10

    @pytest.mark.parametrize("n", [1, 7, 20])
    def test_binomial_all_orders(self, n):
        for k in range(n + 1):
            assert count_supports(np.ones(n), k) == math.comb(n, k)

    def test_distinct_partitions_of_100(self):
        # published figure is 444,794; both independent counts give 444,793
        w = WeightVector.sqrt_index(100)
        assert count_supports(w, 100) == 444793
        assert distinct_partitions(100) == 444793
        assert distinct_partitions_product(100) == 444793

    def test_distinct_partitions_of_1000(self):
        w = WeightVector.sqrt_index(1000)
        assert count_supports(w, 1000) == 8635565795744155161506

    def test_small_partition_numbers(self):
        # A000009
        expected = [1, 1, 1, 2, 2, 3, 4, 5, 6, 8, 10, 12, 15, 18, 22, 27]
        assert [distinct_partitions(n) for n in range(16)] == expected
        assert [distinct_partitions_product(n) for n in range(16)] == expected

    @pytest.mark.parametrize("n", [37, 250, 613])
    def test_recurrence_matches_product(self, n):
        assert distinct_partitions(n) == distinct_partitions_product(n)

    def test_enumeration_agrees_at_small_budget(self):
        w = WeightVector.sqrt_index(20)
        for s in range(21):
            assert count_supports(w, s, method="enumerate") == count_supports(w, s)

    def test_non_integer_squares(self):
        with pytest.raises(UnsupportedWeightsError):
            count_supports([1.0, 1.5], 2)

    def test_fractional_budget_exact_mode(self):
        assert count_supports(np.ones(4), 2.5) == 0
        assert count_supports(np.ones(4), 2.5, mode="at_most") == 11

    def test_empty_set_counted(self):
        assert count_supports([2.0, 3.0], 0) == 1
        assert count_supports([2.0, 3.0], 0, mode="at_most") == 1

    @given(int_weights, st.integers(0, 40))
    def test_at_most_matches_enumeration(self, w, s):
        assert count_supports(w, s, mode="at_most") == sum(1 for _ in enumerate_supports(w, s))

    @given(int_weights, st.integers(0, 40))
    def test_exact_matches_bruteforce(self, w, s):
        sq = [int(round(v)) for v in w.squared]
        brute = sum(1 for sub in feasible_subsets(sq, s) if sum(sq[j] for j in sub) == s)
        assert count_supports(w, s) == brute

    @given(int_weights, st.integers(0, 40), st.integers(0, 40))
    def test_monotone_in_budget(self, w, s1, s2):
        lo, hi = sorted((s1, s2))
        assert count_supports(w, lo, mode="at_most") <= count_supports(w, hi, mode="at_most")


class TestEnumerate:
    def test_three_atom_example(self):
        got = list(enumerate_supports([1, SQ2, SQ3], 3))
        assert got == [(), (0,), (0, 1), (1,), (2,)]

    def test_unit_weights_all_subsets(self):
        assert len(list(enumerate_supports(np.ones(3), 3, n_limit=3))) == 8

    def test_zero_budget(self):
        assert list(enumerate_supports([1, 2, 3], 0)) == [()]

    def test_refuses_large(self):
        with pytest.raises(EnumerationLimitError):
            next(enumerate_supports(np.ones(30), 2))

    @given(int_weights, st.integers(0, 25))
    def test_lexicographic_and_unique(self, w, s):
        got = list(enumerate_supports(w, s))
        assert got == sorted(set(got))
        assert set(got) == set(feasible_subsets([float(v) for v in w.squared], s))

    @given(int_weights, st.integers(0, 25))
    def test_maximal_cover_everything(self, w, s):
        maximal = [set(m) for m in maximal_supports(w, s)]
        assert maximal
        for sub in enumerate_supports(w, s):
            assert any(set(sub) <= m for m in maximal)
