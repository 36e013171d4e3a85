import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ihwt.core import UnsupportedWeightsError, WeightVector, EnumerationLimitError, weighted_l0
from ihwt.thresholding import (
    exact_weighted_threshold,
    hard_threshold,
    projection_error,
    surrogate_weighted_threshold,
    weighted_threshold,
)
from oracles import brute_projection_error

SQ2, SQ3 = math.sqrt(2), math.sqrt(3)


@st.composite
def instances(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    # a small value pool makes ties common
    x = draw(arrays(np.float64, n, elements=st.sampled_from([0.0, 1.0, -1.0, 2.0, 3.0, -3.0, 0.5, 7.25])
                    | st.floats(-10, 10)))
    sq = draw(st.lists(st.integers(1, 10), min_size=n, max_size=n))
    s = draw(st.integers(0, 3 * n))
    return x, WeightVector(np.sqrt(sq)), s


def spike_pair():
    x = np.zeros(100)
    x[0], x[99] = 10.0, 99.0
    return x, WeightVector.sqrt_index(100)


class TestHardThreshold:
    def test_single_max(self):
        assert hard_threshold([3, -5, 1], 1).tolist() == [0, -5, 0]

    def test_identity(self):
        assert hard_threshold([1, 2, 3], 3).tolist() == [1, 2, 3]

    def test_tie_keeps_lower_index(self):
        assert hard_threshold([2, 2, 1], 1).tolist() == [2, 0, 0]

    def test_range(self):
        with pytest.raises(ValueError):
            hard_threshold([1, 2], 3)


class TestExactWeighted:
    def test_three_atom_example(self):
        z = exact_weighted_threshold([9, 9, 10], [1, SQ2, SQ3], 3, mode="exact_enum")
        assert z.tolist() == [9, 9, 0]
        assert projection_error([9, 9, 10], z) == 10.0
        assert projection_error([9, 9, 10], [0, 0, 10]) == pytest.approx(9 * SQ2, rel=1e-15)

    def test_three_atom_example_dp(self):
        z = exact_weighted_threshold([9, 9, 10], [1, 2 ** 0.5, 3 ** 0.5], 3)
        assert z.tolist() == [9, 9, 0]

    def test_beats_magnitude_sort(self):
        # sorting by magnitude takes the 10 first, which uses the whole budget
        x, w = np.array([9.0, 9.0, 10.0]), [1, SQ2, SQ3]
        naive = np.array([0.0, 0.0, 10.0])
        assert projection_error(x, exact_weighted_threshold(x, w, 3, "exact_enum")) < projection_error(x, naive)

    def test_spike_pair(self):
        x, w = spike_pair()
        z = exact_weighted_threshold(x, w, 100)
        expected = np.zeros(100)
        expected[99] = 99.0
        assert np.array_equal(z, expected)

    def test_dp_requires_integer_squares(self):
        with pytest.raises(UnsupportedWeightsError):
            exact_weighted_threshold([1, 2], [1.2, 1.0], 2)

    def test_enum_refuses_large(self):
        with pytest.raises(EnumerationLimitError):
            exact_weighted_threshold(np.ones(30), np.ones(30), 3, "exact_enum")

    def test_fractional_budget_floors(self):
        z = exact_weighted_threshold([1, 2, 3], [1, 1, 1], 2.999)
        assert z.tolist() == [0, 2, 3]

    def test_budget_slack(self):
        # a budget a hair under an integer still admits that integer
        w = np.sqrt([1.0, 1.0, 1.0])
        assert exact_weighted_threshold([1, 1, 1], w, 3.0 - 1e-13).tolist() == [1, 1, 1]

    @given(st.lists(st.floats(-50, 50), min_size=1, max_size=12), st.integers(0, 12))
    def test_unit_weights_reduce_to_hard(self, x, s):
        s = min(s, len(x))
        w = np.ones(len(x))
        h = hard_threshold(x, s)
        assert np.array_equal(exact_weighted_threshold(x, w, s), h)
        assert np.array_equal(exact_weighted_threshold(x, w, s, "exact_enum"), h)
        assert np.array_equal(surrogate_weighted_threshold(x, w, s), h)

    @given(instances())
    def test_dp_equals_enum_equals_bruteforce(self, inst):
        x, w, s = inst
        dp = exact_weighted_threshold(x, w, s, "exact_dp")
        en = exact_weighted_threshold(x, w, s, "exact_enum")
        assert np.array_equal(dp, en)
        sq = [float(v) for v in w.squared]
        assert projection_error(x, dp) == pytest.approx(brute_projection_error(x, sq, s), rel=1e-9, abs=1e-9)

    @given(instances())
    def test_surrogate_never_better(self, inst):
        x, w, s = inst
        exact = projection_error(x, exact_weighted_threshold(x, w, s))
        assert projection_error(x, surrogate_weighted_threshold(x, w, s)) >= exact - 1e-12 * max(exact, 1)

    @pytest.mark.parametrize("mode", ["exact_dp", "exact_enum", "surrogate"])
    @given(inst=instances())
    def test_feasible_selecting_idempotent(self, mode, inst):
        x, w, s = inst
        z = weighted_threshold(x, w, s, mode)
        assert weighted_l0(z, w) <= s + 1e-12 * max(s, 1)
        nz = z != 0
        assert np.array_equal(z[nz], x[nz])
        assert np.array_equal(weighted_threshold(z, w, s, mode), z)


class TestSurrogate:
    def test_spike_pair(self):
        x, w = spike_pair()
        z = surrogate_weighted_threshold(x, w, 100)
        expected = np.zeros(100)
        expected[0] = 10.0
        assert np.array_equal(z, expected)

    def test_skip_versus_prefix_stop(self):
        # ratios 5, 4, 1: atom 1 (cost 4) does not fit after atom 0, atom 2 does
        x, w = [5.0, 8.0, 1.0], [1.0, 2.0, 1.0]
        assert surrogate_weighted_threshold(x, w, 2).tolist() == [5, 0, 1]
        assert surrogate_weighted_threshold(x, w, 2, prefix_stop=True).tolist() == [5, 0, 0]

    @pytest.mark.parametrize("weights", ["sqrt", "blocks"])
    @given(a=st.integers(1, 10), b=st.integers(1, 3), n=st.integers(5, 18), s=st.integers(0, 30))
    def test_matches_exact_on_power_laws(self, weights, a, b, n, s):
        x = a / np.arange(1, n + 1, dtype=float) ** b
        if weights == "sqrt":
            w = WeightVector.sqrt_index(n)
        else:
            k = max(1, (n - 1) // 2)
            w = WeightVector(np.r_[np.ones(k), 3 * np.ones(k), 10 * np.ones(n - 2 * k)])
        exact = exact_weighted_threshold(x, w, s, "exact_enum")
        assert np.array_equal(surrogate_weighted_threshold(x, w, s), exact)


class TestProjectionError:
    def test_zero(self):
        assert projection_error([1, 2], [1, 2]) == 0.0

    def test_mismatch(self):
        with pytest.raises(ValueError):
            projection_error([1, 2], [1, 2, 3])
