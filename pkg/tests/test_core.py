import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbmtail.core import (EstimatorPath, Sample, SecondOrderModel, TailEstimate, k_of_s,
                          make_sample, parse_values, read_values, s_of_k)
from rbmtail.errors import DomainError, EmptyAfterFiltering, InputFormatError


class TestMakeSample:
    def test_drops_nonpositive_and_sorts(self):
        smp = make_sample([-1, 0, 2, 1, 3])
        assert smp.values.tolist() == [1, 2, 3]
        assert smp.n_dropped_nonpositive == 2
        assert smp.n_raw == 5

    def test_cap_keeps_largest(self):
        smp = make_sample([1, 2, 3, 4, 5], cap=3)
        assert smp.values.tolist() == [3, 4, 5]
        assert smp.n_capped == 2

    def test_all_negative_raises(self):
        with pytest.raises(EmptyAfterFiltering):
            make_sample([-1, -2])

    def test_single_positive_raises(self):
        with pytest.raises(EmptyAfterFiltering):
            make_sample([-1, 3.0])

    def test_empty_raises(self):
        with pytest.raises(EmptyAfterFiltering):
            make_sample([])

    def test_values_are_read_only(self):
        smp = make_sample([1.0, 2.0])
        with pytest.raises(ValueError):
            smp.values[0] = 5.0

    def test_ties_allowed(self):
        assert make_sample([2.0, 2.0, 2.0]).n == 3

    def test_direct_construction_checks_counts(self):
        with pytest.raises(DomainError):
            Sample(np.array([1.0, 2.0]), n_raw=5)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=60),
           st.one_of(st.none(), st.integers(2, 30)))
    def test_idempotent_and_accounted(self, raw, cap):
        try:
            smp = make_sample(raw, cap=cap)
        except EmptyAfterFiltering:
            assert sum(1 for x in raw if x > 0) < 2
            return
        again = make_sample(smp.values, cap=cap)
        assert np.array_equal(again.values, smp.values)
        assert smp.n_raw == smp.n + smp.n_dropped_nonpositive + smp.n_capped
        assert smp.n >= 2
        assert np.all(smp.values > 0)
        assert np.all(np.diff(smp.values) >= 0)


class TestKOfS:
    @pytest.mark.parametrize("s,n,expected", [(500, 500, 2.0), (4, 2000, 1000.0), (2, 200, 200.0)])
    def test_values(self, s, n, expected):
        assert k_of_s(s, n) == expected

    @pytest.mark.parametrize("s", [1, 0, 11])
    def test_out_of_range(self, s):
        with pytest.raises(DomainError):
            k_of_s(s, 10)

    @given(st.integers(3, 5000))
    def test_strictly_decreasing(self, n):
        ks = [k_of_s(s, n) for s in range(2, min(n, 50) + 1)]
        assert all(a > b for a, b in zip(ks, ks[1:]))
        assert k_of_s(2, n) == n
        assert k_of_s(n, n) == 2

    def test_s_of_k_round_trip(self):
        for s in range(2, 101):
            assert s_of_k(k_of_s(s, 100), 100) == s


class TestTypes:
    def test_stderr(self):
        est = TailEstimate(gamma_hat=0.5, k_hat=25.0)
        assert est.stderr == pytest.approx(0.1)

    def test_model_validation(self):
        with pytest.raises(DomainError):
            SecondOrderModel(gamma=0.0, rho=-1.0)
        with pytest.raises(DomainError):
            SecondOrderModel(gamma=1.0, rho=0.5)

    def test_path_requires_increasing_k(self):
        with pytest.raises(DomainError):
            EstimatorPath.from_arrays("rbm", [2, 3], [4.0, 4.0], [1.0, 1.0])
        with pytest.raises(DomainError):
            EstimatorPath.from_arrays("rbm", [], [], [])
        with pytest.raises(DomainError):
            EstimatorPath.from_arrays("rbm", [3, 2], [2.0, 3.0], [1.0, math.nan])


class TestInputFormat:
    def test_parses_decimals(self):
        assert parse_values(["1", "2.5", "-3e2", ".5", "4."]) == [1.0, 2.5, -300.0, 0.5, 4.0]

    @pytest.mark.parametrize("bad", ["abc", "1,5", "nan", "inf", "", "1 2", "0x10"])
    def test_rejects_with_line_number(self, bad):
        with pytest.raises(InputFormatError) as info:
            parse_values(["1.0", bad])
        assert info.value.lineno == 2

    def test_read_file(self, tmp_path):
        f = tmp_path / "x.txt"
        f.write_text("1.5\n2.5\n")
        assert read_values(f) == [1.5, 2.5]
