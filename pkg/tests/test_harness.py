import json
import math

import numpy as np
import pytest

from rbmtail.errors import DomainError, UnknownDistribution
from rbmtail.harness import (ROW_COLUMNS, BenchConfig, replication_stream, rmse_bias,
                             rows_to_csv, rows_to_json, run_benchmark)


class TestRmseBias:
    def test_zeros(self):
        assert rmse_bias([0.0, 0.0, 0.0]) == (0.0, 0.0, 0.0, 0.0)

    def test_symmetric(self):
        rmse, _, bias, _ = rmse_bias([1.0, -1.0])
        assert (rmse, bias) == (1.0, 0.0)

    def test_single(self):
        assert rmse_bias([-0.3]) == (0.3, 0.0, -0.3, 0.0)

    def test_empty(self):
        with pytest.raises(DomainError):
            rmse_bias([])

    def test_normal_moments(self):
        e = np.random.default_rng(0).normal(0.1, 0.05, 100_000)
        rmse, rmse_se, bias, bias_se = rmse_bias(e)
        assert abs(bias - 0.1) < 4 * bias_se
        assert abs(rmse - math.hypot(0.1, 0.05)) < 4 * rmse_se
        assert rmse >= abs(bias)


class TestConfig:
    def test_validation(self):
        with pytest.raises(DomainError):
            BenchConfig("frechet:2", 200, 0)
        with pytest.raises(DomainError):
            BenchConfig("frechet:2", 3, 10)
        with pytest.raises(DomainError):
            BenchConfig("frechet:2", 200, 10, estimators=("dk",))
        with pytest.raises(UnknownDistribution):
            BenchConfig("burr:1", 200, 10)

    def test_streams_differ(self):
        a = replication_stream(7, 0, "frechet:2").generate_state(2)
        b = replication_stream(7, 1, "frechet:2").generate_state(2)
        c = replication_stream(7, 0, "t:6").generate_state(2)
        assert not np.array_equal(a, b) and not np.array_equal(a, c)


class TestRunBenchmark:
    def test_single_replication(self):
        rows = run_benchmark(BenchConfig("frechet:2", 200, 1, seed=3))
        for row in rows:
            assert row.rmse == pytest.approx(abs(row.bias))
            assert row.se_undefined
            assert row.rmse_se == 0.0 and row.bias_se == 0.0

    def test_accounting_and_invariants(self):
        rows = run_benchmark(BenchConfig("t:6", 100, 30, seed=5))
        assert [r.estimator for r in rows] == ["rbm", "gh"]
        for row in rows:
            assert row.replications + row.excluded == 30
            assert row.rmse >= abs(row.bias)
            assert row.rmse_se > 0 and row.bias_se > 0
            assert row.n_semantics == "pre_filter"

    def test_workers_bit_identical(self):
        config = BenchConfig("burr:1:0.5:2", 150, 24, seed=11)
        one = rows_to_csv(run_benchmark(config, workers=1))
        assert rows_to_csv(run_benchmark(config, workers=3)) == one

    def test_csv_and_json(self):
        config = BenchConfig("frechet:2", 100, 5, estimators=("rbm",), seed=2)
        rows = run_benchmark(config)
        lines = rows_to_csv(rows).splitlines()
        assert lines[0] == ",".join(ROW_COLUMNS)
        assert len(lines) == 2
        doc = json.loads(rows_to_json(rows, config))
        assert doc["seed"] == 2
        assert doc["rows"][0]["estimator"] == "rbm"
        assert "version" in doc
