"""ALPT/logALPT arithmetic and replication aggregation."""

from __future__ import annotations

import math
import statistics

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cellsched import (
    AggregationError,
    FlowRecord,
    MetricsReport,
    ParameterError,
    UndefinedMetricError,
    aggregate,
    alpt,
    log_alpt,
    summarize,
)


def record(size, arrival, departure) -> FlowRecord:
    return FlowRecord(file_size=size, arrival=arrival, departure=departure)


record_lists = st.lists(
    st.builds(
        record,
        st.floats(min_value=1e-3, max_value=1e6),
        st.just(0),
        st.integers(min_value=1, max_value=10**6),
    ),
    min_size=1,
    max_size=40,
)


class TestFlowRecord:
    def test_sojourn_and_throughput(self):
        r = record(100.0, 3, 13)
        assert r.sojourn == 10
        assert r.perceived_throughput == 10.0

    def test_rejects_bad_fields(self):
        with pytest.raises(ParameterError):
            record(0.0, 0, 10)
        with pytest.raises(ParameterError):
            record(100.0, 5, 5)


class TestAlpt:
    def test_single_record(self):
        assert alpt([record(100.0, 0, 10)]) == 10.0

    def test_hand_mean(self):
        records = [record(100.0, 0, 10), record(200.0, 0, 40)]
        assert alpt(records) == pytest.approx(7.5)

    def test_unit_duration_contributes_size(self):
        assert alpt([record(123.25, 9, 10)]) == 123.25

    def test_empty_is_undefined(self):
        with pytest.raises(UndefinedMetricError):
            alpt([])

    @given(record_lists)
    def test_permutation_invariant(self, records):
        assert alpt(records) == pytest.approx(alpt(list(reversed(records))))


class TestLogAlpt:
    def test_hand_value(self):
        assert log_alpt([record(100.0, 0, 10)]) == pytest.approx(math.log(10.0))

    def test_log_of_one(self):
        assert log_alpt([record(7.0, 0, 7)]) == 0.0

    def test_symmetric_cancellation(self):
        records = [record(10.0, 0, 1), record(0.1, 0, 1)]
        assert log_alpt(records) == pytest.approx(0.0, abs=1e-12)

    def test_explicit_base(self):
        records = [record(100.0, 0, 10)]
        assert log_alpt(records, base=10.0) == pytest.approx(1.0)
        assert log_alpt(records, base=math.e) == pytest.approx(math.log(10.0))

    def test_empty_is_undefined(self):
        with pytest.raises(UndefinedMetricError):
            log_alpt([])

    @given(record_lists, st.floats(min_value=1e-3, max_value=1e3))
    def test_log_linearity_under_size_scaling(self, records, c):
        scaled = [record(r.file_size * c, r.arrival, r.departure) for r in records]
        assert log_alpt(scaled) == pytest.approx(
            log_alpt(records) + math.log(c), abs=1e-9
        )

    @given(record_lists)
    def test_geometric_mean_below_arithmetic(self, records):
        assert math.exp(log_alpt(records)) <= alpt(records) * (1.0 + 1e-12)


class TestSummarize:
    def test_bundles_metrics_and_counts(self):
        report = summarize([record(100.0, 0, 10)], unfinished=3)
        assert report == MetricsReport(
            alpt=10.0, log_alpt=pytest.approx(math.log(10.0)), completed=1, unfinished=3
        )

    def test_to_dict_fields(self):
        report = summarize([record(100.0, 0, 10)])
        assert set(report.to_dict()) == {"alpt", "log_alpt", "completed", "unfinished"}


class TestAggregate:
    @staticmethod
    def _report(value, completed=5, unfinished=1) -> MetricsReport:
        return MetricsReport(
            alpt=value, log_alpt=value, completed=completed, unfinished=unfinished
        )

    def test_identical_reports_have_zero_spread(self):
        agg = aggregate([self._report(4.0), self._report(4.0)])
        assert agg.alpt_mean == 4.0 and agg.alpt_std == 0.0
        assert agg.log_alpt_mean == 4.0 and agg.log_alpt_std == 0.0

    def test_two_value_hand_spread(self):
        agg = aggregate([self._report(3.0), self._report(5.0)])
        assert agg.alpt_mean == pytest.approx(4.0)
        assert agg.alpt_std == pytest.approx(math.sqrt(2.0), abs=1e-3)

    def test_three_value_hand_spread(self):
        agg = aggregate([self._report(1.0), self._report(2.0), self._report(3.0)])
        assert agg.log_alpt_mean == pytest.approx(2.0)
        assert agg.log_alpt_std == pytest.approx(1.0)

    def test_matches_statistics_module(self):
        values = [2.5, 3.5, 1.25, 4.0]
        agg = aggregate([self._report(v) for v in values])
        assert agg.alpt_mean == pytest.approx(statistics.fmean(values))
        assert agg.alpt_std == pytest.approx(statistics.stdev(values))

    def test_counts_accumulate(self):
        agg = aggregate([self._report(1.0, 5, 2), self._report(2.0, 7, 0)])
        assert agg.replications == 2
        assert agg.completed_total == 12
        assert agg.unfinished_total == 2

    def test_fewer_than_two_reports_rejected(self):
        with pytest.raises(AggregationError):
            aggregate([self._report(1.0)])
