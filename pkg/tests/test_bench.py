"""
Tests for the benchmark service and report output.
"""

import json
import logging

import pytest

from addchain.errors import InvalidInputError, ReportError
from addchain.models import AccumulatedResult, GaConfig, Method, Report
from addchain.schemas import AccumulatedResultSchema, RunStatsSchema
from addchain.services import bench
from addchain.services.baselines import binary_length
from addchain.services.chain_core import validate_chain
from addchain.services.report_service import (
    load_rows,
    read_report,
    render_report,
    single_row_report,
    write_report,
)
from config import TestingConfig


pytestmark = pytest.mark.bench

CI_SCALE = TestingConfig.BENCH_SCALES['ci']


@pytest.fixture
def bench_config():
    return GaConfig(population_size=20, max_generations=10, seed=1)


# ============================================================================
# Seeds & Statistics
# ============================================================================

@pytest.mark.unit
class TestDeriveSeed:
    """Test per-(run, exponent) seed derivation."""

    def test_deterministic(self):
        assert bench.derive_seed(1, 0, 97) == bench.derive_seed(1, 0, 97)

    def test_distinct_across_run_and_exponent(self):
        seeds = {bench.derive_seed(1, run, e) for run in range(5) for e in range(1, 50)}

        assert len(seeds) == 5 * 49

    def test_depends_on_master_seed(self):
        assert bench.derive_seed(1, 0, 97) != bench.derive_seed(2, 0, 97)

    def test_fits_64_bits(self):
        assert 0 <= bench.derive_seed(123, 4, 1 << 63) < 1 << 64


@pytest.mark.unit
class TestSummarize:
    """Test best/worst/average/median statistics."""

    def test_even_count_median(self):
        stats = bench.summarize('GADSA', 64, [4, 1, 3, 2])

        assert stats.median == 2.5
        assert stats.average == 2.5
        assert (stats.best, stats.worst, stats.runs) == (1, 4, 4)
        assert stats.totals == (4, 1, 3, 2)

    def test_two_decimals(self):
        assert bench.summarize('GADSA', 64, [1, 1, 2]).average == 1.33

    def test_requires_runs(self):
        with pytest.raises(InvalidInputError):
            bench.summarize('GADSA', 64, [])


# ============================================================================
# Accumulated Lengths
# ============================================================================

@pytest.mark.unit
class TestAccumulated:
    """Test accumulated totals per method."""

    def test_binary_over_512(self, bench_config):
        result = bench.accumulated(Method.BINARY, 512, bench_config)

        assert result.method == 'BINARY'
        assert result.total == 5388
        assert len(result.per_exponent) == 512

    def test_quaternary_band(self, bench_config):
        result = bench.accumulated(Method.MARY, 512, bench_config)

        assert result.method == 'MARY(4)'
        assert 5175 <= result.total <= 5280

    def test_radix_in_label(self, bench_config):
        assert bench.accumulated(Method.MARY, 64, bench_config, radix=8).method == 'MARY(8)'

    def test_oracle_uses_table(self, bench_config, optimal_256):
        result = bench.accumulated(Method.ORACLE, 16, bench_config, table=optimal_256)

        assert result.total == 54
        assert result.seeds == ()

    def test_oracle_without_table(self, bench_config):
        assert bench.accumulated(Method.ORACLE, 16, bench_config).total == 54

    def test_gadsa_between_oracle_and_binary(self, bench_config, optimal_256):
        ga = bench.accumulated(Method.GADSA, 32, bench_config)
        oracle = bench.accumulated(Method.ORACLE, 32, bench_config, table=optimal_256)
        binary = bench.accumulated(Method.BINARY, 32, bench_config)

        assert oracle.total <= ga.total <= binary.total
        for e, length in enumerate(ga.per_exponent, start=1):
            assert length >= optimal_256.length(e)
        assert ga.seeds == tuple(bench.derive_seed(1, 0, e) for e in range(1, 33))

    def test_gadsa_reproducible(self, bench_config):
        first = bench.accumulated(Method.GADSA, 24, bench_config, run=3)
        second = bench.accumulated(Method.GADSA, 24, bench_config, run=3)

        assert first == second

    def test_gadsa_parallel_matches_serial(self, bench_config):
        serial = bench.accumulated(Method.GADSA, 24, bench_config)
        parallel = bench.accumulated(Method.GADSA, 24, bench_config, workers=2)

        assert parallel == serial


@pytest.mark.unit
class TestRunStats:
    """Test multi-run statistics."""

    def test_oracle_has_no_spread(self, bench_config, optimal_256):
        stats = bench.run_stats(Method.ORACLE, 32, 3, 9, bench_config, table=optimal_256)

        assert stats.best == stats.worst == optimal_256.accumulated(32)
        assert stats.average == stats.median == stats.best

    def test_single_run(self, bench_config):
        stats = bench.run_stats(Method.GADSA, 16, 1, 4, bench_config)

        assert stats.runs == 1
        assert stats.best == stats.worst == stats.median == stats.average

    def test_first_run_matches_accumulated(self, bench_config):
        first = bench.accumulated(Method.GADSA, 16, GaConfig(population_size=20, max_generations=10, seed=4), run=0)
        stats = bench.run_stats(Method.GADSA, 16, 2, 4, bench_config)

        assert stats.totals[0] == first.total
        assert stats.best <= stats.median <= stats.worst

    def test_rejects_zero_runs(self, bench_config):
        with pytest.raises(InvalidInputError):
            bench.run_stats(Method.BINARY, 16, 0, 1, bench_config)

    @pytest.mark.slow
    @pytest.mark.full_scale
    def test_default_parameters_near_optimum_over_512(self):
        stats = bench.run_stats(Method.GADSA, 512, 5, 0, GaConfig(), workers=4)

        assert stats.worst <= 4950


# ============================================================================
# Random & Special Exponents
# ============================================================================

@pytest.mark.unit
class TestRandomExponents:
    """Test bit-size sampling and averages."""

    def test_two_bit_exponents(self):
        assert set(bench.random_exponents(2, 50, 1)) <= {2, 3}

    @pytest.mark.parametrize('bits', [32, 64])
    def test_exact_bit_length(self, bits):
        for e in bench.random_exponents(bits, 100, 1):
            assert e.bit_length() == bits

    def test_reproducible(self):
        assert bench.random_exponents(32, 10, 5) == bench.random_exponents(32, 10, 5)

    @pytest.mark.parametrize('bits,samples', [(1, 5), (65, 5), (32, 0)])
    def test_rejects_bad_arguments(self, bits, samples):
        with pytest.raises(InvalidInputError):
            bench.random_exponents(bits, samples, 1)

    def test_binary_average_for_32_bits(self, bench_config):
        """Test the binary average is near 31 + 31/2 for 32-bit exponents."""
        rows = bench.random_exponent_avg(32, 200, [Method.BINARY], 3, bench_config)

        assert len(rows) == 1
        assert rows[0].method == 'BINARY'
        assert rows[0].samples == 200
        assert abs(rows[0].average - 46.5) <= 1.0

    def test_one_row_per_method(self, bench_config):
        rows = bench.random_exponent_avg(12, 3, [Method.GADSA, Method.BINARY, Method.MARY], 3, bench_config)

        assert [row.method for row in rows] == ['GADSA', 'BINARY', 'MARY(4)']
        exponents = bench.random_exponents(12, 3, 3)
        assert rows[1].average == round(sum(binary_length(e) for e in exponents) / 3, 2)

    @pytest.mark.slow
    @pytest.mark.full_scale
    def test_averages_for_32_bits_with_default_parameters(self):
        """Test GA and quaternary averages over 20 random 32-bit exponents."""
        rows = bench.random_exponent_avg(32, 20, [Method.GADSA, Method.BINARY, Method.MARY], 0, GaConfig())
        averages = {row.method: row.average for row in rows}

        assert averages['GADSA'] <= 43
        assert averages['MARY(4)'] <= 44
        assert abs(averages['BINARY'] - 46.5) <= 1.0
        assert averages['GADSA'] < averages['BINARY']


@pytest.mark.unit
class TestSpecialExponents:
    """Test special-exponent rows and printed-chain errata."""

    def test_printed_chain_erratum_is_logged(self, bench_config, caplog):
        with caplog.at_level(logging.WARNING, logger='addchain.services.bench'):
            rows = bench.special_exponents(bench_config, [0], exponents=[3704431])

        row = rows[0]
        assert row.exponent == 3704431
        assert row.printed_valid is False
        assert 'NO_SUMMAND_PAIR' in row.printed_violations
        assert 'Erratum' in caplog.text
        assert row.best_chain[-1] == 3704431
        assert row.best_length == len(row.best_chain) - 1

    def test_valid_printed_chain(self, bench_config):
        row = bench.special_exponents(bench_config, [0, 1], exponents=[3922763])[0]

        assert row.printed_valid is True
        assert row.printed_additions == 27
        assert row.printed_violations == ()
        assert len(row.seeds) == 2

    @pytest.mark.parametrize('e,kind,position', [
        (3704431, 'NO_SUMMAND_PAIR', 12),
        (3243931, 'NOT_INCREASING', 8),
    ])
    def test_printed_chain_violation_kind(self, e, kind, position):
        report = validate_chain(bench.PRINTED_CHAINS[e], e)

        assert report.valid is False
        found = {v.kind.value: v.position for v in report.violations}
        assert found[kind] == position

    @pytest.mark.parametrize('e', [3922763, 2948207])
    def test_printed_chain_validates_at_27(self, e):
        report = validate_chain(bench.PRINTED_CHAINS[e], e)

        assert report.valid is True
        assert report.additions == 27

    @pytest.mark.slow
    @pytest.mark.full_scale
    def test_ga_within_30_with_five_seeds(self):
        rows = bench.special_exponents(GaConfig(), range(5))

        assert len(rows) == 6
        for row in rows:
            assert row.best_length <= 30
            assert validate_chain(row.best_chain, row.exponent).valid

    def test_exponent_without_printed_chain(self, bench_config):
        row = bench.special_exponents(bench_config, [0], exponents=[97])[0]

        assert row.printed_valid is False
        assert row.printed_additions == 0


# ============================================================================
# Table Builders
# ============================================================================

@pytest.mark.unit
class TestTableBuilders:
    """Test report assembly at the CI scale."""

    def test_table1(self, bench_config):
        report = bench.table1('ci', CI_SCALE, bench_config)

        assert report.kind == 'table1'
        assert len(report.rows) == 2 * 4
        assert [row['method'] for row in report.rows[:4]] == ['ORACLE', 'GADSA', 'BINARY', 'MARY(4)']
        totals = {(row['method'], row['range_max']): row['total'] for row in report.rows}
        assert totals[('ORACLE', 16)] == 54
        assert totals[('BINARY', 16)] == 55
        assert report.meta['scale']['name'] == 'ci'
        assert report.meta['config']['max_generations'] == CI_SCALE['max_generations']

    def test_table2(self, bench_config):
        report = bench.table2('ci', CI_SCALE, bench_config)

        assert [row['range_max'] for row in report.rows] == CI_SCALE['ranges']
        assert all(row['runs'] == CI_SCALE['runs'] for row in report.rows)

    def test_table3(self, bench_config):
        report = bench.table3('ci', CI_SCALE, bench_config)

        assert len(report.rows) == 3
        assert {row['bits'] for row in report.rows} == {12}

    @pytest.mark.slow
    def test_table4(self, bench_config):
        report = bench.table4('ci', CI_SCALE, bench_config)

        valid = {row['exponent']: row['printed_valid'] for row in report.rows}
        assert len(valid) == 6
        assert valid[3704431] is False
        assert valid[3243931] is False
        assert valid[3922763] is True


# ============================================================================
# Reports
# ============================================================================

@pytest.fixture
def accumulated_report():
    rows = [
        AccumulatedResult(method='BINARY', range_max=16, total=55, per_exponent=(0, 1, 2), seeds=()),
        AccumulatedResult(method='GADSA', range_max=16, total=54, per_exponent=None, seeds=(11, 12)),
    ]
    return rows, Report(kind='table1', meta={'seed': 1}, rows=AccumulatedResultSchema(many=True).dump(rows))


@pytest.mark.unit
class TestReports:
    """Test rendering, writing and reading reports."""

    def test_empty_report_raises(self):
        with pytest.raises(ReportError):
            render_report(Report(kind='table1', meta={}, rows=[]))

    def test_empty_report_writes_nothing(self, tmp_path):
        path = tmp_path / 'out.json'

        with pytest.raises(ReportError):
            write_report(Report(kind='table1', meta={}, rows=[]), 'json', path)
        assert not path.exists()

    def test_unknown_format(self, accumulated_report):
        _, report = accumulated_report

        with pytest.raises(ReportError):
            render_report(report, 'xml')

    def test_csv_header(self, accumulated_report):
        _, report = accumulated_report

        lines = render_report(report, 'csv').splitlines()

        assert lines[0] == 'method,range_max,total'
        assert lines[1] == 'BINARY,16,55'

    def test_csv_two_decimals(self):
        stats = bench.summarize('GADSA', 64, [10, 11])
        report = Report(kind='table2', meta={}, rows=[RunStatsSchema().dump(stats)])

        lines = render_report(report, 'csv').splitlines()

        assert lines[0] == 'method,range_max,best,average,median,worst,runs'
        assert lines[1] == 'GADSA,64,10,10.50,10.50,11,2'

    def test_json_is_sorted_and_stable(self, accumulated_report):
        _, report = accumulated_report

        text = render_report(report)

        assert text == render_report(report)
        data = json.loads(text)
        assert data['meta']['kind'] == 'table1'
        assert list(data['rows'][0]) == sorted(data['rows'][0])

    def test_json_round_trip(self, tmp_path, accumulated_report):
        rows, report = accumulated_report
        path = write_report(report, 'json', tmp_path / 'reports' / 'table1.json')

        loaded = read_report(path)

        assert loaded.kind == 'table1'
        assert load_rows(loaded) == rows

    def test_unwritable_path(self, tmp_path, accumulated_report):
        _, report = accumulated_report
        blocker = tmp_path / 'blocker'
        blocker.write_text('')

        with pytest.raises(ReportError):
            write_report(report, 'json', blocker / 'out.json')

    def test_read_invalid_json(self, tmp_path):
        path = tmp_path / 'broken.json'
        path.write_text('{not json')

        with pytest.raises(ReportError):
            read_report(path)

    def test_read_report_without_kind(self, tmp_path):
        path = tmp_path / 'nokind.json'
        path.write_text(json.dumps({'meta': {}, 'rows': [{'a': 1}]}))

        with pytest.raises(ReportError):
            read_report(path)

    def test_rows_of_unknown_kind(self):
        with pytest.raises(ReportError):
            load_rows(single_row_report('modexp', {'result': 1}))
