"""
Tests for the exact search, optimal-length tables and the table cache.
"""

import logging

import numpy as np
import pytest

from addchain.errors import BudgetExceeded, CacheCorrupt, InvalidInputError
from addchain.services.baselines import binary_length
from addchain.services.chain_core import lower_bound, validate_chain
from addchain.services.oracle import (
    PUBLISHED_OPTIMAL_TOTALS,
    check_published_totals,
    compute_table,
    load_table,
    optimal_chain,
    optimal_length,
    optimal_table,
    write_table,
)


pytestmark = pytest.mark.oracle

# Smallest n with l(n) = r, for r = 0..11.
SMALLEST_OF_LENGTH = [1, 2, 3, 5, 7, 11, 19, 29, 47, 71, 127, 191]


# ============================================================================
# Single exponents
# ============================================================================

@pytest.mark.unit
class TestOptimalChain:
    """Test optimal_chain witnesses and lengths."""

    @pytest.mark.parametrize('e,expected', [
        (1, 0), (2, 1), (3, 2), (15, 5), (43, 7), (71, 9), (97, 8), (127, 10),
    ])
    def test_known_lengths(self, e, expected):
        assert optimal_length(e) == expected

    def test_exponent_one(self):
        assert optimal_chain(1).values == (1,)

    def test_exponent_two(self):
        assert optimal_chain(2).values == (1, 2)

    @pytest.mark.parametrize('e', [15, 43, 97, 127, 191, 255])
    def test_witness_is_valid(self, e):
        chain = optimal_chain(e)

        assert validate_chain(chain.values, e).valid
        assert lower_bound(e) <= chain.additions <= binary_length(e)

    def test_deterministic(self):
        assert optimal_chain(191) == optimal_chain(191)

    def test_rejects_zero(self):
        with pytest.raises(InvalidInputError):
            optimal_chain(0)

    def test_budget_exceeded_carries_bounds(self, caplog):
        """Test a one-node budget leaves the binary chain as the unproven witness."""
        with caplog.at_level(logging.WARNING, logger='addchain.services.oracle'):
            with pytest.raises(BudgetExceeded) as exc_info:
                optimal_chain(15, budget=1)

        err = exc_info.value
        assert err.proven is False
        assert err.upper == 6
        assert err.lower <= 5
        assert validate_chain(err.witness.values, 15).valid
        assert err.exit_code == 1
        assert 'budget exhausted' in caplog.text

    def test_budget_large_enough_proves(self):
        assert optimal_length(15, budget=10_000) == 5


# ============================================================================
# Tables
# ============================================================================

@pytest.mark.unit
class TestComputeTable:
    """Test l(n) tables against structural invariants."""

    def test_small_values(self, optimal_256):
        assert [optimal_256.length(n) for n in range(1, 9)] == [0, 1, 2, 2, 3, 3, 4, 3]

    def test_smallest_of_each_length(self, optimal_256):
        lengths = optimal_256.lengths[1:257]
        for r, n in enumerate(SMALLEST_OF_LENGTH):
            assert int(np.argmax(lengths == r)) + 1 == n

    def test_bounds_hold(self, optimal_256):
        for n in range(1, 257):
            assert lower_bound(n) <= optimal_256.length(n) <= binary_length(n)

    def test_doubling_costs_at_most_one(self, optimal_256):
        for n in range(1, 129):
            assert optimal_256.length(2 * n) <= optimal_256.length(n) + 1

    def test_powers_of_two(self, optimal_256):
        for k in range(9):
            assert optimal_256.length(1 << k) == k

    def test_agrees_with_single_searches(self, optimal_256):
        """Test a fixed 1% sample against independent searches."""
        sample = np.random.default_rng(5).choice(np.arange(1, 257), size=3, replace=False)
        for n in sample:
            assert optimal_256.length(int(n)) == optimal_length(int(n))

    def test_parallel_matches_serial(self):
        assert compute_table(64, workers=2) == compute_table(64)

    def test_accumulated(self, optimal_256):
        assert optimal_256.accumulated(8) == 18
        with pytest.raises(ValueError):
            optimal_256.accumulated(257)

    def test_truncated(self, optimal_256):
        small = optimal_256.truncated(32)

        assert small.limit == 32
        assert small == compute_table(32)

    @pytest.mark.slow
    @pytest.mark.full_scale
    def test_published_total_for_512(self, optimal_512):
        assert optimal_512.accumulated(512) == PUBLISHED_OPTIMAL_TOTALS[512] == 4924
        assert check_published_totals(optimal_512) == {}


@pytest.mark.slow
@pytest.mark.full_scale
class TestPublishedTotals:
    """Test accumulated optima over the published ranges, up to 4096."""

    @pytest.mark.parametrize('range_max,expected', [
        (512, 4924), (1000, 10808), (1024, 11115), (2000, 24063), (2048, 24731), (4096, 54425),
    ])
    def test_total_matches(self, optimal_4096, range_max, expected):
        assert PUBLISHED_OPTIMAL_TOTALS[range_max] == expected
        assert optimal_4096.accumulated(range_max) == expected

    def test_no_errata(self, optimal_4096):
        assert check_published_totals(optimal_4096) == {}

    def test_bounds_hold(self, optimal_4096):
        lengths = optimal_4096.lengths
        for n in range(1, 4097):
            assert lower_bound(n) <= int(lengths[n]) <= binary_length(n)

    def test_doubling_costs_at_most_one(self, optimal_4096):
        lengths = optimal_4096.lengths
        for n in range(1, 2049):
            assert lengths[2 * n] <= lengths[n] + 1


# ============================================================================
# Cache
# ============================================================================

@pytest.mark.unit
class TestTableCache:
    """Test the checksummed binary cache."""

    def test_round_trip(self, tmp_path, optimal_256):
        path = write_table(optimal_256, tmp_path / 'oracle.bin')

        assert path.read_bytes()[:4] == b'ACOT'
        assert load_table(path) == optimal_256

    def test_file_size(self, tmp_path, optimal_256):
        path = write_table(optimal_256.truncated(100), tmp_path / 'oracle.bin')

        assert path.stat().st_size == 16 + 2 * 100 + 8

    def test_flipped_byte_is_corrupt(self, tmp_path, optimal_256):
        path = write_table(optimal_256, tmp_path / 'oracle.bin')
        data = bytearray(path.read_bytes())
        data[40] ^= 0xFF
        path.write_bytes(bytes(data))

        with pytest.raises(CacheCorrupt) as exc_info:
            load_table(path)
        assert exc_info.value.exit_code == 2

    def test_truncated_file_is_corrupt(self, tmp_path, optimal_256):
        path = write_table(optimal_256, tmp_path / 'oracle.bin')
        path.write_bytes(path.read_bytes()[:-10])

        with pytest.raises(CacheCorrupt):
            load_table(path)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / 'oracle.bin'
        path.write_bytes(b'NOPE' + bytes(40))

        with pytest.raises(CacheCorrupt):
            load_table(path)

    def test_optimal_table_writes_cache(self, tmp_path):
        path = tmp_path / 'cache' / 'oracle.bin'

        table = optimal_table(40, cache_path=path)

        assert path.exists()
        assert load_table(path) == table

    def test_larger_cache_is_truncated(self, tmp_path, optimal_256):
        path = write_table(optimal_256, tmp_path / 'oracle.bin')

        table = optimal_table(50, cache_path=path)

        assert table.limit == 50
        assert table == optimal_256.truncated(50)

    def test_smaller_cache_is_extended(self, tmp_path, optimal_256):
        path = write_table(optimal_256.truncated(20), tmp_path / 'oracle.bin')

        table = optimal_table(60, cache_path=path)

        assert table == optimal_256.truncated(60)
        assert load_table(path).limit == 60

    def test_corrupt_cache_is_recomputed(self, tmp_path, optimal_256, caplog):
        path = tmp_path / 'oracle.bin'
        path.write_bytes(b'garbage')

        with caplog.at_level(logging.WARNING, logger='addchain.services.oracle'):
            table = optimal_table(30, cache_path=path)

        assert table == optimal_256.truncated(30)
        assert 'corrupt' in caplog.text
        assert load_table(path) == table

    def test_rejects_bad_limit(self):
        with pytest.raises(InvalidInputError):
            optimal_table(0)
