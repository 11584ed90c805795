"""
Exact minimal addition chains.

Iterative deepening on the chain length, starting at the lower bound. Each
node prunes when ``last * 2**remaining < e``; candidate sums try star steps
(``last + x_j``, j descending) first and then every other pair sum, so non-star
optima are found too. Tables of l(n) are persisted in a small checksummed
binary cache.
"""

import hashlib
import logging
import struct
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from ..errors import BudgetExceeded, CacheCorrupt, InvalidInputError
from ..models import AdditionChain, OptimalTable
from .baselines import binary_chain, binary_length
from .chain_core import check_exponent, chain_from_values, lower_bound

logger = logging.getLogger(__name__)

CACHE_MAGIC = b'ACOT'
CACHE_VERSION = 1
_HEADER = struct.Struct('<4sIQ')
_CHECKSUM_SIZE = 8

# Accumulated optimal lengths as published; the search result wins on mismatch.
PUBLISHED_OPTIMAL_TOTALS = {
    512: 4924,
    1000: 10808,
    1024: 11115,
    2000: 24063,
    2048: 24731,
    4096: 54425,
}


class _OutOfBudget(Exception):
    pass


class _DepthSearch:
    """Depth-limited DFS for one exponent; counts nodes across depths."""

    def __init__(self, e: int, budget: Optional[int] = None):
        self.e = e
        self.budget = budget
        self.nodes = 0

    def chain_of_length(self, depth: int) -> Optional[List[int]]:
        chain = [1] * (depth + 1)
        if self._extend(chain, 1, depth):
            return chain
        return None

    def _candidates(self, chain: List[int], pos: int, remaining: int) -> List[int]:
        e = self.e
        last = chain[pos - 1]
        shift = remaining - 1
        ordered: List[int] = []
        tried = set()

        for j in range(pos - 1, -1, -1):
            value = last + chain[j]
            if value >= e:
                continue
            if value << shift < e:
                break
            ordered.append(value)
            tried.add(value)

        others = set()
        for i in range(pos - 2, -1, -1):
            xi = chain[i]
            if 2 * xi <= last:
                break
            for j in range(i, -1, -1):
                value = xi + chain[j]
                if value <= last or value << shift < e:
                    break
                if value < e and value not in tried:
                    others.add(value)
        ordered.extend(sorted(others, reverse=True))
        return ordered

    def _extend(self, chain: List[int], pos: int, depth: int) -> bool:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _OutOfBudget()

        e = self.e
        remaining = depth - pos + 1
        if remaining == 1:
            present = set(chain[:pos])
            if any((e - x) in present for x in chain[:pos]):
                chain[pos] = e
                return True
            return False
        if chain[pos - 1] << remaining < e:
            return False

        for value in self._candidates(chain, pos, remaining):
            chain[pos] = value
            if self._extend(chain, pos + 1, depth):
                return True
        return False


def _search(e: int, upper: int, budget: Optional[int]) -> Optional[List[int]]:
    """Shortest chain strictly below ``upper`` additions, or None if none exists."""
    search = _DepthSearch(e, budget)
    lower = lower_bound(e)
    depth = lower
    try:
        while depth < upper:
            chain = search.chain_of_length(depth)
            if chain is not None:
                logger.debug('l(%d) = %d proven after %d nodes', e, depth, search.nodes)
                return chain
            depth += 1
    except _OutOfBudget:
        raise BudgetExceeded(e, upper=upper, lower=depth, witness=None, nodes=search.nodes) from None
    return None


def optimal_chain(e: int, budget: Optional[int] = None) -> AdditionChain:
    """A witness of minimal length; deterministic given the enumeration order."""
    check_exponent(e)
    if e == 1:
        return AdditionChain(values=(1,), steps=())
    fallback = binary_chain(e)
    try:
        found = _search(e, fallback.additions, budget)
    except BudgetExceeded as err:
        err.witness = fallback
        logger.warning('Node budget exhausted for %d: length in [%d, %d]', e, err.lower, err.upper)
        raise
    if found is None:
        return fallback
    return chain_from_values(found)


def optimal_length(e: int, budget: Optional[int] = None) -> int:
    return optimal_chain(e, budget).additions


# ============================================================================
# Tables
# ============================================================================

def _table_upper(n: int, lengths: np.ndarray) -> int:
    """Upper bound for l(n) from already known entries."""
    best = min(binary_length(n), int(lengths[n - 1]) + 1)
    if n % 2 == 0:
        best = min(best, int(lengths[n // 2]) + 1)
    a = 3
    while a * a <= n:
        if n % a == 0:
            best = min(best, int(lengths[a]) + int(lengths[n // a]))
        a += 1
    return best


def _entry(n: int, upper: int, budget: Optional[int]) -> int:
    if upper <= lower_bound(n):
        return upper
    found = _search(n, upper, budget)
    return upper if found is None else len(found) - 1


def _parallel_entry(args) -> int:
    n, budget = args
    return _entry(n, binary_length(n), budget)


def compute_table(limit: int, workers: int = 1, budget: Optional[int] = None) -> OptimalTable:
    """l(n) for every n <= limit."""
    check_exponent(limit)
    lengths = np.zeros(limit + 1, dtype=np.int64)
    if workers > 1 and limit > 2:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = executor.map(_parallel_entry, [(n, budget) for n in range(2, limit + 1)], chunksize=32)
            for n, length in enumerate(results, start=2):
                lengths[n] = length
    else:
        for n in range(2, limit + 1):
            lengths[n] = _entry(n, _table_upper(n, lengths), budget)
    return OptimalTable(limit=limit, lengths=lengths)


def _checksum(payload: bytes) -> bytes:
    return hashlib.blake2b(payload, digest_size=_CHECKSUM_SIZE).digest()


def write_table(table: OptimalTable, path) -> Path:
    """Write ``ACOT | version | limit | u16 lengths[1..limit] | blake2b-64``."""
    path = Path(path)
    payload = _HEADER.pack(CACHE_MAGIC, CACHE_VERSION, table.limit)
    payload += table.lengths[1:table.limit + 1].astype('<u2').tobytes()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(payload + _checksum(payload))
    return path


def load_table(path) -> OptimalTable:
    path = Path(path)
    data = path.read_bytes()
    if len(data) < _HEADER.size + _CHECKSUM_SIZE:
        raise CacheCorrupt(path, 'file too short')
    magic, version, limit = _HEADER.unpack_from(data)
    if magic != CACHE_MAGIC:
        raise CacheCorrupt(path, 'bad magic')
    if version != CACHE_VERSION:
        raise CacheCorrupt(path, f'unsupported version {version}')
    expected = _HEADER.size + 2 * limit + _CHECKSUM_SIZE
    if len(data) != expected:
        raise CacheCorrupt(path, f'expected {expected} bytes, found {len(data)}')
    payload, checksum = data[:-_CHECKSUM_SIZE], data[-_CHECKSUM_SIZE:]
    if _checksum(payload) != checksum:
        raise CacheCorrupt(path, 'checksum mismatch')
    lengths = np.zeros(limit + 1, dtype=np.int64)
    lengths[1:] = np.frombuffer(payload, dtype='<u2', offset=_HEADER.size, count=limit)
    return OptimalTable(limit=limit, lengths=lengths)


def optimal_table(limit: int, cache_path=None, workers: int = 1,
                  budget: Optional[int] = None) -> OptimalTable:
    """
    Load l(n) for n <= limit from ``cache_path`` or compute and persist it.

    A corrupt cache is logged and recomputed; a smaller cached table is
    recomputed up to the new limit.
    """
    if limit < 1:
        raise InvalidInputError(f'Table limit must be >= 1, got {limit}', details={'limit': limit})
    if cache_path is not None and Path(cache_path).exists():
        try:
            cached = load_table(cache_path)
        except CacheCorrupt as err:
            logger.warning('%s; recomputing', err.message)
        else:
            if cached.limit >= limit:
                logger.debug('Oracle cache hit: %s (limit %d)', cache_path, cached.limit)
                return cached.truncated(limit)
            logger.info('Oracle cache %s covers %d < %d; extending', cache_path, cached.limit, limit)

    logger.info('Computing optimal lengths up to %d', limit)
    table = compute_table(limit, workers=workers, budget=budget)
    if cache_path is not None:
        write_table(table, cache_path)
        logger.info('Oracle cache written: %s', cache_path)
    return table


def check_published_totals(table: OptimalTable) -> Dict[int, Dict[str, int]]:
    """Compare accumulated sums with the published totals; mismatches are logged as errata."""
    errata = {}
    for range_max, published in PUBLISHED_OPTIMAL_TOTALS.items():
        if range_max > table.limit:
            continue
        computed = table.accumulated(range_max)
        if computed != published:
            errata[range_max] = {'published': published, 'computed': computed}
            logger.warning('Erratum: accumulated optimum over [1, %d] is %d, published %d',
                           range_max, computed, published)
    return errata
