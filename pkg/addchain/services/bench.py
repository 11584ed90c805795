"""
Benchmark Service for reproducing the published experiments.

Accumulated chain lengths per method, multi-run statistics, averages over
random exponents of a fixed bit size and the special-exponent runs. Results are
returned as domain rows and assembled into reports by the ``table*`` builders.
"""

import logging
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .. import __version__
from ..errors import InvalidInputError
from ..models import (
    AccumulatedResult,
    BitSizeRow,
    GaConfig,
    Method,
    OptimalTable,
    Report,
    RunStats,
    SpecialExponentRow,
    method_label,
)
from ..schemas import (
    AccumulatedResultSchema,
    BitSizeRowSchema,
    RunStatsSchema,
    SpecialExponentRowSchema,
)
from .baselines import binary_length, mary_chain
from .chain_core import check_exponent, validate_chain
from .ga_engine import evolve
from .oracle import check_published_totals, optimal_length, optimal_table

logger = logging.getLogger(__name__)

# Special exponents and the chains printed for them.
PRINTED_CHAINS = {
    3704431: (1, 2, 4, 5, 9, 18, 36, 72, 144, 288, 576, 1157, 2314, 4628, 9256, 18512, 37024, 74048,
              148096, 296192, 592384, 1184768, 1185349, 2370698, 3556047, 3704143, 3704431),
    3922763: (1, 2, 3, 6, 12, 24, 26, 52, 104, 208, 416, 832, 1664, 3328, 3331, 6659, 9990, 19980,
              39960, 79920, 159840, 163171, 326342, 652684, 1305368, 1958052, 3916104, 3922763),
    2948207: (1, 2, 3, 4, 7, 14, 28, 29, 58, 116, 232, 239, 478, 956, 1912, 3824, 3853, 7677, 15354,
              30708, 61416, 122832, 245664, 491328, 982656, 1965312, 2947968, 2948207),
    3093839: (1, 2, 3, 5, 10, 20, 30, 60, 120, 150, 151, 302, 604, 1208, 2416, 4832, 9664, 19328,
              38656, 77312, 154624, 309248, 618496, 1236992, 2473984, 3092480, 3093688, 3093839),
    3243931: (1, 2, 4, 8, 16, 32, 64, 27, 128, 256, 258, 514, 515, 1029, 2058, 4116, 8232, 16464,
              32928, 65856, 66371, 132227, 198083, 396166, 792332, 1584664, 3169328, 3235699, 3243931),
    3325439: (1, 2, 4, 8, 16, 17, 33, 66, 132, 264, 528, 1056, 2112, 4224, 4241, 8482, 16964, 33928,
              67856, 135712, 271424, 271457, 542914, 1085828, 1085861, 2171722, 3257583, 3325439),
}


def derive_seed(master_seed: int, run: int, exponent: int) -> int:
    """64-bit seed for (run, exponent), independent across both."""
    state = np.random.SeedSequence([master_seed, run, exponent]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def _ga_length(args) -> int:
    e, cfg = args
    return evolve(e, cfg).length


def method_length(method: Method, e: int, cfg: GaConfig, radix: int = 4, run: int = 0,
                  table: Optional[OptimalTable] = None, budget: Optional[int] = None) -> int:
    """Chain length one method achieves for ``e``."""
    if method == Method.BINARY:
        return binary_length(e)
    if method == Method.MARY:
        return mary_chain(e, radix).additions
    if method == Method.ORACLE:
        if table is not None and e <= table.limit:
            return table.length(e)
        return optimal_length(e, budget)
    return evolve(e, replace(cfg, seed=derive_seed(cfg.seed, run, e))).length


def accumulated(method: Method, range_max: int, cfg: GaConfig, radix: int = 4, run: int = 0,
                workers: int = 1, table: Optional[OptimalTable] = None, cache_path=None,
                budget: Optional[int] = None) -> AccumulatedResult:
    """
    Sum of the best lengths over e in [1, range_max].

    GA runs use ``derive_seed(cfg.seed, run, e)`` per exponent and may be spread
    over a process pool; results are gathered in exponent order.
    """
    check_exponent(range_max)
    exponents = range(1, range_max + 1)
    seeds: Sequence[int] = ()

    if method == Method.ORACLE:
        if table is None or table.limit < range_max:
            table = optimal_table(range_max, cache_path=cache_path, workers=workers, budget=budget)
        lengths = [table.length(e) for e in exponents]
    elif method == Method.GADSA:
        seeds = tuple(derive_seed(cfg.seed, run, e) for e in exponents)
        jobs = [(e, replace(cfg, seed=seed)) for e, seed in zip(exponents, seeds)]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                lengths = list(executor.map(_ga_length, jobs, chunksize=16))
        else:
            lengths = [_ga_length(job) for job in jobs]
    else:
        lengths = [method_length(method, e, cfg, radix=radix) for e in exponents]

    total = int(sum(lengths))
    logger.debug('%s over [1, %d]: %d', method_label(method, radix), range_max, total)
    return AccumulatedResult(
        method=method_label(method, radix),
        range_max=range_max,
        total=total,
        per_exponent=tuple(int(length) for length in lengths),
        seeds=seeds,
    )


def summarize(method: str, range_max: int, totals: Sequence[int]) -> RunStats:
    """Best/worst/average/median of accumulated totals, two decimals."""
    if not totals:
        raise InvalidInputError('At least one run is required')
    ordered = sorted(totals)
    return RunStats(
        method=method,
        range_max=range_max,
        best=ordered[0],
        worst=ordered[-1],
        average=round(statistics.mean(ordered), 2),
        median=round(statistics.median(ordered), 2),
        runs=len(ordered),
        totals=tuple(totals),
    )


def run_stats(method: Method, range_max: int, runs: int, master_seed: int, cfg: GaConfig,
              radix: int = 4, workers: int = 1, table: Optional[OptimalTable] = None,
              cache_path=None, budget: Optional[int] = None) -> RunStats:
    """``accumulated`` for runs 0..runs-1 under one master seed."""
    if runs < 1:
        raise InvalidInputError(f'runs must be >= 1, got {runs}', details={'runs': runs})
    cfg = replace(cfg, seed=master_seed)
    if method == Method.ORACLE and table is None:
        table = optimal_table(range_max, cache_path=cache_path, workers=workers, budget=budget)
    totals = [
        accumulated(method, range_max, cfg, radix=radix, run=run, workers=workers, table=table).total
        for run in range(runs)
    ]
    return summarize(method_label(method, radix), range_max, totals)


def random_exponents(bits: int, samples: int, master_seed: int) -> List[int]:
    """``samples`` uniform exponents with exactly ``bits`` bits."""
    if not 2 <= bits <= 64:
        raise InvalidInputError(f'bits must be in [2, 64], got {bits}', details={'bits': bits})
    if samples < 1:
        raise InvalidInputError(f'samples must be >= 1, got {samples}', details={'samples': samples})
    rng = np.random.default_rng(master_seed)
    top = 1 << (bits - 1)
    low_bits = rng.integers(0, top, size=samples, dtype=np.uint64)
    return [top | int(value) for value in low_bits]


def random_exponent_avg(bits: int, samples: int, methods: Iterable[Method], master_seed: int,
                        cfg: GaConfig, radix: int = 4,
                        budget: Optional[int] = None) -> List[BitSizeRow]:
    """Average chain length per method over random ``bits``-bit exponents."""
    exponents = random_exponents(bits, samples, master_seed)
    rows = []
    for method in methods:
        lengths = [
            method_length(method, e, replace(cfg, seed=master_seed), radix=radix, run=index, budget=budget)
            for index, e in enumerate(exponents)
        ]
        rows.append(BitSizeRow(
            bits=bits,
            method=method_label(method, radix),
            samples=samples,
            average=round(statistics.mean(lengths), 2),
        ))
    return rows


def special_exponents(cfg: GaConfig, seeds: Sequence[int],
                      exponents: Optional[Iterable[int]] = None) -> List[SpecialExponentRow]:
    """GA runs on the special exponents plus a validation of their printed chains."""
    rows = []
    for e in exponents or PRINTED_CHAINS:
        printed = PRINTED_CHAINS.get(e)
        report = validate_chain(printed, e) if printed else None
        if report is not None and not report.valid:
            for violation in report.violations:
                logger.warning('Erratum: printed chain for %d has %s at position %d (%s)',
                               e, violation.kind.value, violation.position, violation.detail)

        best = None
        run_seeds = tuple(derive_seed(cfg.seed, run, e) for run in seeds)
        for seed in run_seeds:
            result = evolve(e, replace(cfg, seed=seed))
            if best is None or result.length < best.length:
                best = result

        rows.append(SpecialExponentRow(
            exponent=e,
            printed_additions=report.additions if report else 0,
            printed_valid=report.valid if report else False,
            printed_violations=tuple(v.kind.value for v in report.violations) if report else (),
            best_length=best.length,
            best_chain=best.best.values,
            seeds=run_seeds,
        ))
    return rows


# ============================================================================
# Table builders
# ============================================================================

def _meta(kind: str, cfg: GaConfig, scale_name: str, scale: Dict) -> Dict:
    return {
        'kind': kind,
        'version': __version__,
        'seed': cfg.seed,
        'config': cfg.to_dict(),
        'scale': dict(scale, name=scale_name),
    }


def _dump(rows, schema_cls) -> List[Dict]:
    return schema_cls(many=True).dump(rows)


def table1(scale_name: str, scale: Dict, cfg: GaConfig, workers: int = 1, cache_path=None,
           budget: Optional[int] = None, radix: int = 4) -> Report:
    """Accumulated lengths for ORACLE, GADSA, BINARY and MARY per range."""
    cfg = replace(cfg, max_generations=scale['max_generations'])
    ranges = scale['ranges']
    table = optimal_table(max(ranges), cache_path=cache_path, workers=workers, budget=budget)
    check_published_totals(table)

    rows = []
    for range_max in ranges:
        for method in (Method.ORACLE, Method.GADSA, Method.BINARY, Method.MARY):
            rows.append(accumulated(method, range_max, cfg, radix=radix, workers=workers, table=table))
    return Report(kind='table1', meta=_meta('table1', cfg, scale_name, scale),
                  rows=_dump(rows, AccumulatedResultSchema))


def table2(scale_name: str, scale: Dict, cfg: GaConfig, workers: int = 1) -> Report:
    """GA statistics over ``scale['runs']`` runs per range."""
    cfg = replace(cfg, max_generations=scale['max_generations'])
    rows = [
        run_stats(Method.GADSA, range_max, scale['runs'], cfg.seed, cfg, workers=workers)
        for range_max in scale['ranges']
    ]
    return Report(kind='table2', meta=_meta('table2', cfg, scale_name, scale),
                  rows=_dump(rows, RunStatsSchema))


def table3(scale_name: str, scale: Dict, cfg: GaConfig, radix: int = 4) -> Report:
    """Average lengths for random exponents per bit size."""
    cfg = replace(cfg, max_generations=scale['max_generations'])
    rows = []
    for bits in scale['bit_sizes']:
        rows.extend(random_exponent_avg(
            bits, scale['samples'], (Method.GADSA, Method.BINARY, Method.MARY), cfg.seed, cfg, radix=radix
        ))
    return Report(kind='table3', meta=_meta('table3', cfg, scale_name, scale),
                  rows=_dump(rows, BitSizeRowSchema))


def table4(scale_name: str, scale: Dict, cfg: GaConfig) -> Report:
    """Special exponents: printed-chain validation and best GA length."""
    cfg = replace(cfg, max_generations=scale['max_generations'])
    rows = special_exponents(cfg, range(scale['special_seeds']))
    return Report(kind='table4', meta=_meta('table4', cfg, scale_name, scale),
                  rows=_dump(rows, SpecialExponentRowSchema))

