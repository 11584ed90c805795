"""CLI commands for the addition-chain toolkit."""

import logging
import os
import sys
from typing import Optional, Sequence

import click
from flask import Flask, current_app
from flask.cli import FlaskGroup, with_appcontext

from . import __version__
from .decorators import exit_on_error, ga_options
from .errors import BudgetExceeded, ExitCodes, describe
from .models import AdditionChain, Method, ModContext, Report, method_label
from .schemas import GaResultSchema, RunStatsSchema, ValidationReportSchema
from .services import bench as bench_service
from .services.baselines import binary_chain, mary_chain
from .services.chain_core import validate_chain
from .services.ga_engine import evolve
from .services.modexp import execute
from .services.oracle import check_published_totals, optimal_chain, optimal_table
from .services.report_service import render_report, single_row_report, write_report
from .utils import build_cli_config, read_chain_file, resolve_ga_config

FORMAT_CHOICE = click.Choice(['json', 'csv'])


def _emit(report: Report, fmt: str, out=None) -> None:
    """Report to ``out`` if given, else to stdout."""
    if out:
        write_report(report, fmt, out)
    else:
        click.echo(render_report(report, fmt), nl=False)


def _meta(cli_config, **extra) -> dict:
    return dict(version=__version__, seed=cli_config.ga.seed, config=cli_config.ga.to_dict(), **extra)


@click.command('ga')
@click.option('--exponent', type=click.IntRange(min=1), default=None, help='Exponent to search a chain for.')
@click.option('--range-max', type=click.IntRange(min=1), default=None, help='Accumulate over [1, P].')
@click.option('--runs', type=click.IntRange(min=1), default=1, show_default=True, help='Runs for --range-max.')
@click.option('--workers', type=click.IntRange(min=1), default=None, help='Worker processes.')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Write the report here.')
@click.option('--format', 'fmt', type=FORMAT_CHOICE, default=None, help='Report format.')
@ga_options
@with_appcontext
@exit_on_error
def ga_command(exponent, range_max, runs, workers, out, fmt, ga_overrides, config_file):
    """Evolve a short chain for one exponent, or accumulate over a range."""
    if (exponent is None) == (range_max is None):
        raise click.UsageError('Give exactly one of --exponent and --range-max.')

    cli_config = build_cli_config(
        resolve_ga_config(current_app.config, config_file, ga_overrides),
        workers=workers or current_app.config['BENCH_WORKERS'],
        output_format=fmt or current_app.config['REPORT_FORMAT'],
        output_path=out,
    )
    cfg = cli_config.ga

    if exponent is not None:
        result = evolve(exponent, cfg)
        current_app.logger.info('GA for %d: length %d (%.3fs)', exponent, result.length, result.elapsed_seconds)
        report = single_row_report('ga', GaResultSchema().dump(result), _meta(cli_config))
    else:
        stats = bench_service.run_stats(Method.GADSA, range_max, runs, cfg.seed, cfg, workers=cli_config.workers)
        report = Report(kind='run_stats', meta=_meta(cli_config), rows=[RunStatsSchema().dump(stats)])
    _emit(report, cli_config.output_format, cli_config.output_path)


@click.command('oracle')
@click.option('--exponent', type=click.IntRange(min=1), default=None, help='Exact length of one exponent.')
@click.option('--limit', type=click.IntRange(min=1), default=None, help='Accumulated optimum over [1, P].')
@click.option('--cache', 'cache_path', type=click.Path(dir_okay=False), default=None, help='Cache file.')
@click.option('--budget', type=click.IntRange(min=1), default=None, help='Node limit.')
@click.option('--workers', type=click.IntRange(min=1), default=None, help='Worker processes.')
@click.option('--format', 'fmt', type=FORMAT_CHOICE, default=None, help='Output format.')
@with_appcontext
@exit_on_error
def oracle_command(exponent, limit, cache_path, budget, workers, fmt):
    """Exact minimal chain lengths."""
    if (exponent is None) == (limit is None):
        raise click.UsageError('Give exactly one of --exponent and --limit.')
    config = current_app.config
    fmt = fmt or config['REPORT_FORMAT']
    budget = budget or config['ORACLE_NODE_BUDGET']

    if exponent is not None:
        try:
            chain = optimal_chain(exponent, budget)
            row = {'exponent': exponent, 'length': chain.additions, 'chain': list(chain.values), 'proven': True}
        except BudgetExceeded as err:
            row = {'exponent': exponent, 'length': err.upper, 'chain': list(err.witness.values),
                   'proven': False, 'lower': err.lower}
            _emit(single_row_report('oracle', row, {'budget': budget}), fmt)
            raise
        _emit(single_row_report('oracle', row, {'budget': budget}), fmt)
        return

    table = optimal_table(
        limit,
        cache_path=cache_path or config['ORACLE_CACHE_PATH'],
        workers=workers or config['BENCH_WORKERS'],
        budget=budget,
    )
    check_published_totals(table)
    row = {'limit': limit, 'accumulated': table.accumulated(limit)}
    _emit(single_row_report('oracle_table', row, {'budget': budget}), fmt)


@click.command('baseline')
@click.option('--method', type=click.Choice(['binary', 'mary']), required=True, help='Baseline method.')
@click.option('--radix', type=int, default=4, show_default=True, help='Radix for the m-ary method.')
@click.option('--exponent', type=click.IntRange(min=1), required=True, help='Exponent.')
@click.option('--format', 'fmt', type=FORMAT_CHOICE, default=None, help='Output format.')
@with_appcontext
@exit_on_error
def baseline_command(method, radix, exponent, fmt):
    """Binary or m-ary chain for an exponent."""
    if method == 'binary':
        chain, label = binary_chain(exponent), method_label(Method.BINARY)
    else:
        chain, label = mary_chain(exponent, radix), method_label(Method.MARY, radix)
    row = {'method': label, 'exponent': exponent, 'length': chain.additions, 'chain': list(chain.values)}
    _emit(single_row_report('baseline', row), fmt or current_app.config['REPORT_FORMAT'])


@click.command('bench')
@click.argument('table', type=click.Choice(['table1', 'table2', 'table3', 'table4']))
@click.option('--scale', type=click.Choice(['ci', 'paper']), default='ci', show_default=True,
              help='Experiment budget.')
@click.option('--workers', type=click.IntRange(min=1), default=None, help='Worker processes.')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Write the report here.')
@click.option('--format', 'fmt', type=FORMAT_CHOICE, default=None, help='Report format.')
@click.option('--cache', 'cache_path', type=click.Path(dir_okay=False), default=None, help='Oracle cache file.')
@ga_options
@with_appcontext
@exit_on_error
def bench_command(table, scale, workers, out, fmt, cache_path, ga_overrides, config_file):
    """Reproduce one of the published tables."""
    config = current_app.config
    cli_config = build_cli_config(
        resolve_ga_config(config, config_file, ga_overrides),
        workers=workers or config['BENCH_WORKERS'],
        output_format=fmt or config['REPORT_FORMAT'],
        output_path=out,
        oracle_cache_path=cache_path or config['ORACLE_CACHE_PATH'],
    )
    budget = config['BENCH_SCALES'][scale]
    current_app.logger.info('Running %s at %s scale', table, scale)

    if table == 'table1':
        report = bench_service.table1(scale, budget, cli_config.ga, workers=cli_config.workers,
                                      cache_path=cli_config.oracle_cache_path,
                                      budget=config['ORACLE_NODE_BUDGET'])
    elif table == 'table2':
        report = bench_service.table2(scale, budget, cli_config.ga, workers=cli_config.workers)
    elif table == 'table3':
        report = bench_service.table3(scale, budget, cli_config.ga)
    else:
        report = bench_service.table4(scale, budget, cli_config.ga)
    _emit(report, cli_config.output_format, cli_config.output_path)


@click.command('validate')
@click.option('--file', 'chain_file', type=click.Path(dir_okay=False), required=True, help='Chain file.')
@click.option('--exponent', type=click.IntRange(min=1), required=True, help='Expected exponent.')
@with_appcontext
@exit_on_error
def validate_command(chain_file, exponent):
    """Validate a chain file; exit 0 iff it is a chain for the exponent."""
    report = validate_chain(read_chain_file(chain_file), exponent)
    click.echo(render_report(single_row_report('validation', ValidationReportSchema().dump(report)), 'json'),
               nl=False)
    if not report.valid:
        current_app.logger.info('Chain in %s is invalid for %d', chain_file, exponent)
        click.get_current_context().exit(ExitCodes.INVALID)


@click.command('modexp')
@click.option('--file', 'chain_file', type=click.Path(dir_okay=False), required=True, help='Chain file.')
@click.option('--base', type=click.IntRange(min=0), required=True, help='Decimal base.')
@click.option('--mod', 'modulus', type=int, required=True, help='Decimal modulus (>= 2).')
@with_appcontext
@exit_on_error
def modexp_command(chain_file, base, modulus):
    """Execute a chain file as a modular exponentiation."""
    chain = AdditionChain.from_values(read_chain_file(chain_file))
    execution = execute(chain, ModContext(base=base, modulus=modulus))
    row = {
        'base': base,
        'modulus': modulus,
        'exponent': chain.target,
        'result': execution.result,
        'mults': execution.mults,
    }
    click.echo(render_report(single_row_report('modexp', row), 'json'), nl=False)


COMMANDS = (ga_command, oracle_command, baseline_command, bench_command, validate_command, modexp_command)


def register_commands(app: Flask) -> None:
    """Register CLI commands with the Flask app."""
    for command in COMMANDS:
        app.cli.add_command(command)


def _create_app():
    from . import create_app
    return create_app(os.environ.get('ADDCHAIN_CONFIG', 'config.Config'))


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Dispatch one subcommand and return its exit code.

    0 on success, 1 on invalid input or a failed validation, 2 on internal errors.
    """
    group = FlaskGroup(
        name='addchain',
        create_app=_create_app,
        add_default_commands=False,
        add_version_option=False,
        load_dotenv=False,
        help='Addition-chain search, baselines and benchmarks.',
    )
    try:
        result = group.main(args=list(argv) if argv is not None else None, prog_name='addchain',
                            standalone_mode=False)
    except click.ClickException as err:
        err.show()
        return ExitCodes.INVALID
    except click.exceptions.Abort:
        click.echo('Aborted!', err=True)
        return ExitCodes.INVALID
    except Exception as err:
        logging.getLogger(__name__).exception('Unhandled error: %s', describe(err))
        return ExitCodes.INTERNAL
    return result if isinstance(result, int) else ExitCodes.SUCCESS


def main() -> None:
    sys.exit(run())
