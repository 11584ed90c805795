"""
Custom Decorators for CLI commands.

Provides the shared GA flags and the mapping of toolkit errors to exit codes.
"""

import json
from functools import wraps

import click
from flask import current_app

from .errors import ChainError, describe, error_payload

GA_OPTIONS = [
    click.option('--population-size', type=int, default=None, help='Chromosomes per generation.'),
    click.option('--max-generations', type=int, default=None, help='Generation limit.'),
    click.option('--p-single', type=float, default=None, help='Probability of single-point crossover.'),
    click.option('--p-two', type=float, default=None, help='Probability of two-point crossover.'),
    click.option('--p-uniform', type=float, default=None, help='Probability of uniform crossover.'),
    click.option('--crossover-rate', type=float, default=None, help='Probability a parent pair is crossed.'),
    click.option('--mutation-rate', type=float, default=None, help='Probability a child is mutated.'),
    click.option('--n-mutants', type=int, default=None, help='Mutants per mutation.'),
    click.option('--p-double', type=float, default=None, help='Probability of the double rule.'),
    click.option('--p-add', type=float, default=None, help='Probability of the add-last-two rule.'),
    click.option('--p-random', type=float, default=None, help='Probability of the random-partner rule.'),
    click.option('--early-stop/--no-early-stop', 'early_stop_at_lower_bound', default=None,
                 help='Stop once the best chain meets the lower bound.'),
    click.option('--elitist-mutation/--no-elitist-mutation', default=None,
                 help='Keep a child that beats its best mutant.'),
    click.option('--seed', type=click.IntRange(min=0), default=None, help='Master seed.'),
    click.option('--config', 'config_file', type=click.Path(dir_okay=False), default=None,
                 help='Flat "key = value" GA config file.'),
]

GA_FIELDS = (
    'population_size', 'max_generations', 'p_single', 'p_two', 'p_uniform', 'crossover_rate',
    'mutation_rate', 'n_mutants', 'p_double', 'p_add', 'p_random', 'early_stop_at_lower_bound',
    'elitist_mutation', 'seed',
)


def ga_options(fn):
    """
    Add every GaConfig flag plus ``--config`` to a command.

    The flags arrive as a single ``ga_overrides`` mapping (unset flags are None)
    and ``config_file``.

    Usage:
        @click.command('ga')
        @ga_options
        def ga_command(ga_overrides, config_file):
            ...
    """
    @wraps(fn)
    def decorator(*args, **kwargs):
        kwargs['ga_overrides'] = {name: kwargs.pop(name) for name in GA_FIELDS}
        return fn(*args, **kwargs)

    for option in reversed(GA_OPTIONS):
        decorator = option(decorator)
    return decorator


def exit_on_error(fn):
    """
    Map ChainError to its exit code; the error payload goes to stderr.

    Usage:
        @click.command('validate')
        @exit_on_error
        def validate_command():
            ...
    """
    @wraps(fn)
    def decorator(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ChainError as err:
            current_app.logger.debug('Command failed: %s', describe(err))
            click.echo(json.dumps(error_payload(err), sort_keys=True), err=True)
            click.get_current_context().exit(err.exit_code)
    return decorator
