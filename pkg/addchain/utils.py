"""Utility functions for configuration layering and chain files."""

from pathlib import Path
from typing import Dict, List, Mapping, Optional

from marshmallow import ValidationError

from .errors import ChainFileError, ConfigInvalid
from .models import CliConfig, GaConfig
from .schemas import CliConfigSchema, GaConfigSchema
from .services.chain_core import parse_chain_text

# GaConfig field -> app config key
GA_CONFIG_KEYS = {
    'population_size': 'GA_POPULATION_SIZE',
    'max_generations': 'GA_MAX_GENERATIONS',
    'p_single': 'GA_P_SINGLE',
    'p_two': 'GA_P_TWO',
    'p_uniform': 'GA_P_UNIFORM',
    'crossover_rate': 'GA_CROSSOVER_RATE',
    'mutation_rate': 'GA_MUTATION_RATE',
    'n_mutants': 'GA_N_MUTANTS',
    'p_double': 'GA_P_DOUBLE',
    'p_add': 'GA_P_ADD',
    'p_random': 'GA_P_RANDOM',
    'early_stop_at_lower_bound': 'GA_EARLY_STOP',
    'elitist_mutation': 'GA_ELITIST_MUTATION',
    'seed': 'GA_SEED',
}


def ga_defaults_from_config(config: Mapping) -> Dict:
    """GaConfig fields present in an app config mapping."""
    return {field: config[key] for field, key in GA_CONFIG_KEYS.items() if key in config}


def parse_config_text(text: str, source: str = '<config>') -> Dict[str, str]:
    """
    Parse flat ``key = value`` lines.

    Blank lines and ``#`` comments are skipped; values stay strings for the
    schema to convert. Unknown keys are rejected by the schema, not here.
    """
    values = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.split('#', 1)[0].strip()
        if not stripped:
            continue
        key, sep, value = stripped.partition('=')
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigInvalid(
                f'{source}:{line_number}: expected "key = value"',
                details={'line': line_number, 'text': line}
            )
        if key in values:
            raise ConfigInvalid(f'{source}:{line_number}: duplicate key "{key}"', details={'key': key})
        values[key] = value
    return values


def read_config_file(path) -> Dict[str, str]:
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as err:
        raise ConfigInvalid(f'Cannot read config file {path}: {err.strerror}', details={'path': str(path)}) from err
    return parse_config_text(text, source=str(path))


def resolve_ga_config(config: Mapping, config_file=None, overrides: Optional[Mapping] = None) -> GaConfig:
    """
    Layer app config defaults, an optional config file and CLI overrides.

    ``None`` overrides are ignored so unset flags keep the lower layers.
    """
    merged = ga_defaults_from_config(config)
    if config_file is not None:
        merged.update(read_config_file(config_file))
    merged.update({key: value for key, value in (overrides or {}).items() if value is not None})
    try:
        return GaConfigSchema().load(merged)
    except ValidationError as err:
        raise ConfigInvalid('GA configuration violates its invariants', details=err.messages) from err


def build_cli_config(ga: GaConfig, workers: int = 1, output_format: str = 'json',
                     output_path=None, oracle_cache_path=None) -> CliConfig:
    payload = {
        'ga': ga.to_dict(),
        'workers': workers,
        'output_format': output_format,
        'output_path': str(output_path) if output_path else None,
        'oracle_cache_path': str(oracle_cache_path) if oracle_cache_path else None,
    }
    try:
        return CliConfigSchema().load(payload)
    except ValidationError as err:
        raise ConfigInvalid('Invalid command-line configuration', details=err.messages) from err


def read_chain_file(path) -> List[int]:
    """Values of a plain-text chain file."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as err:
        raise ChainFileError(f'Cannot read chain file {path}: {err.strerror}', details={'path': str(path)}) from err
    return parse_chain_text(text)
