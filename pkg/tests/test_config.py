"""
Tests for GA configuration parsing and layering.
"""

import pytest

from addchain.errors import ConfigInvalid
from addchain.models import GaConfig
from addchain.utils import parse_config_text, resolve_ga_config
from config import Config, TestingConfig


pytestmark = pytest.mark.unit


def _app_config(config_cls):
    return {key: getattr(config_cls, key) for key in dir(config_cls) if key.isupper()}


class TestParseConfigText:
    """Test the flat key = value format."""

    def test_comments_and_blank_lines(self):
        text = '# GA\n\npopulation_size = 50  # trailing\nseed=3\n'

        assert parse_config_text(text) == {'population_size': '50', 'seed': '3'}

    def test_missing_value(self):
        with pytest.raises(ConfigInvalid) as exc_info:
            parse_config_text('seed =\n', source='ga.conf')

        assert 'ga.conf:1' in exc_info.value.message

    def test_duplicate_key(self):
        with pytest.raises(ConfigInvalid):
            parse_config_text('seed = 1\nseed = 2\n')


class TestResolveGaConfig:
    """Test app config, config file and flag layering."""

    def test_defaults_are_published_parameters(self):
        assert resolve_ga_config(_app_config(Config)) == GaConfig()

    def test_testing_config(self):
        cfg = resolve_ga_config(_app_config(TestingConfig))

        assert (cfg.population_size, cfg.max_generations, cfg.seed) == (40, 40, 1)

    def test_file_overrides_app_config(self, tmp_path):
        path = tmp_path / 'ga.conf'
        path.write_text('mutation_rate = 0.5\nelitist_mutation = true\n')

        cfg = resolve_ga_config(_app_config(Config), config_file=path)

        assert cfg.mutation_rate == 0.5
        assert cfg.elitist_mutation is True

    def test_flags_override_file(self, tmp_path):
        path = tmp_path / 'ga.conf'
        path.write_text('n_mutants = 2\n')

        cfg = resolve_ga_config(_app_config(Config), config_file=path, overrides={'n_mutants': 6, 'seed': None})

        assert cfg.n_mutants == 6
        assert cfg.seed == 0

    @pytest.mark.parametrize('overrides', [
        {'p_double': 0.9},
        {'p_single': 0.5, 'p_two': 0.5, 'p_uniform': 0.5},
        {'population_size': 1},
        {'crossover_rate': 1.5},
        {'max_generations': 0},
    ])
    def test_invariants(self, overrides):
        with pytest.raises(ConfigInvalid):
            resolve_ga_config(_app_config(Config), overrides=overrides)

    def test_rule_probabilities_may_be_rebalanced(self):
        cfg = resolve_ga_config(_app_config(Config), overrides={'p_double': 0.5, 'p_add': 0.4, 'p_random': 0.1})

        assert cfg.p_double == 0.5

    def test_unknown_key(self, tmp_path):
        path = tmp_path / 'ga.conf'
        path.write_text('pop_size = 10\n')

        with pytest.raises(ConfigInvalid):
            resolve_ga_config(_app_config(Config), config_file=path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigInvalid):
            resolve_ga_config(_app_config(Config), config_file=tmp_path / 'nope.conf')
