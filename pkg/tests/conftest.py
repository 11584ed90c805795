"""
Pytest fixtures for the addition-chain toolkit tests.

This module provides the Flask app and CLI runner, GA configurations sized
for fast runs, chain files and precomputed optimal-length tables.
"""

import numpy as np
import pytest

from addchain import create_app
from addchain.models import GaConfig
from addchain.services.oracle import compute_table


# ============================================================================
# Application Fixtures
# ============================================================================

@pytest.fixture(scope='function')
def app():
    """
    Create and configure a Flask application instance for testing.

    Uses TestingConfig which provides:
    - Testing mode enabled
    - Small GA budgets and CI benchmark scales
    - No oracle cache file
    """
    app = create_app('config.TestingConfig')

    with app.app_context():
        yield app


@pytest.fixture(scope='function')
def runner(app):
    """
    Create a CLI test runner.

    Args:
        app: Flask application fixture

    Returns:
        FlaskCliRunner: CLI runner for testing CLI commands
    """
    return app.test_cli_runner()


@pytest.fixture(scope='function')
def testing_env(monkeypatch):
    """Make `run(argv)` build its app from TestingConfig."""
    monkeypatch.setenv('ADDCHAIN_CONFIG', 'config.TestingConfig')


# ============================================================================
# GA Fixtures
# ============================================================================

@pytest.fixture(scope='function')
def ga_config():
    """Published parameter set with a fixed seed."""
    return GaConfig(seed=1)


@pytest.fixture(scope='function')
def small_ga_config():
    """Small population and budget for quick runs."""
    return GaConfig(population_size=20, max_generations=15, seed=7)


@pytest.fixture(scope='function')
def rng():
    return np.random.default_rng(20240611)


# ============================================================================
# Chain Files & Tables
# ============================================================================

@pytest.fixture(scope='function')
def tmp_chain_file(tmp_path):
    """
    Factory writing a chain file.

    Usage:
        path = tmp_chain_file([1, 2, 4, 8])
        path = tmp_chain_file('1 2\\n# comment\\n3\\n')
    """
    def _write(values, name='chain.txt'):
        path = tmp_path / name
        if isinstance(values, str):
            path.write_text(values)
        else:
            path.write_text('\n'.join(str(value) for value in values) + '\n')
        return path
    return _write


@pytest.fixture(scope='session')
def optimal_256():
    """l(n) for n <= 256."""
    return compute_table(256)


@pytest.fixture(scope='session')
def optimal_512():
    """l(n) for n <= 512 (slow to build)."""
    return compute_table(512)


@pytest.fixture(scope='session')
def optimal_4096():
    """l(n) for n <= 4096, built in a process pool (minutes)."""
    return compute_table(4096, workers=4)
