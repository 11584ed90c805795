import os


def _env_bool(name: str, default: str) -> bool:
    return os.environ.get(name, default).lower() in ('true', '1', 'yes')


class Config:
    # GA defaults (parameter set of the published experiments)
    GA_POPULATION_SIZE = int(os.environ.get('GA_POPULATION_SIZE', '200'))
    GA_MAX_GENERATIONS = int(os.environ.get('GA_MAX_GENERATIONS', '300'))
    GA_P_SINGLE = float(os.environ.get('GA_P_SINGLE', '0.20'))
    GA_P_TWO = float(os.environ.get('GA_P_TWO', '0.35'))
    GA_P_UNIFORM = float(os.environ.get('GA_P_UNIFORM', '0.45'))
    # "0.4%" and "1.0%" read as probabilities 0.4 and 1.0
    GA_CROSSOVER_RATE = float(os.environ.get('GA_CROSSOVER_RATE', '0.4'))
    GA_MUTATION_RATE = float(os.environ.get('GA_MUTATION_RATE', '1.0'))
    GA_N_MUTANTS = int(os.environ.get('GA_N_MUTANTS', '4'))
    GA_P_DOUBLE = float(os.environ.get('GA_P_DOUBLE', '0.65'))
    GA_P_ADD = float(os.environ.get('GA_P_ADD', '0.25'))
    GA_P_RANDOM = float(os.environ.get('GA_P_RANDOM', '0.10'))
    GA_EARLY_STOP = _env_bool('GA_EARLY_STOP', 'true')
    GA_ELITIST_MUTATION = _env_bool('GA_ELITIST_MUTATION', 'false')
    GA_SEED = int(os.environ.get('GA_SEED', '0'))

    # Bench
    BENCH_WORKERS = int(os.environ.get('BENCH_WORKERS', '1'))
    REPORT_FORMAT = os.environ.get('REPORT_FORMAT', 'json')
    BENCH_SCALES = {
        'ci': {
            'ranges': [64, 128],
            'runs': 5,
            'max_generations': 100,
            'bit_sizes': [32],
            'samples': 20,
            'special_seeds': 5,
        },
        'paper': {
            'ranges': [512, 1000, 1024, 2000, 2048, 4096],
            'runs': 40,
            'max_generations': 300,
            'bit_sizes': [32, 64],
            'samples': 20,
            'special_seeds': 40,
        },
    }

    # Oracle
    ORACLE_CACHE_PATH = os.environ.get('ORACLE_CACHE_PATH', 'cache/optimal.acot')
    ORACLE_NODE_BUDGET = int(os.environ.get('ORACLE_NODE_BUDGET', '50000000'))

    # Logging Configuration
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')
    LOG_TO_FILE = _env_bool('LOG_TO_FILE', 'false')
    LOG_FILE_PATH = os.environ.get('LOG_FILE_PATH', 'logs/addchain.log')
    LOG_FILE_MAX_BYTES = 10 * 1024 * 1024  # 10MB
    LOG_FILE_BACKUP_COUNT = 5


class DevelopmentConfig(Config):
    DEBUG = True
    LOG_LEVEL = 'DEBUG'


class ProductionConfig(Config):
    DEBUG = False

    # Long benchmark runs keep an audit trail on disk
    LOG_TO_FILE = True
    LOG_LEVEL = 'WARNING'


class TestingConfig(Config):
    TESTING = True
    GA_POPULATION_SIZE = 40
    GA_MAX_GENERATIONS = 40
    GA_SEED = 1
    ORACLE_CACHE_PATH = None
    ORACLE_NODE_BUDGET = 2000000
    LOG_TO_FILE = False
    LOG_LEVEL = 'WARNING'
    BENCH_SCALES = {
        'ci': {
            'ranges': [16, 32],
            'runs': 2,
            'max_generations': 10,
            'bit_sizes': [12],
            'samples': 3,
            'special_seeds': 1,
        },
        'paper': Config.BENCH_SCALES['paper'],
    }
