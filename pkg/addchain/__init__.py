import os
import logging
from logging.handlers import RotatingFileHandler
from flask import Flask

__version__ = '1.0.0'


def create_app(config_object='config.Config'):
    app = Flask(__name__)
    app.config.from_object(config_object)

    # Configure logging
    if app.config.get('LOG_TO_FILE') and not app.debug and not app.testing:
        log_dir = os.path.dirname(app.config['LOG_FILE_PATH'])
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir)

        # Rotating File Handler for long benchmark runs
        file_handler = RotatingFileHandler(
            app.config['LOG_FILE_PATH'],
            maxBytes=app.config['LOG_FILE_MAX_BYTES'],
            backupCount=app.config['LOG_FILE_BACKUP_COUNT']
        )
        file_handler.setFormatter(logging.Formatter(
            '%(asctime)s [%(levelname)s] %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        ))
        file_handler.setLevel(logging.INFO)
        app.logger.addHandler(file_handler)

    app.logger.setLevel(app.config.get('LOG_LEVEL', 'INFO'))
    app.logger.debug('addchain %s configured from %s', __version__, config_object)

    # Register CLI commands
    from .cli import register_commands
    register_commands(app)

    return app
