import os
from flask import Flask
from dotenv import load_dotenv

from config import config
from extensions import ma

# Load environment variables from .env file
load_dotenv()


def create_app(config_name=None):
    """
    Application Factory: Creates and configures the Flask application.
    The app carries no routes; it hosts the configuration, the logger and
    the `stardev` subcommands registered on app.cli.
    """
    app = Flask(__name__)

    # --- 1. Load Configuration ---
    # If no config_name is provided, default to the STARDEV_ENV variable,
    # or 'development' if that's not set.
    if config_name is None:
        config_name = os.getenv('STARDEV_ENV', 'development')
    if config_name not in config:
        raise ValueError(f"Unknown configuration {config_name!r}; expected one of {', '.join(config)}.")
    app.config.from_object(config[config_name]())

    # --- 2. Logging ---
    app.logger.setLevel(app.config['LOG_LEVEL'])

    # --- 3. Initialize Extensions ---
    ma.init_app(app)

    # --- 4. Register Commands ---
    from commands import register_commands
    register_commands(app)

    return app
