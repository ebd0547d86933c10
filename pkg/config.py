"""
Configuration Module for StarDev

Defines configuration classes for different environments:
- DevelopmentConfig: Local work with debug logging
- TestingConfig: Automated testing with small audit corpora
- ProductionConfig: Full-size audits, quiet logging

Every setting can be overridden from the environment (or a .env file).
See README.md for the variables.
"""

import os
from dotenv import load_dotenv

# Load environment variables from the .env file.
load_dotenv()


def _float_env(name, default):
    return float(os.getenv(name, default))


def _int_env(name, default):
    return int(os.getenv(name, default))


class Config:
    """
    Base configuration class. Contains defaults and settings loaded from
    environment variables that are common to all environments.
    """
    TOOL_VERSION = '1.0.0'

    # --- Inputs and reports ---
    # Workspace used when a command is run without --workspace.
    DEFAULT_WORKSPACE = os.getenv('STARDEV_WORKSPACE')
    DEFAULT_SEED = _int_env('STARDEV_SEED', 0)
    REPORT_FORMAT = os.getenv('STARDEV_FORMAT', 'json')
    LOG_LEVEL = os.getenv('STARDEV_LOG_LEVEL', 'INFO')

    # --- Audit corpus sizes ---
    AUDIT_N_VARIABLES = _int_env('STARDEV_AUDIT_N_VARIABLES', 200)
    AUDIT_N_PAIRS = _int_env('STARDEV_AUDIT_N_PAIRS', 200)
    AUDIT_TOLERANCE = _float_env('STARDEV_AUDIT_TOLERANCE', 1e-9)

    # Envelope demonstrations draw this many anchors when --pool is not given.
    ENVELOPE_POOL = 50

    def __init__(self):
        """
        Validates settings that come from the environment.
        The application will refuse to start if they are unusable.
        """
        if self.REPORT_FORMAT not in ('json', 'csv'):
            raise ValueError("STARDEV_FORMAT must be either 'json' or 'csv'.")


class DevelopmentConfig(Config):
    """
    Configuration for the development environment.
    """
    ENV = 'development'
    DEBUG = True
    LOG_LEVEL = os.getenv('STARDEV_LOG_LEVEL', 'DEBUG')


class TestingConfig(Config):
    """
    Configuration for running automated tests.

    Audit corpora are kept small so CLI tests stay fast; the library-level
    tests build their own AuditConfig with the full sizes they need.
    """
    ENV = 'testing'
    TESTING = True
    DEFAULT_WORKSPACE = None
    DEFAULT_SEED = 0
    REPORT_FORMAT = 'json'
    LOG_LEVEL = 'WARNING'
    AUDIT_N_VARIABLES = 30
    AUDIT_N_PAIRS = 30
    ENVELOPE_POOL = 10


class ProductionConfig(Config):
    """
    Configuration for full-size runs.
    """
    ENV = 'production'
    DEBUG = False
    LOG_LEVEL = os.getenv('STARDEV_LOG_LEVEL', 'WARNING')


# A dictionary to easily switch between configurations in the app factory.
config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
    'default': DevelopmentConfig
}
