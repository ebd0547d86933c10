"""
Logger lookup shared by services and commands.

Inside an application context the Flask app logger is used, so CLI runs
honour LOG_LEVEL from the active config. Library calls made without an app
(plain imports, unit tests) fall back to the module logger.
"""

import logging

from flask import current_app, has_app_context


def get_logger(name):
    if has_app_context():
        return current_app.logger
    return logging.getLogger(name)
