"""
Decorators shared by the CLI commands.

- handle_cli_errors turns library errors into the documented exit codes
- workspace_option / report_options add the common flags
"""

import json
from functools import wraps

import click
from flask import current_app
from marshmallow import ValidationError

from utils.errors import StarDevError, WorkspaceError

U64_MAX = 2 ** 64 - 1


def handle_cli_errors(f):
    """
    Runs the command and maps a raised StarDevError to its exit code.
    The error body {"error": ..., "message": ...} goes to stderr as JSON.
    Must sit inside with_appcontext so the app logger is available.
    """
    @wraps(f)
    def decorated(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except ValidationError as err:
            error = WorkspaceError(f'Invalid workspace: {err.messages}')
        except StarDevError as err:
            error = err
        current_app.logger.error('%s failed with %s: %s', f.__name__, type(error).__name__, error)
        click.echo(json.dumps(error.to_dict()), err=True)
        click.get_current_context().exit(error.exit_code)

    return decorated


def workspace_option(f):
    return click.option(
        '--workspace', '-w',
        type=click.Path(dir_okay=False),
        default=None,
        help='Workspace JSON file (default: STARDEV_WORKSPACE).',
    )(f)


def report_options(f):
    """--seed, --out and --format, applied in that order on the command line help."""
    f = click.option('--format', 'fmt', type=click.Choice(['json', 'csv']), default=None,
                     help='Report format (default: STARDEV_FORMAT or json).')(f)
    f = click.option('--out', '-o', type=click.Path(dir_okay=False), default=None,
                     help='Write the report here instead of stdout.')(f)
    f = click.option('--seed', type=click.IntRange(0, U64_MAX), default=None,
                     help='Seed for generated corpora (default: STARDEV_SEED).')(f)
    return f
