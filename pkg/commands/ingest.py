import os

import click
from flask.cli import with_appcontext

from commands.common import command_echo, workspace_path
from services.reports import emit
from services.workspace import ingest_csv, load_workspace, save_workspace
from utils.decorators import handle_cli_errors, report_options, workspace_option
from utils.errors import InvalidParameter


@click.command('ingest')
@click.argument('csv_path', type=click.Path(dir_okay=False))
@click.option('--column', '-c', required=True, help='Header name of the numeric column.')
@click.option('--name', '-n', default=None, help='Variable name (default: the column name).')
@workspace_option
@report_options
@with_appcontext
@handle_cli_errors
def ingest_command(csv_path, column, name, workspace, seed, out, fmt):
    """
    Append an equal-weight space and variable built from one CSV column to
    the workspace; the workspace file is created when it does not exist yet.
    """
    path = workspace_path(workspace)
    if not path:
        raise InvalidParameter('No workspace given: pass --workspace or set STARDEV_WORKSPACE.')
    existing = load_workspace(path) if os.path.exists(path) else None
    ws = ingest_csv(csv_path, column, name=name, workspace=existing)
    save_workspace(ws, path)
    name = name or column
    X = ws.variable(name)
    results = {
        'workspace': path,
        'variable': name,
        'space': ws.variable_spaces[name],
        'atoms': X.space.n,
    }
    emit(command_echo(workspace=path), results, seed=seed, fmt=fmt, out=out)
