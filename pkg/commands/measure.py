import click
from flask.cli import with_appcontext

from commands.common import command_echo, open_workspace, resolve_seed, workspace_path
from services.reports import emit
from utils.decorators import handle_cli_errors, report_options, workspace_option
from utils.errors import UnknownName


def _resolve(workspace, name):
    """A workspace or catalog deviation, else a catalog risk functional."""
    try:
        return workspace.deviation(name)
    except UnknownName as err:
        try:
            return workspace.risk(name)
        except UnknownName:
            raise err from None


@click.command('measure')
@click.option('--variable', '-v', 'variables', multiple=True,
              help='Variable name; repeat for several (default: all variables).')
@click.option('--functional', '-f', 'functionals', multiple=True, required=True,
              help='Functional name or catalog id; repeat for several.')
@workspace_option
@report_options
@with_appcontext
@handle_cli_errors
def measure_command(variables, functionals, workspace, seed, out, fmt):
    """Evaluate functionals on workspace variables."""
    seed = resolve_seed(seed)
    ws = open_workspace(workspace)
    names = list(variables) or sorted(ws.variables)
    resolved = [(name, _resolve(ws, name)) for name in functionals]
    rows, table = [], {}
    for var_name in names:
        X = ws.variable(var_name)
        table[var_name] = {}
        for fn_name, functional in resolved:
            value = functional(X)
            table[var_name][fn_name] = value
            rows.append({'variable': var_name, 'functional': fn_name, 'value': value})
    echo = command_echo(seed=seed, workspace=workspace_path(workspace))
    emit(echo, {'rows': rows, 'table': table}, seed=seed, fmt=fmt, out=out)
