import click
from flask.cli import with_appcontext

from commands.common import command_echo, resolve_seed
from services.duality import PRINTED_DZ, build_counterexample
from services.reports import emit
from utils.decorators import handle_cli_errors, report_options


@click.command('counterexample')
@click.option('--n', 'n', type=int, default=2000, show_default=True, help='Atoms; even and >= 10.')
@click.option('--alpha', type=click.FloatRange(0.0, 0.5, min_open=True, max_open=True), default=0.4,
              show_default=True)
@click.option('--include-variables', is_flag=True, help='Also write the values of X, Y and Z.')
@report_options
@with_appcontext
@handle_cli_errors
def counterexample_command(n, alpha, include_variables, seed, out, fmt):
    """
    Mirrored-uniform pair X, Y and their midpoint Z under D = IQD + SD:
    X and Y share a law and Z precedes X in convex order, yet D(Z) > D(X).
    """
    seed = resolve_seed(seed)
    bundle = build_counterexample(n, alpha)
    results = bundle.to_dict(include_variables=include_variables)
    results['functional'] = f'iqd@{alpha:g}+sd'
    results['printed_dz'] = PRINTED_DZ
    emit(command_echo(seed=seed), results, seed=seed, fmt=fmt, out=out)
