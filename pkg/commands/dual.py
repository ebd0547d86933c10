import click
from flask import current_app
from flask.cli import with_appcontext

from commands.common import command_echo, open_workspace, resolve_seed, workspace_path
from services.axioms import AuditConfig, audit_deviation
from services.duality import dual_es_eval, dual_functional, dual_var_eval
from services.measures import lower_range
from services.reports import emit
from utils.decorators import handle_cli_errors, report_options, workspace_option

EVALUATORS = {'var': dual_var_eval, 'es': dual_es_eval}


@click.command('dual')
@click.argument('gfamily')
@click.option('--variable', '-v', 'variables', multiple=True,
              help='Variable name; repeat for several (default: all variables).')
@click.option('--kind', type=click.Choice(sorted(EVALUATORS)), default='es', show_default=True)
@click.option('--audit/--no-audit', default=True, show_default=True,
              help='Also audit the functional the family induces.')
@workspace_option
@report_options
@with_appcontext
@handle_cli_errors
def dual_command(gfamily, variables, kind, audit, workspace, seed, out, fmt):
    """
    Evaluate the VaR or ES dual representation of the G-family GFAMILY.
    The lower range is reported alongside: a zero-curve family reproduces it.
    """
    seed = resolve_seed(seed)
    ws = open_workspace(workspace)
    G = ws.gfamily(gfamily)
    evaluate = EVALUATORS[kind]
    rows = []
    for name in list(variables) or sorted(ws.variables):
        X = ws.variable(name)
        rows.append({'variable': name, 'dual': evaluate(G, X), 'lower_range': lower_range(X)})
    results = {
        'gfamily': G.to_dict(),
        'kind': kind,
        'rows': rows,
    }
    if audit:
        config = AuditConfig.from_app_config(current_app.config, seed=seed)
        report = audit_deviation(dual_functional(G, kind), config)
        results['audit'] = {
            'classification': report.classification,
            'labels': report.labels,
            'status_counts': report.status_counts(),
            'checks': {r.axiom: r.status for r in report.results},
        }
    echo = command_echo(seed=seed, workspace=workspace_path(workspace))
    emit(echo, results, seed=seed, fmt=fmt, out=out)
