import click
from flask import current_app
from flask.cli import with_appcontext

from commands.common import command_echo, open_workspace, resolve_seed, workspace_path
from services.axioms import AuditConfig, audit_deviation, check_risk_axioms
from services.reports import emit
from utils.decorators import handle_cli_errors, report_options, workspace_option


@click.command('audit')
@click.argument('functional')
@click.option('--kind', type=click.Choice(['deviation', 'risk']), default='deviation', show_default=True)
@click.option('--n-variables', type=click.IntRange(min=1), default=None,
              help='Generated variables per check (default: AUDIT_N_VARIABLES).')
@click.option('--n-pairs', type=click.IntRange(min=1), default=None,
              help='Generated pairs per check (default: AUDIT_N_PAIRS).')
@workspace_option
@report_options
@with_appcontext
@handle_cli_errors
def audit_command(functional, kind, n_variables, n_pairs, workspace, seed, out, fmt):
    """
    Run the seeded axiom audit on FUNCTIONAL and classify it.
    Catalog ids work without a workspace.
    """
    seed = resolve_seed(seed)
    ws = open_workspace(workspace, required=False)
    config = AuditConfig.from_app_config(current_app.config, seed=seed, n_variables=n_variables, n_pairs=n_pairs)
    if kind == 'risk':
        report = check_risk_axioms(ws.risk(functional), config)
    else:
        report = audit_deviation(ws.deviation(functional), config)
    rows = [
        {
            'axiom': r.axiom,
            'status': r.status,
            'checked': r.checked,
            'violations': r.violations,
            'first_margin': r.witnesses[0].margin if r.witnesses else None,
        }
        for r in report.results
    ]
    results = {'audit_config': config.to_dict(), 'report': report.to_dict(), 'failures': report.failures, 'rows': rows}
    echo = command_echo(seed=seed, workspace=workspace_path(workspace),
                        n_variables=config.n_variables, n_pairs=config.n_pairs)
    emit(echo, results, seed=seed, fmt=fmt, out=out)
