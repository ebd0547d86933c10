import click
from flask import current_app
from flask.cli import with_appcontext

from commands.common import command_echo, open_workspace, resolve_seed, workspace_path
from models.acceptance import RAY_VARIANTS
from models.report import CheckResult
from services.axioms import (
    STAR_SHAPED,
    AuditConfig,
    check_positive_homogeneity,
    check_star_shapedness,
    generate_variables,
)
from services.envelopes import check_envelope_convexity, envelope_family, ray_envelope, verify_domination
from services.measures import chi_constants, lower_range, min_family
from services.reports import emit
from utils.decorators import handle_cli_errors, report_options, workspace_option
from utils.errors import PreconditionFailed
from utils.numeric import leq, margin

CONVEXITY_SAMPLE = 5


def _require(D, config, variant):
    """The star variant needs a star-shaped D, the cone variant also a positively homogeneous one."""
    checks = [r for r in check_star_shapedness(D, config) if r.axiom == STAR_SHAPED]
    if variant == 'cone':
        checks.append(check_positive_homogeneity(D, config))
    for result in checks:
        if not result.passed:
            raise PreconditionFailed(
                f'{D.name} fails {result.axiom} ({result.violations} violations); '
                f'{variant} envelopes would not represent it.'
            )
    return [r.axiom for r in checks]


def _summary(results):
    worst = max((w.margin for r in results for w in r.witnesses), default=0.0)
    return {
        'envelopes': len(results),
        'passed': sum(r.passed for r in results),
        'checked': sum(r.checked for r in results),
        'violations': sum(r.violations for r in results),
        'worst_margin': worst,
    }


def _lower_range_bound(family, points, config):
    """Each lrd envelope against LR on the points sharing its anchor's space."""
    result = CheckResult('lower_range_bound')
    for env in family:
        for X in (X for X in points if X.space == env.anchor.space):
            lhs, rhs = env(X), lower_range(X)
            result.record(leq(lhs, rhs, config.tolerance), {'X': X}, lhs, rhs, margin(lhs, rhs))
    return result


@click.command('envelope')
@click.argument('functional')
@click.option('--pool', type=click.IntRange(min=1), default=None,
              help='Number of anchors (default: ENVELOPE_POOL).')
@click.option('--variant', type=click.Choice(RAY_VARIANTS), default='star', show_default=True)
@workspace_option
@report_options
@with_appcontext
@handle_cli_errors
def envelope_command(functional, pool, variant, workspace, seed, out, fmt):
    """
    Represent FUNCTIONAL as a minimum of ray envelopes anchored at a seeded pool.

    Reports the attainment residual min(envelopes)(X) - D(X) on fresh test
    points (each X adds its own envelope) and how the envelopes compare with
    D on their loci.
    """
    seed = resolve_seed(seed)
    pool = pool or current_app.config['ENVELOPE_POOL']
    ws = open_workspace(workspace, required=False)
    D = ws.deviation(functional)
    config = AuditConfig.from_app_config(current_app.config, seed=seed)
    preconditions = _require(D, config, variant) if variant in ('star', 'cone') else []

    anchors = generate_variables(config, pool, 'envelope-anchors')
    family = envelope_family(D, anchors, variant)
    if variant == 'halfline':
        family.append(chi_constants())
    tests = generate_variables(config, pool, 'envelope-tests')

    rows = []
    for i, X in enumerate(tests):
        dx = D(X)
        value, index = min_family(family + [ray_envelope(X, dx, variant)], X)
        rows.append({'point': i, 'deviation': dx, 'envelope_min': value, 'residual': value - dx,
                     'from_own_anchor': index == len(family)})
    residuals = [abs(row['residual']) for row in rows]

    envelopes = [env for env in family if hasattr(env, 'anchor')]
    if variant == 'lrd':
        bound = _lower_range_bound(envelopes, anchors + tests, config)
        checks = {'lower_range_bound': bound.to_dict()}
    else:
        checks = {'domination': _summary([verify_domination(D, env, config) for env in envelopes])}
    checks['convexity'] = _summary([check_envelope_convexity(env, config) for env in envelopes[:CONVEXITY_SAMPLE]])

    results = {
        'functional': D.name,
        'variant': variant,
        'pool': pool,
        'preconditions': preconditions,
        'attainment': {'points': len(rows), 'max_residual': max(residuals)},
        **checks,
        'envelopes': [env.to_dict() for env in envelopes],
        'rows': rows,
    }
    current_app.logger.info('Envelope run for %s (%s): max attainment residual %.3g',
                            D.name, variant, results['attainment']['max_residual'])
    echo = command_echo(seed=seed, pool=pool, workspace=workspace_path(workspace))
    emit(echo, results, seed=seed, fmt=fmt, out=out)
