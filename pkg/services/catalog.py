"""
String ids for catalog functionals, e.g. `sd`, `iqd@0.4`, `lvard@steps`.
Used by workspace files and by the CLI.
"""

import re

from services import measures
from utils.errors import InvalidParameter, UnknownName

_ID = re.compile(r'^(?P<base>[a-z0-9_+]+)(?:@(?P<param>[^@\s]+))?$')

_PLAIN_DEVIATIONS = {
    'sd': measures.sd_functional,
    'sd_minus': measures.sd_minus_functional,
    'sd_plus': measures.sd_plus_functional,
    'fr': measures.full_range_functional,
    'lr': measures.lower_range_functional,
    'ur': measures.upper_range_functional,
    'chi_const': measures.chi_constants,
}

_LEVEL_DEVIATIONS = {
    'var': measures.var_deviation,
    'es': measures.es_deviation,
    'iqd': measures.iqd_functional,
    'ied': measures.ied_functional,
    'iqd2+sd': measures.composite_iqd_sq_plus_sd,
}

_PLAIN_RISKS = {
    'mean': measures.mean_risk,
    'worst': measures.worst_risk,
    'sup': measures.sup_functional,
}

_LEVEL_RISKS = {
    'var': measures.var_risk,
    'es': measures.es_risk,
}

DEVIATION_IDS = sorted(_PLAIN_DEVIATIONS) + [f'{k}@<alpha>' for k in sorted(_LEVEL_DEVIATIONS)] + ['lvard@<curve>']
RISK_IDS = sorted(_PLAIN_RISKS) + [f'{k}@<alpha>' for k in sorted(_LEVEL_RISKS)]


def parse_id(functional_id):
    match = _ID.match(functional_id.strip())
    if not match:
        raise UnknownName(f'Malformed functional id {functional_id!r}.')
    return match.group('base'), match.group('param')


def _level(functional_id, param):
    try:
        return float(param)
    except (TypeError, ValueError):
        raise InvalidParameter(f'{functional_id!r}: level {param!r} is not a number.') from None


def resolve_deviation(functional_id, curves=None):
    """Build the DeviationFunctional for a catalog id; `curves` maps curve ids for lvard."""
    base, param = parse_id(functional_id)
    if param is None and base in _PLAIN_DEVIATIONS:
        return _PLAIN_DEVIATIONS[base]()
    if param is not None and base in _LEVEL_DEVIATIONS:
        return _LEVEL_DEVIATIONS[base](_level(functional_id, param))
    if param is not None and base == 'lvard':
        curves = curves or {}
        if param not in curves:
            raise UnknownName(f'Benchmark curve {param!r} is not defined.')
        return measures.lvard_functional(curves[param])
    raise UnknownName(f'Unknown deviation {functional_id!r}; known ids: {", ".join(DEVIATION_IDS)}.')


def resolve_risk(functional_id):
    base, param = parse_id(functional_id)
    if param is None and base in _PLAIN_RISKS:
        return _PLAIN_RISKS[base]()
    if param is not None and base in _LEVEL_RISKS:
        return _LEVEL_RISKS[base](_level(functional_id, param))
    raise UnknownName(f'Unknown risk functional {functional_id!r}; known ids: {", ".join(RISK_IDS)}.')
