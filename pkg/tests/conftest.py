import json

import pytest

from app import create_app
from models.probability import RandomVariable
from services.axioms import AuditConfig
from services.duality import build_counterexample
from services.space import uniform_space


@pytest.fixture(scope='module')
def app():
    """
    Creates a test Flask application instance for the entire test module.
    """
    # Use the 'testing' configuration
    flask_app = create_app('testing')

    with flask_app.app_context():
        yield flask_app


@pytest.fixture(scope='module')
def runner(app):
    """
    Creates a CLI runner for invoking the registered commands.
    """
    return app.test_cli_runner()


@pytest.fixture(scope='module')
def audit_config():
    """
    A seeded audit configuration, smaller than the defaults so the suite stays fast.
    """
    return AuditConfig(seed=0, n_variables=80, n_pairs=80)


@pytest.fixture
def fair():
    return uniform_space(2)


@pytest.fixture
def coin(fair):
    """X = (-1, 1) on the fair two-atom space."""
    return RandomVariable(fair, [-1.0, 1.0])


@pytest.fixture
def coin_up(fair):
    """Y = (0, 2) on the fair two-atom space."""
    return RandomVariable(fair, [0.0, 2.0])


@pytest.fixture(scope='module')
def counterexample():
    return build_counterexample(2000, 0.4)


@pytest.fixture
def workspace_document():
    """
    A small workspace: the fair coin, a skewed three-atom variable, composite
    functionals, a benchmark curve and a zero-curve G-family.
    """
    return {
        'spaces': {
            'fair': {'probs': [0.5, 0.5]},
            'skew': {'probs': [0.25, 0.25, 0.5]},
        },
        'variables': {
            'coin': {'space': 'fair', 'values': [-1, 1]},
            'coin_up': {'space': 'fair', 'values': [0, 2]},
            'flat': {'space': 'fair', 'values': [3, 3]},
            'skewed': {'space': 'skew', 'values': [-4, 0, 2]},
        },
        'curves': {'steps': {'breakpoints': [[0, 0.1], [1, 0.5]]}},
        'functionals': {
            'D_counter': {'add': ['iqd@0.4', 'sd']},
            'D_double': {'scale': {'of': {'ref': 'D_counter'}, 'by': 2}},
            'D_min': {'min': ['fr', {'scale': {'of': 'sd', 'by': 2}}]},
        },
        'gfamilies': {
            'zero': {'alpha_grid': [0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875], 'curves': [[0] * 7]},
        },
    }


@pytest.fixture
def workspace_file(tmp_path, workspace_document):
    """
    Writes the sample workspace to a temporary JSON file and returns its path.
    """
    path = tmp_path / 'workspace.json'
    path.write_text(json.dumps(workspace_document))
    return str(path)
