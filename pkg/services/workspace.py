"""
Workspace documents: named spaces, variables, benchmark curves, functional
expressions and G-families, stored as one JSON file.

Example:
    {
      "spaces":      {"fair": {"probs": [0.5, 0.5]}},
      "variables":   {"X": {"space": "fair", "values": [-1, 1]}},
      "curves":      {"steps": {"breakpoints": [[0, 0.1], [1, 0.5]]}},
      "functionals": {"D": {"add": [{"square": "iqd@0.4"}, "sd"]}},
      "gfamilies":   {"zero": {"alpha_grid": [0.25, 0.5, 0.75], "curves": [[0, 0, 0]]}}
    }

A functional expression is a catalog id string or one of
{"catalog": id}, {"ref": name}, {"add": [e, ...]}, {"scale": {"of": e, "by": t}},
{"square": e}, {"min": [e, ...]}.
"""

import json

import numpy as np
import pandas as pd
from marshmallow import ValidationError

from models.functional import BenchmarkCurve
from models.gcurve import GFamily
from models.probability import ProbSpace, RandomVariable
from schemas.workspace_schema import workspace_schema
from services import catalog, measures
from services.space import empirical_from_samples
from utils.errors import CsvParseError, EmptySample, UnknownName, WorkspaceError
from utils.log import get_logger


class Workspace:
    def __init__(self, spaces=None, variables=None, curves=None, functionals=None, gfamilies=None,
                 variable_spaces=None):
        self.spaces = dict(spaces or {})
        self.variables = dict(variables or {})
        # variable name -> name of the space it lives on
        self.variable_spaces = dict(variable_spaces or {})
        self.curves = dict(curves or {})
        self.functionals = dict(functionals or {})
        self.gfamilies = dict(gfamilies or {})

    # --- Lookups ---

    def variable(self, name):
        if name not in self.variables:
            raise UnknownName(f'Variable {name!r} is not defined in the workspace.')
        return self.variables[name]

    def gfamily(self, name):
        if name not in self.gfamilies:
            raise UnknownName(f'G-family {name!r} is not defined in the workspace.')
        return self.gfamilies[name]

    def deviation(self, name):
        """A workspace functional by name, else a catalog id."""
        return self._deviation(name, ())

    def risk(self, functional_id):
        return catalog.resolve_risk(functional_id)

    def _deviation(self, name, stack):
        if name in self.functionals:
            if name in stack:
                raise WorkspaceError(f'Functional {name!r} refers to itself through {" -> ".join(stack)}.')
            functional = self._build(self.functionals[name], stack + (name,))
            functional.name = name
            return functional
        return catalog.resolve_deviation(name, self.curves)

    def _build(self, expr, stack):
        if isinstance(expr, str):
            return self._deviation(expr, stack)
        (op, arg), = expr.items()
        if op == 'catalog':
            return catalog.resolve_deviation(arg, self.curves)
        if op == 'ref':
            return self._deviation(arg, stack)
        if op == 'add':
            members = [self._build(e, stack) for e in arg]
            total = members[0]
            for member in members[1:]:
                total = measures.add(total, member)
            return total
        if op == 'scale':
            return measures.scale_functional(self._build(arg['of'], stack), float(arg['by']))
        if op == 'square':
            return measures.square(self._build(arg, stack))
        if op == 'min':
            members = [self._build(e, stack) for e in arg]
            return measures.min_functional('min(' + ','.join(m.name for m in members) + ')', members)
        raise WorkspaceError(f'Unknown functional operator {op!r}.')

    # --- Mutation ---

    def add_variable(self, name, space_name, space, variable):
        self.spaces[space_name] = space
        self.variables[name] = variable
        self.variable_spaces[name] = space_name

    # --- Serialization ---

    @classmethod
    def from_document(cls, data):
        spaces = {name: ProbSpace(s['probs']) for name, s in data['spaces'].items()}
        variables = {name: RandomVariable(spaces[v['space']], v['values']) for name, v in data['variables'].items()}
        variable_spaces = {name: v['space'] for name, v in data['variables'].items()}
        curves = {name: BenchmarkCurve(c['breakpoints'], name=name) for name, c in data['curves'].items()}
        gfamilies = {
            name: GFamily.from_matrix(g['alpha_grid'], g['curves'], g['star_closed'], name=name)
            for name, g in data['gfamilies'].items()
        }
        return cls(spaces, variables, curves, data['functionals'], gfamilies, variable_spaces)

    def to_document(self):
        return {
            'spaces': {name: {'probs': s.probs.tolist()} for name, s in self.spaces.items()},
            'variables': {
                name: {'space': self.variable_spaces[name], 'values': v.values.tolist()}
                for name, v in self.variables.items()
            },
            'curves': {name: {'breakpoints': c.to_dict()['breakpoints']} for name, c in self.curves.items()},
            'functionals': self.functionals,
            'gfamilies': {
                name: {'alpha_grid': g.alpha_grid.tolist(), 'curves': g.matrix.tolist(), 'star_closed': g.star_closed}
                for name, g in self.gfamilies.items()
            },
        }


def parse_workspace(data):
    try:
        document = workspace_schema.load(data)
    except ValidationError as err:
        raise WorkspaceError(f'Invalid workspace: {err.messages}') from err
    return Workspace.from_document(document)


def load_workspace(path):
    try:
        with open(path, encoding='utf-8') as fh:
            data = json.load(fh)
    except FileNotFoundError as err:
        raise WorkspaceError(f'Workspace file {path} does not exist.') from err
    except json.JSONDecodeError as err:
        raise WorkspaceError(f'Workspace file {path} is not valid JSON: {err}') from err
    workspace = parse_workspace(data)
    get_logger(__name__).info('Loaded workspace %s: %d spaces, %d variables, %d functionals',
                              path, len(workspace.spaces), len(workspace.variables), len(workspace.functionals))
    return workspace


def save_workspace(workspace, path):
    with open(path, 'w', encoding='utf-8') as fh:
        json.dump(workspace.to_document(), fh, indent=2)
        fh.write('\n')
    get_logger(__name__).info('Saved workspace %s', path)


def read_csv_column(path, column):
    """
    The named column of a CSV file (header row first) as finite floats.
    Blank lines are skipped. Errors report the 1-based file line of the
    offending cell.
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True, skip_blank_lines=False)
    except FileNotFoundError as err:
        raise CsvParseError(f'CSV file {path} does not exist.') from err
    except pd.errors.EmptyDataError as err:
        raise CsvParseError(f'CSV file {path} is empty.', line=1) from err
    except pd.errors.ParserError as err:
        raise CsvParseError(f'CSV file {path} could not be parsed: {err}') from err
    if column not in frame.columns:
        raise UnknownName(f'Column {column!r} not found; header has {", ".join(map(str, frame.columns))}.')
    stripped = frame.fillna('').apply(lambda col: col.str.strip())
    rows = stripped[~stripped.eq('').all(axis=1)]
    # Row i of the unfiltered frame sits on file line i + 2.
    cells = rows[column]
    values = pd.to_numeric(cells, errors='coerce')
    bad = values.isna() | ~np.isfinite(values.fillna(0.0))
    if bad.any():
        row = bad.idxmax()
        line = int(row) + 2
        raise CsvParseError(f'Line {line}: {cells[row]!r} in column {column!r} is not a finite number.', line=line)
    if values.empty:
        raise EmptySample(f'Column {column!r} of {path} has no rows.')
    return values.to_numpy(dtype=float)


def ingest_csv(path, column, name=None, workspace=None):
    """Append an equal-weight space and its variable built from one CSV column."""
    samples = read_csv_column(path, column)
    space, variable = empirical_from_samples(samples)
    workspace = workspace or Workspace()
    name = name or column
    workspace.add_variable(name, f'{name}_space', space, variable)
    get_logger(__name__).info('Ingested %d rows of column %r from %s as %r', samples.size, column, path, name)
    return workspace

