from extensions import ma
from marshmallow import fields, validate, validates_schema, ValidationError, EXCLUDE

FUNCTIONAL_OPERATORS = ('catalog', 'ref', 'add', 'scale', 'square', 'min')


class SpaceSchema(ma.Schema):
    """A named probability space: one weight per atom."""
    probs = fields.List(fields.Float(allow_nan=False), required=True, validate=validate.Length(min=1))


class VariableSchema(ma.Schema):
    """A random variable: the name of its space plus one value per atom."""
    space = fields.Str(required=True)
    values = fields.List(fields.Float(allow_nan=False), required=True, validate=validate.Length(min=1))


class CurveSchema(ma.Schema):
    """A benchmark step curve as [u, alpha] breakpoints."""
    breakpoints = fields.List(
        fields.List(fields.Float(allow_nan=False), validate=validate.Length(equal=2)),
        required=True,
        validate=validate.Length(min=1),
    )


class GFamilySchema(ma.Schema):
    """A G-family: one alpha grid and a matrix with one row per curve."""
    alpha_grid = fields.List(fields.Float(allow_nan=False), required=True, validate=validate.Length(min=1))
    curves = fields.List(fields.List(fields.Float(allow_nan=False)), required=True, validate=validate.Length(min=1))
    star_closed = fields.Bool(load_default=False)

    @validates_schema
    def validate_shape(self, data, **kwargs):
        width = len(data['alpha_grid'])
        for i, row in enumerate(data['curves']):
            if len(row) != width:
                raise ValidationError(f'Curve {i} has {len(row)} values for {width} grid points.', 'curves')


def _walk_expression(expr, path, refs):
    """
    Checks one functional expression and collects the workspace names it refers to.
    Plain strings are catalog ids.
    """
    if isinstance(expr, str):
        return
    if not isinstance(expr, dict) or len(expr) != 1:
        raise ValidationError(f'{path}: expected a catalog id or a single-operator object.')
    (op, arg), = expr.items()
    if op not in FUNCTIONAL_OPERATORS:
        raise ValidationError(f'{path}: unknown operator {op!r}; expected one of {", ".join(FUNCTIONAL_OPERATORS)}.')
    if op == 'catalog':
        if not isinstance(arg, str):
            raise ValidationError(f'{path}: catalog takes an id string.')
    elif op == 'ref':
        if not isinstance(arg, str):
            raise ValidationError(f'{path}: ref takes a functional name.')
        refs.add(arg)
    elif op in ('add', 'min'):
        if not isinstance(arg, list) or len(arg) < (2 if op == 'add' else 1):
            raise ValidationError(f'{path}: {op} takes a list of expressions.')
        for i, item in enumerate(arg):
            _walk_expression(item, f'{path}.{op}[{i}]', refs)
    elif op == 'scale':
        if not isinstance(arg, dict) or set(arg) != {'of', 'by'}:
            raise ValidationError(f'{path}: scale takes {{"of": <expr>, "by": <number>}}.')
        if isinstance(arg['by'], bool) or not isinstance(arg['by'], (int, float)) or not arg['by'] > 0:
            raise ValidationError(f'{path}: scale factor must be a number > 0.')
        _walk_expression(arg['of'], f'{path}.scale', refs)
    else:
        _walk_expression(arg, f'{path}.square', refs)


class WorkspaceSchema(ma.Schema):
    """
    Schema for validating a workspace document.

    Cross references are checked here: every variable names a declared space
    and every `ref` in a functional expression names a declared functional.
    """
    spaces = fields.Dict(keys=fields.Str(), values=fields.Nested(SpaceSchema), load_default=dict)
    variables = fields.Dict(keys=fields.Str(), values=fields.Nested(VariableSchema), load_default=dict)
    curves = fields.Dict(keys=fields.Str(), values=fields.Nested(CurveSchema), load_default=dict)
    functionals = fields.Dict(keys=fields.Str(), values=fields.Raw(), load_default=dict)
    gfamilies = fields.Dict(keys=fields.Str(), values=fields.Nested(GFamilySchema), load_default=dict)

    class Meta:
        # Ignore any extra top-level keys (comments, editor metadata).
        unknown = EXCLUDE

    @validates_schema
    def validate_references(self, data, **kwargs):
        spaces = data.get('spaces', {})
        for name, variable in data.get('variables', {}).items():
            if variable['space'] not in spaces:
                raise ValidationError(f'Variable {name!r} references undeclared space {variable["space"]!r}.',
                                      'variables')
            if len(variable['values']) != len(spaces[variable['space']]['probs']):
                raise ValidationError(f'Variable {name!r} has {len(variable["values"])} values for a '
                                      f'{len(spaces[variable["space"]]["probs"])}-atom space.', 'variables')
        functionals = data.get('functionals', {})
        for name, expr in functionals.items():
            refs = set()
            _walk_expression(expr, name, refs)
            missing = sorted(refs - set(functionals))
            if missing:
                raise ValidationError(f'Functional {name!r} references undeclared {", ".join(missing)}.',
                                      'functionals')


workspace_schema = WorkspaceSchema()
