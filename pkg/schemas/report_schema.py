from extensions import ma
from marshmallow import fields, validate


class ReportSchema(ma.Schema):
    """
    Schema for serializing report documents.
    `results` is already plain data (see services/reports.py).
    """
    tool_version = fields.Str(required=True)
    seed = fields.Int(allow_none=True)
    command = fields.List(fields.Str(), required=True)
    timestamp = fields.Str(required=True)
    format = fields.Str(validate=validate.OneOf(['json', 'csv']), load_default='json')
    results = fields.Raw(required=True)


report_schema = ReportSchema()
