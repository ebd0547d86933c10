"""
Report documents written by the CLI.

A report is {tool_version, seed, command, timestamp, format, results}.
Results are plain data: nested dicts and lists of str, bool, int and float.
Infinite values are written as the strings "inf" / "-inf"; a NaN anywhere in
the results is an error.
"""

import io
import json
import math
from datetime import datetime, timezone

import click
import numpy as np
import pandas as pd
from flask import current_app

from schemas.report_schema import report_schema
from utils.errors import NonFiniteValue
from utils.log import get_logger


def sanitize(value, path='results'):
    """Plain-data copy of `value` with numpy scalars unwrapped and infinities spelled out."""
    if isinstance(value, dict):
        return {str(k): sanitize(v, f'{path}.{k}') for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [sanitize(v, f'{path}[{i}]') for i, v in enumerate(value)]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            raise NonFiniteValue(f'{path} is NaN.')
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    if hasattr(value, 'to_dict'):
        return sanitize(value.to_dict(), path)
    return value


def build_report(command, results, seed=None, fmt=None):
    """
    Wrap command results into a report document.
    `command` is the argument list as typed, so the run can be repeated.
    """
    app_config = current_app.config
    return {
        'tool_version': app_config['TOOL_VERSION'],
        'seed': seed,
        'command': [str(part) for part in command],
        'timestamp': datetime.now(timezone.utc).isoformat(),
        'format': fmt or app_config['REPORT_FORMAT'],
        'results': sanitize(results),
    }


def render_json(report):
    return json.dumps(report_schema.dump(report), indent=2) + '\n'


def _flatten(data, prefix=''):
    """Nested dict -> {dotted.key: leaf}. Lists of scalars are kept as JSON text."""
    flat = {}
    for key, value in data.items():
        name = f'{prefix}{key}'
        if isinstance(value, dict):
            flat.update(_flatten(value, f'{name}.'))
        elif isinstance(value, list):
            flat[name] = json.dumps(value)
        else:
            flat[name] = value
    return flat


def render_csv(report):
    """
    Metadata as leading `# key: value` lines, then one table.

    Results carrying a `rows` list are written row by row; anything else is
    written as field/value pairs.
    """
    buffer = io.StringIO()
    for key in ('tool_version', 'seed', 'command', 'timestamp'):
        value = ' '.join(report[key]) if key == 'command' else report[key]
        buffer.write(f'# {key}: {value}\n')
    results = report['results']
    if isinstance(results, dict) and isinstance(results.get('rows'), list):
        frame = pd.DataFrame([_flatten(row) for row in results['rows']])
    else:
        flat = _flatten(results if isinstance(results, dict) else {'value': results})
        frame = pd.DataFrame({'field': list(flat), 'value': list(flat.values())})
    frame.to_csv(buffer, index=False, lineterminator='\n')
    return buffer.getvalue()


def render(report):
    if report['format'] == 'csv':
        return render_csv(report)
    return render_json(report)


def write_report(text, out=None):
    """Write to `out` when given, else to stdout."""
    if out:
        with open(out, 'w', encoding='utf-8') as fh:
            fh.write(text)
        get_logger(__name__).info('Report written to %s', out)
    else:
        click.echo(text, nl=False)


def emit(command, results, seed=None, fmt=None, out=None):
    report = build_report(command, results, seed=seed, fmt=fmt)
    write_report(render(report), out)
    return report
