"""Helpers shared by the command modules."""

import click
from flask import current_app

from services.workspace import Workspace, load_workspace
from utils.errors import InvalidParameter


def resolve_seed(seed):
    return current_app.config['DEFAULT_SEED'] if seed is None else seed


def workspace_path(path):
    return path or current_app.config.get('DEFAULT_WORKSPACE')


def open_workspace(path, required=True):
    """Load the workspace at `path` (or the configured default); an empty one when optional and unset."""
    path = workspace_path(path)
    if path:
        return load_workspace(path)
    if required:
        raise InvalidParameter('No workspace given: pass --workspace or set STARDEV_WORKSPACE.')
    return Workspace()


def command_echo(**resolved):
    """
    The current invocation as an argument list, with defaults that were
    resolved at run time (seed, workspace) filled in.
    """
    ctx = click.get_current_context()
    params = dict(ctx.params, **resolved)
    echo = [ctx.info_name]
    for param in ctx.command.params:
        value = params.get(param.name)
        if isinstance(param, click.Argument):
            echo.extend(str(v) for v in (value if isinstance(value, (list, tuple)) else [value]))
            continue
        flag = param.opts[0]
        if param.is_flag:
            if value:
                echo.append(flag)
            elif param.secondary_opts:
                echo.append(param.secondary_opts[0])
            continue
        if value is None or value == ():
            continue
        if param.multiple:
            for v in value:
                echo.extend([flag, str(v)])
        else:
            echo.extend([flag, str(value)])
    return echo
