"""
CLI subcommands, one module each. They are attached to `app.cli` in the app
factory, the way route blueprints are registered on a web app.
"""


def register_commands(app):
    from commands.audit import audit_command
    from commands.counterexample import counterexample_command
    from commands.dual import dual_command
    from commands.envelope import envelope_command
    from commands.ingest import ingest_command
    from commands.measure import measure_command

    for command in (measure_command, audit_command, counterexample_command,
                    envelope_command, dual_command, ingest_command):
        app.cli.add_command(command)
