"""
Command-line entry point.

Usage:
    python cli.py measure -w workspace.json -f sd -f iqd@0.4
    python cli.py audit iqd2+sd@0.4 --seed 7
    python cli.py counterexample --n 2000 --alpha 0.4
    python cli.py envelope iqd@0.3 --pool 50 --variant star
    python cli.py dual zero -w workspace.json --kind es
    python cli.py ingest returns.csv --column ret -w workspace.json

`flask --app app <command>` works the same way.
"""

from flask.cli import FlaskGroup

from app import create_app

cli = FlaskGroup(create_app=create_app, help='Star-shaped deviation measures on finite probability spaces.')


if __name__ == '__main__':
    cli()
