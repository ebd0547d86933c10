#!/usr/bin/env python3
"""
Seed script for a StarDev workspace

This script writes a sample workspace for development and testing.
It creates:
- The fair two-atom space with X = (-1, 1) and Y = (0, 2)
- The mirrored-uniform counterexample variables X, Y, Z (n = 100)
- Catalog and composite functionals
- A benchmark step curve for LVaRD
- Zero-curve and seeded star-closed G-families

Usage:
    python seed.py [path]        (default: workspace.json)

Note: This script overwrites the file at `path`.
"""

import os
import sys

# Add the current directory to the path so we can import our app
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from app import create_app
from models.functional import BenchmarkCurve
from services.duality import default_alpha_grid, random_gfamily, zero_gfamily
from services.space import mirrored_uniform_pair, mix, uniform_space
from services.workspace import Workspace, save_workspace
from models.probability import RandomVariable

COUNTEREXAMPLE_N = 100


def create_variables(workspace):
    """Fair-coin variables plus the counterexample triple."""
    print("\n🎲 Creating variables...")
    fair = uniform_space(2)
    workspace.add_variable('coin', 'fair', fair, RandomVariable(fair, [-1.0, 1.0]))
    workspace.add_variable('coin_up', 'fair', fair, RandomVariable(fair, [0.0, 2.0]))

    X, Y = mirrored_uniform_pair(COUNTEREXAMPLE_N)
    grid = f'uniform{COUNTEREXAMPLE_N}'
    for name, variable in (('X', X), ('Y', Y), ('Z', mix(X, Y, 0.5))):
        workspace.add_variable(name, grid, X.space, variable)
    print(f"  ✅ Created {len(workspace.variables)} variables on {len(workspace.spaces)} spaces")


def create_functionals(workspace):
    print("\n📐 Creating functionals...")
    workspace.curves['steps'] = BenchmarkCurve([[0.0, 0.1], [1.0, 0.25], [3.0, 0.5]], name='steps')
    workspace.functionals.update({
        'D_counter': {'add': ['iqd@0.4', 'sd']},
        'D_star': 'iqd2+sd@0.4',
        'D_min': {'min': ['fr', {'scale': {'of': 'sd', 'by': 2}}, {'add': ['ied@0.25', 'sd']}]},
        'D_steps': 'lvard@steps',
    })
    print(f"  ✅ Created {len(workspace.functionals)} functionals and {len(workspace.curves)} curve")


def create_gfamilies(workspace):
    print("\n📈 Creating G-families...")
    grid = default_alpha_grid(COUNTEREXAMPLE_N)
    workspace.gfamilies['zero'] = zero_gfamily(grid, name='zero')
    workspace.gfamilies['random3'] = random_gfamily(0, grid, 3, name='random3')
    print(f"  ✅ Created {len(workspace.gfamilies)} G-families on a {grid.size}-point grid")


def main():
    """Main function to write the sample workspace"""
    path = sys.argv[1] if len(sys.argv) > 1 else 'workspace.json'
    print("🌱 StarDev Workspace Seeding")
    print("=" * 50)

    app = create_app()

    with app.app_context():
        workspace = Workspace()
        create_variables(workspace)
        create_functionals(workspace)
        create_gfamilies(workspace)
        save_workspace(workspace, path)

        print("\n" + "=" * 50)
        print(f"✅ Workspace written to {path}")
        print("\n🔎 Try:")
        print(f"    python cli.py measure -w {path} -f D_counter -f sd")
        print(f"    python cli.py dual zero -w {path} --kind es")


if __name__ == '__main__':
    main()
