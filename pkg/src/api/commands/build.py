"""
build - write a stabilizer group (and its lattice geometry) from a preset or spec
"""
import logging

import click

from src.api.commands.base import ManifestRun, output_stem
from src.core.models import LatticeCode
from src.services.lattice.lattice_codes import build, build_preset, geometry_to_json, lattice_spec_from_json
from src.services.pauli.pauli_core import group_to_json
from src.utils.helpers import read_json, write_json

logger = logging.getLogger(__name__)


@click.command('build')
@click.option('--preset', help="Preset such as 'toric 2x2', 'shor', 'planar-mixed 4x4', 'zd 2x2 3', 'twist'.")
@click.option('--lattice', 'lattice_path', type=click.Path(exists=True, dir_okay=False),
              help='Lattice spec JSON.')
@click.option('--output', '-o', required=True, type=click.Path(dir_okay=False), help='Group JSON to write.')
def build_cmd(preset, lattice_path, output):
    """Build a stabilizer group."""
    if bool(preset) == bool(lattice_path):
        raise click.UsageError('give exactly one of --preset or --lattice')
    arguments = {'preset': preset, 'lattice': lattice_path, 'output': output}
    with ManifestRun('build', arguments, output, inputs=[lattice_path]) as run:
        if preset:
            built = build_preset(preset)
        else:
            built = build(lattice_spec_from_json(read_json(lattice_path)))
        group = built.group if isinstance(built, LatticeCode) else built
        run.add_output(write_json(output, group_to_json(group)))
        if isinstance(built, LatticeCode):
            run.add_output(write_json(f"{output_stem(output)}.geometry.json", geometry_to_json(built)))
        click.echo(f"built {preset or lattice_path}: n={group.n} m={group.m} k={group.k} d={group.d}")
