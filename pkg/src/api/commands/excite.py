"""
excite - apply a Z or X string operator to an RBM
"""
import click

from src.api.commands.base import ManifestRun, parse_indices, parse_site
from src.services.lattice.lattice_codes import build, lattice_spec_from_json, string_path
from src.services.rbm.rbm_state import apply_string_x, apply_string_z, load, save
from src.utils.helpers import read_json


@click.command('excite')
@click.option('--rbm', 'rbm_path', required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--string', 'kind', required=True, type=click.Choice(['z', 'x']))
@click.option('--path', 'path_text', help='Comma-separated qubit indices.')
@click.option('--geometry', 'geometry_path', type=click.Path(exists=True, dir_okay=False),
              help='Geometry JSON; with --start/--end the path is the shortest string between two sites.')
@click.option('--start', help="Vertex (z) or plaquette (x) as 'row,col', or 'boundary'.")
@click.option('--end', help="Vertex (z) or plaquette (x) as 'row,col', or 'boundary'.")
@click.option('--output', '-o', required=True, type=click.Path(dir_okay=False), help='RBM JSON to write.')
def excite_cmd(rbm_path, kind, path_text, geometry_path, start, end, output):
    """Create excitations at the ends of a string operator."""
    if geometry_path and (path_text is not None or not (start and end)):
        raise click.UsageError('--geometry needs --start and --end and replaces --path')
    if not geometry_path and path_text is None:
        raise click.UsageError('give --path or --geometry with --start/--end')
    arguments = {'rbm': rbm_path, 'string': kind, 'path': path_text, 'geometry': geometry_path,
                 'start': start, 'end': end, 'output': output}
    with ManifestRun('excite', arguments, output, inputs=[rbm_path, geometry_path]) as run:
        rbm = load(rbm_path)
        if geometry_path:
            code = build(lattice_spec_from_json(read_json(geometry_path).get('spec')))
            path = string_path(code, kind, parse_site(start), parse_site(end))
        else:
            path = parse_indices(path_text)
        rbm = apply_string_z(rbm, path) if kind == 'z' else apply_string_x(rbm, path)
        run.add_output(save(output, rbm))
        click.echo(f"applied {kind}-string on {len(path)} qubits: hidden={rbm.m}")
