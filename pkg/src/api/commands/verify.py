"""
verify - compare an RBM against the exact code space
"""
import click

from src.api.commands.base import EXIT_VERIFY_FAILED, ManifestRun, load_group
from src.core.config import Config
from src.core.errors import ConsistencyError, DimensionMismatchError
from src.services.oracle.exact_oracle import (
    code_projector_overlap, code_state, distance, expectation, write_dense,
)
from src.services.rbm.rbm_state import full_state, load, to_computational_basis
from src.utils.helpers import complex_to_json, write_json


@click.command('verify')
@click.option('--group', 'group_path', required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--rbm', 'rbm_path', required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--output', '-o', required=True, type=click.Path(dir_okay=False), help='Report JSON to write.')
@click.option('--dump-state', type=click.Path(dir_okay=False), help='Write the enumerated state (STRB format).')
@click.pass_context
def verify_cmd(ctx, group_path, rbm_path, output, dump_state):
    """Check that an RBM state lies in the code space; exit 1 if it does not."""
    obj = ctx.obj or {}
    arguments = {'group': group_path, 'rbm': rbm_path, 'output': output, 'dump_state': dump_state}
    with ManifestRun('verify', arguments, output, inputs=[group_path, rbm_path]) as run:
        g = load_group(group_path)
        rbm = load(rbm_path)
        if (rbm.n, rbm.d) != (g.n, g.d):
            raise DimensionMismatchError(f"RBM on (n={rbm.n}, d={rbm.d}) against a group on (n={g.n}, d={g.d})")
        state = to_computational_basis(full_state(rbm, cap=obj.get('cap'), workers=obj.get('threads')), rbm.basis)
        overlap = code_projector_overlap(g, state)
        report = {
            'overlap': overlap,
            'passed': overlap >= 1 - Config.OVERLAP_TOL,
            'basis': rbm.basis,
            'expectations': {label: complex_to_json(expectation(p, state))
                             for p, label in zip(g.generators, g.labels)},
        }
        try:
            report['distance_to_oracle'] = distance(code_state(g, cap=obj.get('cap')), state)
        except ConsistencyError as e:
            report['distance_to_oracle'] = None
            report['oracle_error'] = str(e)
        run.add_output(write_json(output, report))
        if dump_state:
            run.add_output(write_dense(dump_state, state))
        click.echo(f"overlap={overlap!r} passed={report['passed']}")
        if not report['passed']:
            ctx.exit(EXIT_VERIFY_FAILED)
