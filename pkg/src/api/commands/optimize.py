"""
optimize - variational RBM for a subsystem or a whole twist lattice
"""
import csv

import click

from src.api.commands.base import ManifestRun, load_group, output_stem, parse_indices
from src.core.config import Config
from src.core.models import OptimizerConfig
from src.services.lattice.lattice_codes import build, lattice_spec_from_json
from src.services.oracle.exact_oracle import subsystem_state
from src.services.optimizer.variational_optimizer import fit_subsystem, fit_twist_lattice
from src.services.pauli.pauli_core import group_to_json
from src.services.rbm.rbm_state import save
from src.utils.helpers import read_json, write_json

TRACE_HEADER = ('restart', 'iteration', 'distance', 'best_distance')


@click.command('optimize')
@click.option('--group', 'group_path', required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--spins', help='Comma-separated subsystem spins; fits the subsystem state only.')
@click.option('--geometry', 'geometry_path', type=click.Path(exists=True, dir_okay=False),
              help='Geometry JSON of a twist lattice; fits the wall subsystem and composes a global RBM.')
@click.option('--exclude', multiple=True, help='Generator label left out of the subsystem (repeatable).')
@click.option('--output', '-o', required=True, type=click.Path(dir_okay=False), help='RBM JSON to write.')
@click.option('--seed', type=int, default=Config.SEED, show_default=True)
@click.option('--restarts', type=int, default=Config.RESTARTS, show_default=True)
@click.option('--max-iter', type=int, default=Config.MAX_ITERATIONS, show_default=True)
@click.option('--init-scale', type=float, default=Config.INIT_SCALE, show_default=True)
@click.option('--tol', type=float, default=Config.CONVERGENCE_TOL, show_default=True)
@click.option('--hidden', type=int, default=None, help='Hidden units (default: one per subsystem spin).')
@click.option('--gradient-check', is_flag=True)
@click.option('--trace', 'trace_path', type=click.Path(dir_okay=False), help='Per-iteration distance CSV.')
@click.pass_context
def optimize_cmd(ctx, group_path, spins, geometry_path, exclude, output, seed, restarts, max_iter,
                 init_scale, tol, hidden, gradient_check, trace_path):
    """Fit an RBM numerically (the route for mixed groups)."""
    if bool(spins) == bool(geometry_path):
        raise click.UsageError('give exactly one of --spins or --geometry')
    obj = ctx.obj or {}
    arguments = {k: v for k, v in ctx.params.items()}
    arguments['exclude'] = list(exclude)
    with ManifestRun('optimize', arguments, output, inputs=[group_path, geometry_path], seed=seed) as run:
        cfg = OptimizerConfig(max_iter, restarts, seed, init_scale, tol, Config.GRADIENT_TOL,
                              gradient_check, hidden)
        g = load_group(group_path)
        trace = []
        fit = {}
        if geometry_path:
            code = build(lattice_spec_from_json(read_json(geometry_path).get('spec')))
            if group_to_json(code.group) != group_to_json(g):
                raise ValueError(f"{geometry_path} does not describe the group in {group_path}")
            result = fit_twist_lattice(code, cfg, exclude, obj.get('threads'), obj.get('cap'), trace)
            rbm, report = result.rbm, result.report
            fit.update(subsystem=list(result.subsystem.spins), rank=result.subsystem.rank,
                       residual=list(result.residual_labels), code_overlap=result.code_overlap)
        else:
            sub = subsystem_state(g, parse_indices(spins), cap=obj.get('cap'))
            rbm, report = fit_subsystem(sub.state, cfg, obj.get('threads'), trace)
            fit.update(subsystem=list(sub.spins), rank=sub.rank, dimension_exponent=sub.dimension_exponent)
        run.add_output(save(output, rbm))
        fit.update(report.to_dict())
        run.add_output(write_json(f"{output_stem(output)}.fit.json", fit))
        if trace_path:
            with open(trace_path, 'w', newline='', encoding='utf-8') as f:
                writer = csv.writer(f)
                writer.writerow(TRACE_HEADER)
                writer.writerows(trace)
            run.add_output(trace_path)
        click.echo(f"distance={report.final_distance!r} fidelity={report.final_fidelity!r} "
                   f"restart={report.restart_index}")
