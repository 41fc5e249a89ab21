"""
StabRBM - RBM representations of stabilizer code states
Command-line entry point: build, construct, verify, optimize, excite
"""

import click

from src.api.commands.build import build_cmd
from src.api.commands.construct import construct_cmd
from src.api.commands.excite import excite_cmd
from src.api.commands.optimize import optimize_cmd
from src.api.commands.verify import verify_cmd

# Import config and extensions
from src.core.config import Config
from src.core.extensions import configure_logging


@click.group()
@click.option('--threads', type=int, default=None, help='Worker cap (default: STABRBM_THREADS).')
@click.option('--log-level', default=None,
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
              help='Logging level (default: STABRBM_LOG_LEVEL).')
@click.option('--cap', type=int, default=None, help='Maximum amplitudes to enumerate (default: STABRBM_CAP).')
@click.version_option(Config.TOOL_VERSION, prog_name='stabrbm')
@click.pass_context
def cli(ctx, threads, log_level, cap):
    """Exact and variational RBM states for stabilizer codes."""
    if threads is not None and threads < 1:
        raise click.BadParameter('--threads must be >= 1')
    configure_logging(log_level)
    ctx.ensure_object(dict)
    ctx.obj.update(threads=threads, cap=cap)


# Register commands
cli.add_command(build_cmd)
cli.add_command(construct_cmd)
cli.add_command(verify_cmd)
cli.add_command(optimize_cmd)
cli.add_command(excite_cmd)


if __name__ == '__main__':
    cli()
