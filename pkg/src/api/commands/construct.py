"""
construct - analytic RBM for a composable stabilizer group
"""
import click

from src.api.commands.base import ManifestRun, load_group, output_stem
from src.services.analytic.analytic_builder import construct, recipe_to_json
from src.services.rbm.rbm_state import save
from src.utils.helpers import write_json


@click.command('construct')
@click.option('--group', 'group_path', required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--output', '-o', required=True, type=click.Path(dir_okay=False), help='RBM JSON to write.')
@click.option('--emit-recipe', is_flag=True, help='Also write <stem>.recipe.json.')
def construct_cmd(group_path, output, emit_recipe):
    """Construct the exact RBM of an X/Y/Z-composable group."""
    arguments = {'group': group_path, 'output': output, 'emit_recipe': emit_recipe}
    with ManifestRun('construct', arguments, output, inputs=[group_path]) as run:
        g = load_group(group_path)
        rbm, recipe = construct(g)
        run.add_output(save(output, rbm))
        if emit_recipe:
            run.add_output(write_json(f"{output_stem(output)}.recipe.json", recipe_to_json(recipe, rbm)))
        click.echo(f"constructed {recipe.group_class.value}: n={rbm.n} hidden={rbm.m} basis={rbm.basis}")
