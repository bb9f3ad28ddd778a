import click
import rich_click

from .eigenid_context import EigenidContext, eigenid_group_settings
from .identity_commands import prove, reconstruct, verify
from .matrix_commands import bench, gen

rich_click.rich_click.MAX_WIDTH = 80
rich_click.rich_click.USE_RICH_MARKUP = True
rich_click.rich_click.STYLE_HELPTEXT = "italic dim"

rich_click.rich_click.COMMAND_GROUPS = {
    "eigenid": [
        {
            "name": "Identity commands",
            "commands": ["verify", "reconstruct", "prove"],
        },
        {
            "name": "Matrix commands",
            "commands": ["gen", "bench"],
        },
    ],
}


@click.group(
    **eigenid_group_settings,
    chain=False,
    subcommand_metavar="<command> [command options]",
)
@click.version_option(message="%(version)s", package_name="eigenid")
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    help="Path to eigenid.yml. Default: eigenid.yml in the current directory, if any.",
)
@click.option(
    "--workers",
    type=click.IntRange(min=1),
    help="Threads used for principal minor eigenproblems. Default: 1, or eigenid.yml.",
)
@click.option(
    "--verbose", is_flag=True, help="Print progress information to stderr."
)
@click.pass_context
def cli(ctx, config_path, workers, verbose):
    """[bold]eigenid[/] computes eigenvector magnitudes of Hermitian matrices from
    eigenvalues alone, and checks the identity that makes it possible.

    \b
    \n\nThe identity: [bold]|v_ij|^2 prod_(k!=i) (lambda_i - lambda_k) = prod_k (lambda_i - lambda_k(M_j))[/], where [bold]M_j[/] is the matrix without row and column [bold]j[/].

    Run [bold]eigenid \\[command] --help[/] to show documentation for that command.

    \b
    \n\nExit status is [bold]0[/] when every check passes, [bold]1[/] when a check fails or the input is degenerate, and [bold]2[/] on bad input or usage.
    """
    # EigenidContext object is passed to other subcommands due to the
    # @click.pass_context decorator. The subcommands need to be decorated with
    # @click.pass_obj so they directly access the EigenidContext object.
    ctx.obj = EigenidContext(verbose, config_path, workers)


cli.add_command(verify)
cli.add_command(reconstruct)
cli.add_command(prove)
cli.add_command(gen)
cli.add_command(bench)


def main():
    """Main entry point for the CLI."""
    cli()


if __name__ == "__main__":
    main()
