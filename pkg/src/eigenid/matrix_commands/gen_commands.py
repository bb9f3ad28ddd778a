import click

from ..core.matrix_core import BadSpectrumLength, Ensemble, random_hermitian
from ..core.matrix_file import format_matrix_text, write_matrix
from ..eigenid_context import eigenid_command_settings
from ..helper_functions import parse_float_list

# Seeds are handed to numpy's default_rng, which takes unsigned 64-bit integers.
SEED_RANGE = click.IntRange(min=0, max=2**64 - 1)


@click.command(**eigenid_command_settings)
@click.option(
    "-n",
    "--order",
    type=click.IntRange(min=1),
    required=True,
    help="Order of the generated matrix.",
)
@click.option(
    "--seed", type=SEED_RANGE, default=0, show_default=True, help="Random seed."
)
@click.option(
    "--ensemble",
    type=click.Choice([e.value for e in Ensemble]),
    default=Ensemble.REAL_SYMMETRIC.value,
    show_default=True,
    help="Random matrix ensemble to draw from.",
)
@click.option(
    "--spectrum",
    type=str,
    help=(
        'Comma separated eigenvalues, such as "0,1,2". Required by and only allowed'
        " with the prescribed_spectrum ensemble."
    ),
)
@click.option(
    "--output",
    "-o",
    type=click.Path(dir_okay=False, writable=True),
    help="Write the matrix file here instead of stdout.",
)
@click.pass_obj
def gen(eigenid, order, seed, ensemble, spectrum, output):
    """Generate a reproducible random Hermitian matrix file.

    \b
    \n\nThe same order, seed and ensemble always produce the same file. With [bold]prescribed_spectrum[/] the matrix is [bold]Q diag(spectrum) Q^H[/] for a random unitary [bold]Q[/].
    """
    if spectrum is not None:
        try:
            spectrum = parse_float_list(spectrum)
        except ValueError as msg:
            eigenid.input_error(f"--spectrum: {msg}")

    try:
        a = random_hermitian(order, seed, ensemble=ensemble, spectrum=spectrum)
    except BadSpectrumLength as msg:
        eigenid.input_error(str(msg))

    eigenid.print_info(f"Generated a {ensemble} matrix of order {order}")
    eigenid.write_text(format_matrix_text(write_matrix(a)), output)
