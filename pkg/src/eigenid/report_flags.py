import click

# Tolerances given on the command line must be strictly positive.
POSITIVE_FLOAT = click.FloatRange(min=0, min_open=True)


def report_flags(func):
    """Decorate a command with the --json and --output flags every report shares."""
    func = click.option(
        "--output",
        "-o",
        type=click.Path(dir_okay=False, writable=True),
        help="Write the report to this file instead of stdout.",
    )(func)
    func = click.option(
        "--json",
        "as_json",
        is_flag=True,
        help="Render the report as JSON instead of key-value text.",
    )(func)
    return func


def symmetrize_flag(func):
    """Decorate a command with the --symmetrize flag of matrix file loading."""
    return click.option(
        "--symmetrize",
        is_flag=True,
        help=(
            "Replace the input with (A + A^H) / 2 instead of rejecting a matrix that is"
            " not Hermitian."
        ),
    )(func)


def tolerance_help(text: str, default) -> str:
    """Append the default to a tolerance help text, eigenid.yml may override it."""
    return f"{text} Default: {default}, eigenid.yml can override it."
