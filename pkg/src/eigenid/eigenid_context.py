import sys
from typing import Optional

from rich.console import Console
from rich_click import RichCommand, RichGroup

from .core.matrix_core import BadShape, HermitianMatrix, IndexOutOfRange, NotHermitian
from .core.matrix_file import (
    DuplicateEntry,
    MatrixFileParseError,
    UpperTriangleEntry,
    load_matrix,
)
from .eigenid_yml import (
    EigenidYmlLoadError,
    format_eigenid_yml_load_error_msg,
    load_eigenid_yml,
    resolve_tolerances,
)
from .run_report import RunReport

# Needs to be exposed like this so it can be set to False in tests.
RICH_CONSOLE_ENABLE_MARKUP = True

# Exit statuses shared by every command.
EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT_ERROR = 2

"""
Convenience dicts for storing settings that are identical across Click's commands and
groups.
"""
eigenid_command_settings = {
    "cls": RichCommand,
    "options_metavar": "[options]",
}

eigenid_group_settings = {
    "cls": RichGroup,
    "options_metavar": "[options]",
}

# Everything that can go wrong while reading a matrix file.
MATRIX_INPUT_ERRORS = (
    OSError,
    MatrixFileParseError,
    DuplicateEntry,
    UpperTriangleEntry,
    IndexOutOfRange,
    NotHermitian,
    BadShape,
)


def format_input_error_msg(path: str, exception_msg) -> str:
    """Format error message for a matrix file that could not be loaded."""
    return (
        f"Could not load matrix file [bold yellow]{path}[/]!\n\n"
        f"[italic yellow]{exception_msg}[/]\n"
    )


class EigenidContext:
    """Context-aware API wrapper & state-passing object.

    EigenidContext object needs to be created in the top level cli command that groups
    all other commands. That object then needs to be passed to every other subcommand.

    It owns the consoles, resolves settings from flags, eigenid.yml and defaults, loads
    input matrices and writes reports.
    """

    def __init__(
        self,
        verbose: bool = False,
        config_path: Optional[str] = None,
        workers: Optional[int] = None,
    ):
        """Create a new context object.

        Args:
            verbose (bool):     Print progress information to stderr.
            config_path (str):  Explicit eigenid.yml path, None to look it up in the
                                current directory.
            workers (int):      Threads for minor eigenproblems, None to take it from
                                eigenid.yml.
        """
        self.verbose = verbose
        self.config_path = config_path
        self._workers = workers
        self._eigenid_yml = None

        # Reports go to stdout, everything else to stderr.
        self.console = Console(width=80, markup=RICH_CONSOLE_ENABLE_MARKUP)
        self.err_console = Console(
            width=80, markup=RICH_CONSOLE_ENABLE_MARKUP, stderr=True
        )

    def print(self, *objects, **kwargs):
        """Prints to the stdout console.

        Internally it uses Console object, so whatever Console can do, this function can
        also do.
        """
        self.console.print(*objects, **kwargs)

    def print_error(self, msg: str):
        """Prints a rich markup message to stderr."""
        self.err_console.print(msg, highlight=False)

    def print_info(self, info: str):
        """Prints a message to stderr with magnify icon prepended, only in verbose mode.

        Suitable for printing progress messages that should not be formatted.
        """
        if not self.verbose:
            return

        self.err_console.print(
            ":mag_right: " + info,
            markup=True,
            style="bold italic dim",
            overflow="ignore",
            crop=False,
            highlight=False,
            soft_wrap=False,
            no_wrap=True,
        )

    def exit(self, return_code: int = EXIT_FAIL):
        """Exit program with given return_code."""
        sys.exit(return_code)

    @property
    def eigenid_yml(self) -> dict:
        """Contents of eigenid.yml, loaded on first use.

        Exits with input error status if the file is broken.
        """
        if self._eigenid_yml is None:
            try:
                self._eigenid_yml = load_eigenid_yml(self.config_path)
            except EigenidYmlLoadError as msg:
                self.print_error(format_eigenid_yml_load_error_msg(msg))
                self.exit(EXIT_INPUT_ERROR)

        return self._eigenid_yml

    def tolerance(self, key: str, flag_value: Optional[float] = None):
        """Resolve a tolerance: command line flag, then eigenid.yml, then default."""
        if flag_value is not None:
            return flag_value
        return resolve_tolerances(self.eigenid_yml)[key]

    @property
    def workers(self) -> int:
        """Threads for minor eigenproblems: --workers, then eigenid.yml, then 1."""
        if self._workers is not None:
            return self._workers
        return self.eigenid_yml.get("workers", 1)

    def load_input(self, path: str, symmetrize: bool = False) -> HermitianMatrix:
        """Load a matrix file or exit with input error status."""
        mode = "symmetrize" if symmetrize else "strict"
        self.print_info(f"Loading {path} in {mode} mode")

        try:
            return load_matrix(path, mode=mode)
        except MATRIX_INPUT_ERRORS as msg:
            self.print_error(format_input_error_msg(path, msg))
            self.exit(EXIT_INPUT_ERROR)

    def input_error(self, msg: str):
        """Print msg and exit with input error status."""
        self.print_error(f"[bold red]Error:[/] {msg}")
        self.exit(EXIT_INPUT_ERROR)

    def write_text(self, text: str, output: Optional[str] = None):
        """Write text to the output file, or verbatim to stdout when there is none."""
        if output is None:
            self.console.out(text, end="", highlight=False)
            return

        try:
            with open(output, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as msg:
            self.input_error(f"Could not write {output}: {msg}")
        self.print_info(f"Wrote {output}")

    def emit_report(
        self, report: RunReport, as_json: bool = False, output: Optional[str] = None
    ):
        """Render the report and exit with the status its outcome maps to."""
        self.write_text(report.to_json() if as_json else report.to_text(), output)
        self.exit(EXIT_PASS if report.outcome == "pass" else EXIT_FAIL)
