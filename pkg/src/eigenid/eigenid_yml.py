import math
import os
from typing import Optional

import pykwalify.core
import pykwalify.errors
import yaml

from .constants import CONFIG_FILE_NAME, default_tolerances
from .helper_functions import PathType


class EigenidYmlLoadError(RuntimeError):
    """Some error happened when trying to load eigenid.yml."""


def format_eigenid_yml_load_error_msg(exception_msg):
    """Format error message for EigenidYmlLoadError.

    Use this to format error messages that happen when trying to load eigenid.yml
    """
    return (
        "An [bold red]error[/] occurred when trying to load [bold yellow]eigenid.yml[/]"
        f" file!\n\n[italic yellow]{exception_msg}[/]\n"
    )


def load_eigenid_yml(config_path: Optional[PathType] = None) -> dict:
    """Try to load eigenid.yml. If that succeeds validate it.

    Args:
        config_path (str):  Explicit path given with --config. When None, eigenid.yml
                            is looked up in the current directory.

    Returns:
        dict with eigenid.yml contents. An empty dict is returned if the file is empty,
        or if there is no eigenid.yml in the current directory.

    Raises:
        EigenidYmlLoadError if an explicitly given file does not exist or the file does
        not follow the schema.
    """
    if config_path is None:
        config_path = os.path.join(os.getcwd(), CONFIG_FILE_NAME)
        if not os.path.isfile(config_path):
            return {}
    elif not os.path.isfile(config_path):
        raise EigenidYmlLoadError(f"Config file {config_path} does not exist.")

    schema_yml = os.path.join(os.path.dirname(__file__), "configuration-schema.yaml")
    try:
        c = pykwalify.core.Core(source_file=config_path, schema_files=[schema_yml])
    except pykwalify.errors.CoreError:
        # This error is raised when the file is empty, which is allowed.
        return {}

    try:
        c.validate(raise_exception=True)
    except pykwalify.errors.SchemaError as e:
        raise EigenidYmlLoadError(e)

    with open(config_path, "r") as file:
        eigenid_yml = yaml.safe_load(file) or {}

    # YAML reads 1e-8 as a string, so every tolerance is converted here.
    tolerances = eigenid_yml.get("tolerances") or {}
    for key, value in tolerances.items():
        try:
            tolerances[key] = float(value)
        except (TypeError, ValueError):
            tolerances[key] = math.nan
        if not tolerances[key] > 0:
            raise EigenidYmlLoadError(
                f"Tolerance [bold]{key}[/] must be positive, got [bold]{value}[/]."
            )

    return eigenid_yml


def resolve_tolerances(eigenid_yml: dict) -> dict:
    """Merge tolerances from eigenid.yml over the built-in defaults.

    Flags given on the command line still win over the returned values, commands
    apply them on top.
    """
    tolerances = dict(default_tolerances)
    tolerances.update(eigenid_yml.get("tolerances") or {})
    return tolerances
