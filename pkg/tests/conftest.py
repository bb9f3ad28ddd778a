import os

import pytest

import eigenid.eigenid_context

from . import helpers

# This is a conftest.py file, which has a special meaning when used with pytest.
#
# From pytest documentation:
#
# The conftest.py file serves as a means of providing fixtures for an entire directory.
# Fixtures defined in a conftest.py can be used by any test in that package without
# needing to import them (pytest will automatically discover them).
#
# IMPORTANT:
# fixtures with autouse=True are always run when tests are run.
# Other fixtures needs to explicitly mentioned in the arguments of the test.


@pytest.fixture(autouse=True)
def disable_rich_markup(monkeypatch):
    """Disable rich markup in eigenid context init method.

    Needed in all tests, if rich markup is enabled is impossible to do comparisons
    between hard-coded rich style messages and shell's stdout.

    Args:
        monkeypatch ():     Fixture
    """
    monkeypatch.setattr(eigenid.eigenid_context, "RICH_CONSOLE_ENABLE_MARKUP", False)


@pytest.fixture()
def workspace(tmp_path_factory, monkeypatch):
    """Creates an empty temp directory and changes to it.

    There is no eigenid.yml in it, so every command runs with default settings.

    Returns:
        Path
    """
    path = tmp_path_factory.mktemp("workspace")
    monkeypatch.chdir(path)
    return str(path)


@pytest.fixture()
def matrix_files(workspace):
    """Writes the small hand-made matrix files into the workspace.

    Returns:
        Dict from fixture name to the file name, relative to the workspace.
    """
    files = {}
    for name, content in helpers.matrix_texts.items():
        filename = f"{name}.txt"
        helpers.create_and_write(workspace, filename, content)
        files[name] = filename

    with open(os.path.join(workspace, "not_utf8.txt"), "wb") as f:
        f.write(helpers.not_utf8_bytes)
    files["not_utf8"] = "not_utf8.txt"
    return files
