import json
import os

import numpy as np
from click.testing import CliRunner

from eigenid.__main__ import cli
from eigenid.core.matrix_core import Ensemble, HermitianMatrix, random_hermitian

diag_123_text = """%%eigenid hermitian 3
1 1 1.0 0.0
2 2 2.0 0.0
3 3 3.0 0.0
"""

# Exchange matrix, eigenvalues -1 and 1, every magnitude is 1/2.
exchange_text = """%%eigenid hermitian 2
% only the lower triangle is listed
2 1 1.0 0.0
"""

# Three point stencil, eigenvalues 2 - sqrt(2), 2, 2 + sqrt(2).
stencil_text = """%%eigenid hermitian 3
1 1 2.0 0.0
2 1 1.0 0.0
2 2 2.0 0.0
3 2 1.0 0.0
3 3 2.0 0.0
"""

identity_text = """%%eigenid hermitian 3
1 1 1.0 0.0
2 2 1.0 0.0
3 3 1.0 0.0
"""

single_text = """%%eigenid hermitian 1
1 1 5.0 0.0
"""

# Diagonal entry with an imaginary part, rejected unless symmetrized.
complex_diagonal_text = """%%eigenid hermitian 2
1 1 1.0 0.5
2 1 0.0 1.0
2 2 3.0 0.0
"""

malformed_text = """%%eigenid hermitian 2
1 1 1.0
"""

upper_triangle_text = """%%eigenid hermitian 2
1 2 1.0 0.0
"""

# Matrix file with bytes that are not valid UTF-8.
not_utf8_bytes = b"%%eigenid hermitian 2\n1 1 \xff\xfe 0\n"

matrix_texts = {
    "diag_123": diag_123_text,
    "exchange": exchange_text,
    "stencil": stencil_text,
    "identity": identity_text,
    "single": single_text,
    "complex_diagonal": complex_diagonal_text,
    "malformed": malformed_text,
    "upper_triangle": upper_triangle_text,
}

STENCIL = np.array([[2.0, 1.0, 0.0], [1.0, 2.0, 1.0], [0.0, 1.0, 2.0]])
EXCHANGE = np.array([[0.0, 1.0], [1.0, 0.0]])


def create_and_write(path: str, filename: str, content: str = None):
    """Create a file in the given path with the given content.

    Args:
        path (str):         Path from where to create the filename
        filename (str):     Filename can be either a direct file name such as a file.txt
                            or a longer path, such as dir_a/dir_b/file.txt
        content (str):      File content to write. If None, nothing is written.

    """
    filepath = os.path.join(path, filename)

    os.makedirs(os.path.dirname(filepath), exist_ok=True)

    with open(filepath, "w", encoding="utf-8") as f:
        if content:
            f.write(content)


def hermitian(grid) -> HermitianMatrix:
    """Shorthand for an exactly Hermitian test matrix."""
    return HermitianMatrix(np.array(grid, dtype=complex))


def seeded_matrices(ensemble: Ensemble, count: int, min_order=2, max_order=10):
    """Yield count seeded random matrices with orders cycling through the range."""
    orders = range(min_order, max_order + 1)
    for seed in range(count):
        n = orders[seed % len(orders)]
        yield random_hermitian(n, seed, ensemble=ensemble)


def separated_spectrum(rng: np.random.Generator, n: int, min_gap: float = 0.1):
    """Ascending spectrum centered near zero with gaps of at least min_gap."""
    gaps = min_gap + rng.uniform(0.0, 1.0, n)
    lam = np.cumsum(gaps)
    return lam - lam.mean()


def numpy_magnitudes(a: HermitianMatrix) -> np.ndarray:
    """Magnitudes from numpy's own eigensolver, used as an independent oracle."""
    _, vectors = np.linalg.eigh(a.entries)
    return (np.abs(vectors) ** 2).T


def invoke(args):
    """Run the eigenid cli with the given argument list.

    Setting catch_exceptions to False enables us to see programming errors in eigenid
    code, stdout and stderr are kept apart so reports can be parsed.

    Returns:
        Result object, which can be further checked.
    """
    runner = CliRunner(mix_stderr=False)
    return runner.invoke(cli, args, catch_exceptions=False)


def invoke_json(args):
    """Run the cli with --json appended, return the result and the parsed report."""
    result = invoke(args + ["--json"])
    return result, json.loads(result.stdout)


def assert_strings_equal(string1: str, string2: str):
    """Helper that should be used when comparing strings that come from eigenid's stdout
    and eigenid's internal hardcoded strings.

    Returns:
        Asserts if strings are different
    """

    def clear_rich(string):
        """Output from runner.invoke and hard-coded messages can contain different
        number of newlines, and indent characters, this is preventing comparisons in
        asserts.
        """
        return string.replace("\n", "").replace("\t", 8 * " ")

    assert clear_rich(string1) == clear_rich(string2)
