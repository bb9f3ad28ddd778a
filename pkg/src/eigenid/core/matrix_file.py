import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..constants import MATRIX_FILE_MAGIC
from ..helper_functions import EigenidError, PathType
from .matrix_core import HermitianMatrix, IndexOutOfRange, from_entries

# (row, col, re, im), 1-based.
Entry = Tuple[int, int, float, float]


class MatrixFileParseError(EigenidError):
    """Matrix file text could not be parsed."""


class DuplicateEntry(EigenidError):
    """The same (row, col) pair is listed more than once."""


class UpperTriangleEntry(EigenidError):
    """An entry above the diagonal was listed, only the lower triangle is stored."""


@dataclass(frozen=True)
class MatrixFileRecord:
    """Contents of a matrix file: order plus 1-based lower-triangle entries."""

    order: int
    entries: Tuple[Entry, ...] = ()

    def canonical(self) -> "MatrixFileRecord":
        """Same record with the entries sorted by row, then column."""
        return MatrixFileRecord(self.order, tuple(sorted(self.entries)))


def check_record(record: MatrixFileRecord):
    """Raise if the record breaks one of the file format rules."""
    if record.order < 1:
        raise IndexOutOfRange(f"order must be 1 or more, got {record.order}")

    seen = set()
    for row, col, _, _ in record.entries:
        if not (1 <= row <= record.order and 1 <= col <= record.order):
            raise IndexOutOfRange(
                f"entry ({row}, {col}) outside of [1, {record.order}]"
            )
        if row < col:
            raise UpperTriangleEntry(f"entry ({row}, {col}) is above the diagonal")
        if (row, col) in seen:
            raise DuplicateEntry(f"entry ({row}, {col}) is listed more than once")
        seen.add((row, col))


def read_matrix(record: MatrixFileRecord, mode: str = "strict") -> HermitianMatrix:
    """Turn a file record into a HermitianMatrix.

    Unlisted lower-triangle entries are zero and the upper triangle is filled by
    conjugation. A diagonal entry with a nonzero imaginary part is rejected in strict
    mode and dropped in symmetrize mode.
    """
    check_record(record)

    grid = np.zeros((record.order, record.order), dtype=complex)
    for row, col, re, im in record.entries:
        value = complex(re, im)
        grid[row - 1, col - 1] = value
        if row != col:
            grid[col - 1, row - 1] = value.conjugate()

    return from_entries(record.order, grid, mode=mode)


def _is_stored(value: complex) -> bool:
    # Negative zeros are kept so that the round trip stays bit-exact.
    return not (
        value == 0
        and not math.copysign(1.0, value.real) < 0
        and not math.copysign(1.0, value.imag) < 0
    )


def write_matrix(a: HermitianMatrix) -> MatrixFileRecord:
    """Turn a HermitianMatrix into a canonical file record.

    Only the lower triangle is listed, entries that are exactly +0.0 + 0.0j are
    omitted.
    """
    entries = []
    for row in range(a.n):
        for col in range(row + 1):
            value = complex(a.entries[row, col])
            if _is_stored(value):
                entries.append((row + 1, col + 1, value.real, value.imag))

    return MatrixFileRecord(a.n, tuple(entries))


def _parse_header(line: str, lineno: int) -> int:
    tokens = line.split()
    if len(tokens) != 3 or tokens[0] != MATRIX_FILE_MAGIC or tokens[1] != "hermitian":
        raise MatrixFileParseError(
            f"line {lineno}: expected header '{MATRIX_FILE_MAGIC} hermitian <order>'"
        )
    try:
        return int(tokens[2])
    except ValueError:
        raise MatrixFileParseError(f"line {lineno}: order '{tokens[2]}' is not an int")


def _parse_entry(line: str, lineno: int) -> Entry:
    tokens = line.split()
    if len(tokens) != 4:
        raise MatrixFileParseError(
            f"line {lineno}: expected 'row col re im', got {len(tokens)} fields"
        )
    try:
        row, col = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise MatrixFileParseError(f"line {lineno}: row and col must be integers")
    try:
        re, im = float(tokens[2]), float(tokens[3])
    except ValueError:
        raise MatrixFileParseError(f"line {lineno}: re and im must be numbers")
    if not (math.isfinite(re) and math.isfinite(im)):
        raise MatrixFileParseError(f"line {lineno}: values must be finite")

    return row, col, re, im


def parse_matrix_text(text: str) -> MatrixFileRecord:
    """Parse the matrix text format.

    The first non-blank line is the header, after it every line is either blank, a
    comment starting with '%' or one 'row col re im' entry.
    """
    order = None
    entries = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if order is None:
            order = _parse_header(line, lineno)
            continue
        if line.startswith("%"):
            continue
        entries.append(_parse_entry(line, lineno))

    if order is None:
        raise MatrixFileParseError("file is empty, header line is missing")

    return MatrixFileRecord(order, tuple(entries))


def format_matrix_text(record: MatrixFileRecord) -> str:
    """Inverse of parse_matrix_text. Floats use their shortest round-trip form."""
    lines = [f"{MATRIX_FILE_MAGIC} hermitian {record.order}"]
    for row, col, re, im in record.entries:
        lines.append(f"{row} {col} {float(re)!r} {float(im)!r}")
    return "\n".join(lines) + "\n"


def load_matrix(path: PathType, mode: str = "strict") -> HermitianMatrix:
    """Read and validate a matrix file.

    Raises:
        OSError when the file can not be read, MatrixFileParseError and the record
        errors otherwise.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except UnicodeDecodeError as e:
        raise MatrixFileParseError(f"file is not valid UTF-8 text: {e}") from e

    return read_matrix(parse_matrix_text(text), mode=mode)


def save_matrix(path: PathType, a: HermitianMatrix):
    """Write a matrix file."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_matrix_text(write_matrix(a)))
