import math
import os
from typing import Iterable, Union

# What the file loaders accept for paths.
PathType = Union[str, os.PathLike]


class EigenidError(RuntimeError):
    """Base class of every error raised by the eigenid library."""


def normalized_gap(lhs: float, rhs: float) -> float:
    """Scale aware distance between two real numbers.

    Returns |lhs - rhs| / (1 + |lhs| + |rhs|), which is in [0, 1) for finite inputs.
    """
    return abs(lhs - rhs) / (1.0 + abs(lhs) + abs(rhs))


def ordered_product(factors: Iterable[float]) -> float:
    """Multiply factors in ascending order of their magnitude.

    Signs are kept and a zero factor gives an exact zero.
    """
    return math.prod(sorted((float(f) for f in factors), key=abs))


def parse_float_list(text: str):
    """Parse a comma separated list of floats, such as "0,1,2.5".

    Empty items are not allowed. Raises ValueError with a readable message.
    """
    items = [item.strip() for item in text.split(",")]
    if not items or any(item == "" for item in items):
        raise ValueError(f"'{text}' is not a comma separated list of numbers")

    values = []
    for item in items:
        value = float(item)
        if not math.isfinite(value):
            raise ValueError(f"'{item}' is not a finite number")
        values.append(value)

    return values
