from .identity_commands import reconstruct, verify
from .prove_commands import prove

__all__ = [
    "verify",
    "reconstruct",
    "prove",
]
