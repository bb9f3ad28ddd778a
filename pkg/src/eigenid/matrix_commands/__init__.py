from .bench_commands import bench
from .gen_commands import gen

__all__ = [
    "gen",
    "bench",
]
