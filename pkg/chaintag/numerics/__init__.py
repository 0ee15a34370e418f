"""
Numerics package: dense arithmetic, log-domain reductions, seeded
randomness and parameter bookkeeping.
"""

from .checkpoint import MAGIC, read_store, write_store
from .ops import Rng, log_sum_exp, make_rng, matvec, uniform_bound
from .params import Parameter, ParameterStore, init_parameters

__all__ = [
    "Rng",
    "make_rng",
    "log_sum_exp",
    "matvec",
    "uniform_bound",
    "Parameter",
    "ParameterStore",
    "init_parameters",
    "MAGIC",
    "read_store",
    "write_store",
]
