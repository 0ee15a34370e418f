"""
Training package: Nesterov-momentum SGD and the early-stopping loop.
"""

from .optimizer import (
    DEFAULT_LEARNING_RATE,
    DEFAULT_MOMENTUM,
    GradFn,
    OptimizerState,
    nesterov_step,
)
from .trainer import METRICS, TraceEntry, TrainResult, TrainSchedule, evaluate, train

__all__ = [
    "DEFAULT_LEARNING_RATE",
    "DEFAULT_MOMENTUM",
    "GradFn",
    "OptimizerState",
    "nesterov_step",
    "METRICS",
    "TrainSchedule",
    "TraceEntry",
    "TrainResult",
    "evaluate",
    "train",
]
