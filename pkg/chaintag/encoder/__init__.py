"""
Encoder package: optional biLSTM over the embedding sequence.
"""

from .bilstm import (
    DIRECTIONS,
    FORGET_BIAS,
    GATES,
    BiLstmEncoder,
    BiLstmParams,
    EncodedSequence,
    bilstm_backward,
    bilstm_forward,
)
from .identity import IdentityEncoder

ENCODERS = ("identity", "bilstm")

__all__ = [
    "ENCODERS",
    "GATES",
    "DIRECTIONS",
    "FORGET_BIAS",
    "EncodedSequence",
    "BiLstmParams",
    "bilstm_forward",
    "bilstm_backward",
    "BiLstmEncoder",
    "IdentityEncoder",
]
