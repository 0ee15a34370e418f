"""
chaintag: sequence labeling with locally-contextual nonlinear CRFs.

Linear-chain CRFs whose unary potentials may read the neighboring
embeddings through feedforward networks, their ablations, exact
inference, training and span/accuracy scoring.
"""

__version__ = "0.1.0"
__author__ = "chaintag developers"

from .errors import ChainTagError

__all__ = ["ChainTagError", "__version__"]
