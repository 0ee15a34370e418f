"""
Potentials package: label inventory, unary potential functions and the
per-sentence log-potential lattice.

Nothing here imports the data or encoder packages, which themselves use
``LabelSet``.
"""

from .labels import LabelSet
from .lattice import TRANSITIONS, PotentialLattice, build_lattice, lattice_backward
from .networks import (
    DEFAULT_HIDDEN,
    ROLE_OFFSETS,
    ROLES,
    LinearEmission,
    NetCache,
    PotentialNet,
    linear_emission,
    mlp_forward,
)

__all__ = [
    "LabelSet",
    "DEFAULT_HIDDEN",
    "ROLES",
    "ROLE_OFFSETS",
    "NetCache",
    "PotentialNet",
    "LinearEmission",
    "mlp_forward",
    "linear_emission",
    "TRANSITIONS",
    "PotentialLattice",
    "build_lattice",
    "lattice_backward",
]
