"""Quaternionic quantum theory with exact complex-matrix simulation.

States, POVMs, and Kraus channels over right quaternionic modules, the
matrix embedding into complex space, and randomized verification that the
two descriptions produce identical measurement statistics.
"""

from . import campaigns, cmat, embed, errors, hmat, qqt, quat, simulate
from .qqt import Channel, Povm, State
from .quat import Quaternion

__version__ = "0.1.0"

__all__ = [
    "Channel",
    "Povm",
    "Quaternion",
    "State",
    "campaigns",
    "cmat",
    "embed",
    "errors",
    "hmat",
    "qqt",
    "quat",
    "simulate",
]
