"""Toolkit for a legged millirobot's shell traversing compliant grass-like beams.

Quasi-static contact/drag simulation of an elliptical shell in a beam
channel, locomotion energy metrics, telemetry trace analysis, and tactile
shell force calibration.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .beam import BeamSpec, ContactResult, torsional_stiffness
from .geometry import EllipseBody, Vec2
from .simulator import ChannelSpec, ForceTrace, contact_set, net_drag, sweep

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "BeamSpec",
    "ChannelSpec",
    "ContactResult",
    "EllipseBody",
    "ForceTrace",
    "Vec2",
    "contact_set",
    "net_drag",
    "sweep",
    "torsional_stiffness",
    "__version__",
]
