"""Planar ellipse geometry: parameterization, surface frames, contact angles.

The shell is an ellipse with the major semi-axis r_x aligned with the
channel (x) and the minor semi-axis r_y lateral (y).  Beams hang from the
top wall; contact angles are solved on the top half phi in [0, pi] and the
bottom side is obtained by mirror symmetry in the simulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from ._kernels import BASE_INSIDE, NO_CONTACT, contact_phi_batch


class Vec2(NamedTuple):
    x: float
    y: float


Point2 = Vec2


@dataclass(frozen=True)
class EllipseBody:
    """Rigid elliptical shell in the channel plane.

    r_x: major semi-axis along the channel [m]
    r_y: minor semi-axis, lateral [m]
    x_r: horizontal center position along the channel [m]
    mass: robot mass [kg]
    """

    r_x: float
    r_y: float
    x_r: float = 0.0
    mass: float = 0.087

    def __post_init__(self) -> None:
        if not (self.r_x > 0.0 and self.r_y > 0.0 and self.mass > 0.0):
            raise ValueError("r_x, r_y and mass must all be positive")
        if self.r_x < self.r_y:
            raise ValueError(
                "channel-aligned major axis required: r_x must be >= r_y"
            )
        if not all(map(math.isfinite, (self.r_x, self.r_y, self.x_r, self.mass))):
            raise ValueError("body parameters must be finite")


class ContactAngle(NamedTuple):
    """Contact-angle solution: parameter angle and degenerate-base flag."""

    phi: float
    base_inside: bool


def ellipse_point(phi: float, body: EllipseBody) -> Point2:
    """Point on the shell boundary at parameter angle phi."""
    if not math.isfinite(phi):
        raise ValueError("phi must be finite")
    return Vec2(body.r_x * math.cos(phi) + body.x_r, body.r_y * math.sin(phi))


def surface_frame(phi: float, body: EllipseBody) -> tuple[Vec2, Vec2]:
    """Unit inward normal and backward-directed unit tangent at phi.

    Both vectors share the normalizer sqrt(r_y^2 cos^2 + r_x^2 sin^2), which
    is the one that actually yields unit vectors for an ellipse.
    """
    c = math.cos(phi)
    s = math.sin(phi)
    norm = math.hypot(body.r_y * c, body.r_x * s)
    n_hat = Vec2(-body.r_y * c / norm, -body.r_x * s / norm)
    t_hat = Vec2(-body.r_x * s / norm, body.r_y * c / norm)
    return n_hat, t_hat


def contains(p: Point2, body: EllipseBody) -> bool:
    """Strict interior test; boundary points are excluded."""
    return ((p[0] - body.x_r) / body.r_x) ** 2 + (p[1] / body.r_y) ** 2 < 1.0


def contact_angle(
    base: Point2,
    length: float,
    body: EllipseBody,
    n_grid: int = 720,
    tol: float = 1e-12,
) -> Optional[ContactAngle]:
    """Contact angle of a beam of the given length hanging from `base`.

    Solves |ellipse_point(phi) - base| = length on [0, pi] and returns the
    root with the largest x coordinate, or None when the undeflected tip
    (base.x, base.y - length) does not reach the shell.  A base lying inside
    the shell is reported with base_inside=True (degenerate, saturated
    contact downstream).
    """
    if length <= 0.0:
        raise ValueError("beam length must be positive")
    if base[1] <= 0.0:
        raise ValueError("top-side convention requires base.y > 0")
    phi, flag = contact_phi_batch(
        np.array([base[0] - body.x_r]),
        base[1],
        length,
        body.r_x,
        body.r_y,
        n_grid=n_grid,
        tol=tol,
    )
    if flag[0] == NO_CONTACT:
        return None
    return ContactAngle(float(phi[0]), bool(flag[0] == BASE_INSIDE))
