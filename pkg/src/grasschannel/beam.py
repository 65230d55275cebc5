"""Compliant-beam mechanics: torsional stiffness, deflection, contact force.

Each grass-like beam is modeled as a rigid link of length L rotating about
its base with a linear torsional spring k_t = E*I/L, I = w*t^3/12.  The
contact force on the shell sits on the edge of the kinetic friction cone:
F = (k_t/L) * dtheta * (n_hat + mu_k * t_hat).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import EllipseBody, Vec2, surface_frame

DTHETA_MAX_DEFAULT = math.pi / 2.0

# Roundoff slack on the deflection argument before flagging inconsistency.
_ARG_SLACK = 1e-9


class InconsistentContactError(ValueError):
    """Contact point trails the beam base in the forward-sweep convention."""


@dataclass(frozen=True)
class BeamSpec:
    """Beam material and geometry plus shell friction coefficients.

    E: flexural modulus [Pa]; w: width [m]; L: free length [m];
    t: thickness [m]; mu_k / mu_s: kinetic / static friction.
    """

    E: float = 5.3e9
    w: float = 0.03
    L: float = 0.027
    t: float = 1.2e-4
    mu_s: float = 0.7
    mu_k: float = 0.53

    def __post_init__(self) -> None:
        if min(self.E, self.w, self.L, self.t) <= 0.0:
            raise ValueError("beam material and geometry must be positive")
        if self.mu_k < 0.0 or self.mu_s < 0.0:
            raise ValueError("friction coefficients cannot be negative")
        if self.t > self.L:
            raise ValueError("thin-beam assumption requires t << L")
        if self.mu_k > self.mu_s:
            raise ValueError("kinetic friction cannot exceed static friction")


@dataclass(frozen=True)
class ContactResult:
    """Resolved contact of one beam with the shell.

    beam_index is 1-based; force is the force exerted on the shell [N];
    saturated marks a clamped deflection (or a base inside the shell).
    """

    beam_index: int
    phi: float
    x_contact: float
    delta_theta: float
    force: Vec2
    saturated: bool


def torsional_stiffness(spec: BeamSpec) -> float:
    """Torsional spring constant k_t = E*I/L [N*m/rad]."""
    inertia = spec.w * spec.t**3 / 12.0
    return spec.E * inertia / spec.L


def angular_deflection(
    x_contact: float,
    x_base: float,
    length: float,
    dtheta_max: float = DTHETA_MAX_DEFAULT,
) -> tuple[float, bool]:
    """Beam angular deflection asin((x_contact - x_base) / length).

    Returns (deflection, saturated); the deflection is clamped to
    dtheta_max and flagged saturated when the asin argument reaches 1 (the
    planar model cannot follow larger deflections) or when the clamp binds.
    """
    arg = (x_contact - x_base) / length
    if arg < -_ARG_SLACK:
        raise InconsistentContactError(
            f"contact at x={x_contact!r} trails beam base at x={x_base!r}"
        )
    arg = max(arg, 0.0)
    if arg >= 1.0:
        return dtheta_max, True
    dtheta = math.asin(arg)
    if dtheta >= dtheta_max:
        return dtheta_max, True
    return dtheta, False


def beam_force(
    delta_theta: float,
    phi: float,
    spec: BeamSpec,
    body: EllipseBody,
) -> Vec2:
    """Friction-cone-edge contact force on the shell [N]."""
    if delta_theta < 0.0:
        raise ValueError("delta_theta must be non-negative")
    scale = torsional_stiffness(spec) / spec.L * delta_theta
    n_hat, t_hat = surface_frame(phi, body)
    return Vec2(
        scale * (n_hat.x + spec.mu_k * t_hat.x),
        scale * (n_hat.y + spec.mu_k * t_hat.y),
    )


def beam_base_positions(n: int, l_channel: float) -> list[float]:
    """Base x positions l_i = (l_channel/n) * (i-1) for i in 1..n."""
    if n < 1:
        raise ValueError("need at least one beam")
    if l_channel <= 0.0:
        raise ValueError("channel length must be positive")
    return [l_channel / n * i for i in range(n)]
