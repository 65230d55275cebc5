"""Channel sweep: resolve the beam contact set along the body path.

The body is swept kinematically at a prescribed speed; under the
quasi-static model the drag depends only on position, so timestamps are
derived as t = (x - x_start) / v.  Only the top beam row is computed and
the mirror-symmetric bottom row enters as a factor of 2 in the net drag;
an explicit two-sided mode exists for lateral-force checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence, TextIO

import numpy as np

from ._kernels import BASE_INSIDE, NO_CONTACT, contact_phi_batch
from .beam import (
    DTHETA_MAX_DEFAULT,
    BeamSpec,
    ContactResult,
    angular_deflection,
    beam_force,
)
from .geometry import EllipseBody, Vec2

TRACE_HEADER = "x_m,t_s,f_drag_n,contact_count"
CONTACTS_HEADER = "x_m,beam_index,phi_rad,delta_theta_rad,fx_n,fy_n,saturated"


@dataclass(frozen=True)
class ChannelSpec:
    """Beam channel layout.

    n beams per side, base positions l_i = (l_channel/n)*(i-1) (plus
    x_offset) unless spacing_override is given; b is the tip-to-tip gap, so
    beam bases sit on the wall line y = b/2 + L.
    """

    n: int = 11
    l_channel: float = 0.28
    b: float = 0.04
    spacing_override: Optional[float] = None
    x_offset: float = 0.0
    beam: BeamSpec = field(default_factory=BeamSpec)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("need at least one beam per side")
        if self.l_channel <= 0.0:
            raise ValueError("channel length must be positive")
        if self.b < 0.0:
            raise ValueError("channel width cannot be negative")
        if self.spacing_override is not None and self.spacing_override <= 0.0:
            raise ValueError("spacing override must be positive")

    @property
    def wall_y(self) -> float:
        """y of the beam bases (tips undeflected at y = b/2)."""
        return self.b / 2.0 + self.beam.L

    def base_positions(self) -> list[float]:
        spacing = (
            self.spacing_override
            if self.spacing_override is not None
            else self.l_channel / self.n
        )
        return [self.x_offset + spacing * i for i in range(self.n)]


@dataclass(frozen=True)
class SweepSample:
    x: float
    t: float
    f_drag: float
    contacts: tuple[ContactResult, ...]

    @property
    def contact_count(self) -> int:
        return len(self.contacts)


@dataclass(frozen=True)
class ForceTrace:
    samples: tuple[SweepSample, ...]
    dx: float
    v: float

    def positions(self) -> np.ndarray:
        return np.array([s.x for s in self.samples])

    def drags(self) -> np.ndarray:
        return np.array([s.f_drag for s in self.samples])

    def contact_counts(self) -> np.ndarray:
        return np.array([s.contact_count for s in self.samples])


def _contacts_from_solution(
    x_r: float,
    bases: Sequence[float],
    phi: np.ndarray,
    flag: np.ndarray,
    channel: ChannelSpec,
    body: EllipseBody,
    dtheta_max: float,
) -> tuple[ContactResult, ...]:
    spec = channel.beam
    moved = replace(body, x_r=x_r)
    out = []
    for j, base_x in enumerate(bases):
        if flag[j] == NO_CONTACT:
            continue
        if math.isnan(phi[j]):
            # Degenerate base-inside case with no resolvable intersection:
            # fall back to the parameter angle of the base direction.
            p = math.atan2(channel.wall_y / body.r_y, (base_x - x_r) / body.r_x)
        else:
            p = float(phi[j])
        x_contact = body.r_x * math.cos(p) + x_r
        if flag[j] == BASE_INSIDE:
            dtheta, saturated = dtheta_max, True
        else:
            dtheta, saturated = angular_deflection(
                x_contact, base_x, spec.L, dtheta_max
            )
        force = beam_force(dtheta, p, spec, moved)
        out.append(
            ContactResult(
                beam_index=j + 1,
                phi=p,
                x_contact=x_contact,
                delta_theta=dtheta,
                force=force,
                saturated=saturated,
            )
        )
    return tuple(out)


def contact_set(
    x_r: float,
    channel: ChannelSpec,
    body: EllipseBody,
    dtheta_max: float = DTHETA_MAX_DEFAULT,
) -> tuple[ContactResult, ...]:
    """Resolve all top-side beam contacts at body position x_r."""
    bases = channel.base_positions()
    u = np.asarray(bases) - x_r
    phi, flag = contact_phi_batch(
        u, channel.wall_y, channel.beam.L, body.r_x, body.r_y
    )
    return _contacts_from_solution(
        x_r, bases, phi, flag, channel, body, dtheta_max
    )


def net_drag(contacts: Iterable[ContactResult]) -> float:
    """Net drag (positive = resisting forward motion) from one-side contacts.

    Doubles the summed x force to account for the mirror-symmetric bottom
    beam row and negates it so resistance is reported positive.
    """
    return -2.0 * sum(c.force.x for c in contacts) + 0.0


def mirror_contacts(
    contacts: Iterable[ContactResult],
) -> tuple[ContactResult, ...]:
    """Bottom-side contacts of a mirror-symmetric channel (y negated)."""
    return tuple(
        replace(c, force=Vec2(c.force.x, -c.force.y), phi=-c.phi)
        for c in contacts
    )


def net_force_two_sided(top_contacts: Iterable[ContactResult]) -> Vec2:
    """Summed force over both beam rows of a mirror-symmetric channel."""
    top = tuple(top_contacts)
    bottom = mirror_contacts(top)
    fx = sum(c.force.x for c in top) + sum(c.force.x for c in bottom)
    fy = sum(c.force.y for c in top) + sum(c.force.y for c in bottom)
    return Vec2(fx, fy)


def sweep(
    channel: ChannelSpec,
    body: EllipseBody,
    dx: float = 1e-3,
    v: float = 0.05,
    dtheta_max: float = DTHETA_MAX_DEFAULT,
) -> ForceTrace:
    """Sweep the body through the channel and record the drag trace.

    Positions run from x_offset - r_x - L to x_offset + l_channel + r_x + L
    in steps of dx; the contact problem for every (position, beam) pair is
    solved in a single kernel batch.
    """
    if dx <= 0.0:
        raise ValueError("dx must be positive")
    if v <= 0.0:
        raise ValueError("v must be positive")

    start = channel.x_offset - body.r_x - channel.beam.L
    stop = channel.x_offset + channel.l_channel + body.r_x + channel.beam.L
    n_steps = int(math.floor((stop - start) / dx)) + 1
    xs = start + dx * np.arange(n_steps)

    bases = np.asarray(channel.base_positions())
    u = bases[None, :] - xs[:, None]
    phi, flag = contact_phi_batch(
        u.ravel(), channel.wall_y, channel.beam.L, body.r_x, body.r_y
    )
    phi = phi.reshape(u.shape)
    flag = flag.reshape(u.shape)

    samples = []
    for k in range(n_steps):
        x = float(xs[k])
        contacts = _contacts_from_solution(
            x, bases, phi[k], flag[k], channel, body, dtheta_max
        )
        samples.append(
            SweepSample(
                x=x,
                t=(x - start) / v,
                f_drag=net_drag(contacts),
                contacts=contacts,
            )
        )
    return ForceTrace(samples=tuple(samples), dx=dx, v=v)


def write_trace_csv(trace: ForceTrace, stream: TextIO) -> None:
    stream.write(TRACE_HEADER + "\n")
    for s in trace.samples:
        stream.write(f"{s.x!r},{s.t!r},{s.f_drag!r},{s.contact_count}\n")


def write_contacts_csv(trace: ForceTrace, stream: TextIO) -> None:
    stream.write(CONTACTS_HEADER + "\n")
    for s in trace.samples:
        for c in s.contacts:
            stream.write(
                f"{s.x!r},{c.beam_index},{c.phi!r},{c.delta_theta!r},"
                f"{c.force.x!r},{c.force.y!r},{int(c.saturated)}\n"
            )
