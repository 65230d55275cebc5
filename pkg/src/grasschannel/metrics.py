"""Locomotion energy-cost metrics and per-stride segmentation.

Drag energy is the mean resisting force times the channel length; specific
resistance is mean power over weight times mean speed (dimensionless, lower
is more efficient).  Strides are one full 2*pi revolution of the leg angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .telemetry import TelemetryRecord

G_DEFAULT = 9.81


class StalledTrialError(ValueError):
    """Mean velocity is zero; specific resistance is undefined."""


class EmptyWindowError(ValueError):
    """Analysis window contains no telemetry samples."""


@dataclass(frozen=True)
class StrideMetrics:
    t_start: float
    t_end: float
    drag_energy: float
    electrical_energy: float
    specific_resistance: float


@dataclass(frozen=True)
class TrialMetrics:
    mean_fx: float
    mean_fz: float
    mean_power: float
    mean_velocity: float
    drag_energy: float
    electrical_energy: float
    specific_resistance: float
    per_stride: tuple[StrideMetrics, ...]

    def to_dict(self) -> dict:
        return {
            "mean_fx_n": self.mean_fx,
            "mean_fz_n": self.mean_fz,
            "mean_power_w": self.mean_power,
            "mean_velocity_mps": self.mean_velocity,
            "drag_energy_j": self.drag_energy,
            "electrical_energy_j": self.electrical_energy,
            "specific_resistance": self.specific_resistance,
            "strides": [
                {
                    "t_start_s": s.t_start,
                    "t_end_s": s.t_end,
                    "drag_energy_j": s.drag_energy,
                    "electrical_energy_j": s.electrical_energy,
                    "specific_resistance": s.specific_resistance,
                }
                for s in self.per_stride
            ],
        }


def drag_energy(mean_fx: float, l_channel: float) -> float:
    """Work done against drag over the channel [J]."""
    if l_channel <= 0.0:
        raise ValueError("channel length must be positive")
    return mean_fx * l_channel


def specific_resistance(
    mean_power: float,
    mass: float,
    mean_velocity: float,
    g: float = G_DEFAULT,
) -> float:
    """Dimensionless locomotion cost: mean_power / (mass * g * mean_velocity)."""
    if mass <= 0.0:
        raise ValueError("mass must be positive")
    if mean_velocity <= 0.0:
        raise StalledTrialError("specific resistance undefined at zero velocity")
    return mean_power / (mass * g * mean_velocity)


def stride_segments(
    leg_angle: Sequence[float], time: Sequence[float]
) -> list[tuple[float, float]]:
    """Split a trace into strides, one per 2*pi advance of the leg angle.

    The leg angle is expected to grow monotonically up to noise; a partial
    trailing stride is discarded.
    """
    angle = np.asarray(leg_angle, dtype=float)
    t = np.asarray(time, dtype=float)
    if angle.size < 2:
        return []
    if np.any(np.diff(t) <= 0.0):
        raise ValueError("time must be strictly increasing")

    # Running max makes the noisy ramp monotone for threshold crossing.
    envelope = np.maximum.accumulate(np.unwrap(angle))
    n_full = int((envelope[-1] - envelope[0]) // (2.0 * math.pi))
    if n_full < 1:
        return []
    thresholds = envelope[0] + 2.0 * math.pi * np.arange(1, n_full + 1)
    idx = np.searchsorted(envelope, thresholds)
    idx = idx[idx < envelope.size]
    bounds = np.concatenate(([t[0]], t[idx]))
    return [(float(bounds[k]), float(bounds[k + 1])) for k in range(len(bounds) - 1)]


def _window_slice(records: Sequence[TelemetryRecord], t_enter, t_exit):
    t = np.array([r.t for r in records])
    mask = (t >= t_enter) & (t <= t_exit)
    if not mask.any():
        raise EmptyWindowError(
            f"no samples in window [{t_enter}, {t_exit}]"
        )
    return t[mask], np.nonzero(mask)[0]


def trial_metrics(
    records: Sequence[TelemetryRecord],
    window: tuple[float, float],
    l_channel: float,
    mass: float,
    g: float = G_DEFAULT,
) -> TrialMetrics:
    """Trial statistics over the channel window.

    mean_fx is the magnitude of the windowed mean resisting (-x) force so
    the drag energy comes out positive; the mean velocity is the channel
    length over the transit time; per-stride energies use the left leg
    angle for segmentation and the trial-level mean velocity.
    """
    t_enter, t_exit = window
    if t_exit <= t_enter:
        raise EmptyWindowError("window must have positive duration")
    t, idx = _window_slice(records, t_enter, t_exit)
    fx = np.array([records[i].fx for i in idx])
    fz = np.array([records[i].fz for i in idx])
    power = np.array([records[i].power for i in idx])
    leg = np.array([records[i].leg_left for i in idx])

    mean_fx = abs(float(np.mean(-fx)))
    mean_fz = float(np.mean(fz))
    mean_power = float(np.mean(power))
    mean_velocity = l_channel / (t_exit - t_enter)
    e_drag = drag_energy(mean_fx, l_channel)
    e_elec = float(np.trapezoid(power, t))
    eta = specific_resistance(mean_power, mass, mean_velocity, g)

    strides = []
    for t0, t1 in stride_segments(leg, t):
        m = (t >= t0) & (t <= t1)
        s_fx = abs(float(np.mean(-fx[m])))
        s_len = mean_velocity * (t1 - t0)
        s_power = float(np.mean(power[m]))
        strides.append(
            StrideMetrics(
                t_start=t0,
                t_end=t1,
                drag_energy=s_fx * s_len,
                electrical_energy=float(np.trapezoid(power[m], t[m])),
                specific_resistance=specific_resistance(
                    s_power, mass, mean_velocity, g
                ),
            )
        )

    return TrialMetrics(
        mean_fx=mean_fx,
        mean_fz=mean_fz,
        mean_power=mean_power,
        mean_velocity=mean_velocity,
        drag_energy=e_drag,
        electrical_energy=e_elec,
        specific_resistance=eta,
        per_stride=tuple(strides),
    )
