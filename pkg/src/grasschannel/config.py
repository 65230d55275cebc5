"""Run configuration: defaults, presets and config-file parsing.

Defaults mirror the bench setup: an 18 cm x 10 cm shell footprint
(r_x = 0.09 m, r_y = 0.05 m, 87 g), fiberglass beams 3 cm x 2.7 cm x
0.012 cm with flexural modulus 5.3 GPa and friction 0.7/0.53, and a 28 cm
channel with 11 beams per side.  Channel tightness is given either as the
tip-to-tip width b or the maximum beam deflection d, related by
b = 2*r_y - 2*d.

Config files are plain ``key = value`` lines with dotted keys
(e.g. ``channel.d = 0.03``); '#' starts a comment.  CLI flags win over the
file.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .beam import BeamSpec
from .geometry import EllipseBody
from .simulator import ChannelSpec


class ConfigError(ValueError):
    pass


# Width of the shell contact region; b = CONTACT_WIDTH - 2*d.
CONTACT_WIDTH = 0.10

# Named channel presets: maximum deflection d per condition.
PRESETS: dict[str, Optional[float]] = {
    "free": None,
    "d0": 0.00,
    "d1": 0.01,
    "d2": 0.02,
    "d3": 0.03,
}

# Effective width used for the unconstrained (free) condition: wide enough
# that the beam tips never reach the shell.
FREE_WIDTH = 0.5


@dataclass(frozen=True)
class RunConfig:
    body: EllipseBody = field(
        default_factory=lambda: EllipseBody(r_x=0.09, r_y=0.05, mass=0.087)
    )
    beam: BeamSpec = field(default_factory=BeamSpec)
    n: int = 11
    l_channel: float = 0.28
    d: Optional[float] = None
    b: Optional[float] = None
    spacing_override: Optional[float] = None
    dx: float = 1e-3
    v: float = 0.05
    threshold: float = 0.05
    hysteresis: float = 0.02
    g: float = 9.81

    def resolved_width(self) -> float:
        """Channel width b, derived from d when only d is given."""
        if self.b is not None and self.d is not None:
            expected = 2.0 * self.body.r_y - 2.0 * self.d
            if abs(self.b - expected) > 1e-12:
                raise ConfigError(
                    f"channel.b={self.b!r} conflicts with channel.d={self.d!r}"
                    f" (expected b={expected!r})"
                )
            return self.b
        if self.b is not None:
            return self.b
        if self.d is not None:
            width = 2.0 * self.body.r_y - 2.0 * self.d
            if width < 0.0:
                raise ConfigError(f"channel.d={self.d!r} exceeds the shell radius")
            return width
        raise ConfigError("one of channel.d or channel.b is required")

    def channel(self) -> ChannelSpec:
        return ChannelSpec(
            n=self.n,
            l_channel=self.l_channel,
            b=self.resolved_width(),
            spacing_override=self.spacing_override,
            beam=self.beam,
        )


def apply_preset(config: RunConfig, name: str) -> RunConfig:
    if name not in PRESETS:
        raise ConfigError(
            f"unknown preset {name!r}; choose from {', '.join(PRESETS)}"
        )
    d = PRESETS[name]
    if d is None:
        return replace(config, d=None, b=FREE_WIDTH)
    return replace(config, d=d, b=None)


_FLOAT_KEYS = {
    "body.r_x": ("body", "r_x"),
    "body.r_y": ("body", "r_y"),
    "body.mass": ("body", "mass"),
    "beam.e": ("beam", "E"),
    "beam.w": ("beam", "w"),
    "beam.l": ("beam", "L"),
    "beam.t": ("beam", "t"),
    "beam.mu_s": ("beam", "mu_s"),
    "beam.mu_k": ("beam", "mu_k"),
    "channel.l_channel": ("self", "l_channel"),
    "channel.d": ("self", "d"),
    "channel.b": ("self", "b"),
    "channel.spacing_override": ("self", "spacing_override"),
    "sweep.dx": ("self", "dx"),
    "sweep.v": ("self", "v"),
    "analysis.threshold": ("self", "threshold"),
    "analysis.hysteresis": ("self", "hysteresis"),
    "analysis.g": ("self", "g"),
}

_INT_KEYS = {"channel.n": ("self", "n")}


def parse_config(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    """Parse ``key = value`` configuration text on top of a base config."""
    config = base if base is not None else RunConfig()
    body_kw: dict[str, float] = {}
    beam_kw: dict[str, float] = {}
    self_kw: dict[str, object] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        try:
            if key in _FLOAT_KEYS:
                target, attr = _FLOAT_KEYS[key]
                parsed: object = float(value)
            elif key in _INT_KEYS:
                target, attr = _INT_KEYS[key]
                parsed = int(value)
            else:
                raise ConfigError(f"line {line_no}: unknown key {key!r}")
        except ValueError:
            raise ConfigError(
                f"line {line_no}: bad value {value!r} for key {key!r}"
            ) from None
        if target == "body":
            body_kw[attr] = parsed  # type: ignore[assignment]
        elif target == "beam":
            beam_kw[attr] = parsed  # type: ignore[assignment]
        else:
            self_kw[attr] = parsed

    if body_kw:
        config = replace(config, body=replace(config.body, **body_kw))
    if beam_kw:
        config = replace(config, beam=replace(config.beam, **beam_kw))
    if self_kw:
        # Setting one of d/b clears the other so presets and files compose.
        if "d" in self_kw and "b" not in self_kw:
            self_kw["b"] = None
        elif "b" in self_kw and "d" not in self_kw:
            self_kw["d"] = None
        config = replace(config, **self_kw)  # type: ignore[arg-type]
    return config
