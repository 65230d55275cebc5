"""Telemetry trace ingestion and channel-window detection.

CSV schema (exact): header ``t_s,fx_n,fy_n,fz_n,leg_left_rad,leg_right_rad,power_w``,
decimal point '.', newline-delimited rows, UTF-8.  Window detection replaces
the overhead-camera entry/exit timestamps with a sustained force-threshold
crossing.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

CSV_HEADER = ["t_s", "fx_n", "fy_n", "fz_n", "leg_left_rad", "leg_right_rad", "power_w"]

THRESHOLD_DEFAULT = 0.05  # [N], above the 0.040 N drag-axis noise floor
HYSTERESIS_DEFAULT = 0.02  # [N]
SUSTAIN_DEFAULT = 0.25  # [s], rejects stride-rate force spikes


class TelemetryError(ValueError):
    pass


class SchemaError(TelemetryError):
    """Missing or malformed header."""


class RowError(TelemetryError):
    """Bad data row; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class TelemetryRecord:
    t: float
    fx: float
    fy: float
    fz: float
    leg_left: float
    leg_right: float
    power: float


@dataclass(frozen=True)
class Window:
    """Channel traversal window; free_run marks a no-crossing (full-span) trace."""

    t_enter: float
    t_exit: float
    free_run: bool = False


def parse(stream: TextIO) -> list[TelemetryRecord]:
    """Parse a telemetry CSV stream into records, validating as it goes."""
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty stream: missing header") from None
    if header != CSV_HEADER:
        raise SchemaError(
            f"bad header {header!r}; expected {','.join(CSV_HEADER)}"
        )

    records: list[TelemetryRecord] = []
    prev_t = -math.inf
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise RowError(line, f"expected {len(CSV_HEADER)} fields, got {len(row)}")
        try:
            values = [float(v) for v in row]
        except ValueError as exc:
            raise RowError(line, str(exc)) from None
        if not all(math.isfinite(v) for v in values):
            raise RowError(line, "non-finite value")
        if values[0] < prev_t:
            raise RowError(line, f"timestamp {values[0]!r} decreases")
        prev_t = values[0]
        records.append(TelemetryRecord(*values))
    return records


def serialize(records: Iterable[TelemetryRecord], stream: TextIO) -> None:
    """Write records in the exact CSV schema (shortest round-trip floats)."""
    stream.write(",".join(CSV_HEADER) + "\n")
    for r in records:
        stream.write(
            f"{r.t!r},{r.fx!r},{r.fy!r},{r.fz!r},"
            f"{r.leg_left!r},{r.leg_right!r},{r.power!r}\n"
        )


def detect_window(
    records: Sequence[TelemetryRecord],
    threshold: float = THRESHOLD_DEFAULT,
    hysteresis: float = HYSTERESIS_DEFAULT,
    sustain: float = SUSTAIN_DEFAULT,
) -> Window:
    """Detect channel entry/exit from the drag-force magnitude |fx|.

    Entry is the start of the first run where |fx| stays above the
    threshold (with a hysteresis band against chatter) for at least
    `sustain` seconds; exit is the end of the last such run.  Traces with
    no sustained crossing are flagged as free runs spanning the whole file.
    """
    if len(records) < 2:
        raise TelemetryError("need at least two records")
    low = threshold - hysteresis

    runs: list[tuple[float, float]] = []
    run_start: float | None = None
    last_in: float | None = None
    for r in records:
        mag = abs(r.fx)
        if run_start is None:
            if mag >= threshold:
                run_start = r.t
                last_in = r.t
        else:
            if mag >= low:
                last_in = r.t
            else:
                runs.append((run_start, last_in))
                run_start = None
    if run_start is not None:
        runs.append((run_start, last_in))

    sustained = [(a, b) for a, b in runs if b - a >= sustain]
    if not sustained:
        return Window(records[0].t, records[-1].t, free_run=True)
    return Window(sustained[0][0], sustained[-1][1], free_run=False)
