"""Least-squares calibration of the tactile shell force sensor.

Eight photointerrupters read the displacement of a spring-suspended
reflector plate; a linear map (3x9 matrix, eight channels plus a bias
column) predicts the 3-axis force.  A geometric forward model generates
synthetic sensor data: four reflectors sense z only, two sense x/z and two
sense y/z (tilted by beta).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence, TextIO

import numpy as np

DATASET_HEADER = ["s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8", "fx_n", "fy_n", "fz_n"]

N_CHANNELS = 8


class DegenerateExcitationError(ValueError):
    """Design matrix is rank deficient (an axis was never excited)."""


def default_sensitivity(beta: float = math.pi / 4.0) -> np.ndarray:
    """Unit sensitivity directions of the eight channels (8x3)."""
    s, c = math.sin(beta), math.cos(beta)
    return np.array(
        [
            [0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0],
            [s, 0.0, c],
            [-s, 0.0, c],
            [0.0, s, c],
            [0.0, -s, c],
        ]
    )


@dataclass(frozen=True)
class SensorForwardModel:
    """Linear photointerrupter forward model.

    reading_j = gain_j * (s_j . (compliance * force)) + offset_j + noise.
    """

    sensitivity: np.ndarray = field(default_factory=default_sensitivity)
    gain: np.ndarray = field(default_factory=lambda: np.full(N_CHANNELS, 1.0e5))
    offset: np.ndarray = field(default_factory=lambda: np.full(N_CHANNELS, 512.0))
    compliance: np.ndarray = field(default_factory=lambda: np.full(3, 2.0e-4))
    noise_sigma: float = 0.0

    def __post_init__(self) -> None:
        s = np.asarray(self.sensitivity, dtype=float)
        if s.shape != (N_CHANNELS, 3):
            raise ValueError("sensitivity must be 8x3")
        norms = np.linalg.norm(s, axis=1)
        if not np.allclose(norms, 1.0, atol=1e-9):
            raise ValueError("sensitivity vectors must be unit norm")
        if np.any(np.asarray(self.compliance, dtype=float) <= 0.0):
            raise ValueError("compliance entries must be positive")
        if self.noise_sigma < 0.0:
            raise ValueError("noise sigma cannot be negative")


@dataclass(frozen=True)
class CalibrationModel:
    """Fitted readings -> force map with training diagnostics.

    c: 3x9 coefficient matrix (bias in the last column); rms: per-axis
    training RMS error [N]; n_train: training sample count.
    """

    c: np.ndarray
    rms: np.ndarray
    n_train: int


def synth_dataset(
    model: SensorForwardModel,
    forces: Sequence[Sequence[float]] | np.ndarray,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Generate (readings, forces) from the forward model, deterministically."""
    f = np.asarray(forces, dtype=float).reshape(-1, 3)
    disp = f * np.asarray(model.compliance)[None, :]
    readings = disp @ np.asarray(model.sensitivity).T * np.asarray(model.gain)[None, :]
    readings = readings + np.asarray(model.offset)[None, :]
    if model.noise_sigma > 0.0:
        rng = np.random.default_rng(seed)
        readings = readings + rng.normal(0.0, model.noise_sigma, readings.shape)
    return readings, f


def _design(readings: np.ndarray) -> np.ndarray:
    r = np.asarray(readings, dtype=float).reshape(-1, N_CHANNELS)
    return np.hstack([r, np.ones((r.shape[0], 1))])


def fit(readings: np.ndarray, forces: np.ndarray) -> CalibrationModel:
    """Least-squares fit of the 3x9 calibration matrix."""
    a = _design(readings)
    f = np.asarray(forces, dtype=float).reshape(-1, 3)
    if a.shape[0] != f.shape[0]:
        raise ValueError("readings and forces must have matching sample counts")
    if a.shape[0] < a.shape[1]:
        raise DegenerateExcitationError(
            f"need at least {a.shape[1]} samples, got {a.shape[0]}"
        )
    if np.linalg.matrix_rank(f) < 3:
        raise DegenerateExcitationError(
            "degenerate excitation: the loads never excited all force axes"
        )
    # Noise-free readings span only a rank-4 subspace of the 9 design
    # columns; lstsq returns the minimum-norm solution there, which still
    # reproduces every force in the excited subspace exactly.
    coeffs, *_ = np.linalg.lstsq(a, f, rcond=None)
    c = coeffs.T  # 3x9
    residuals = a @ coeffs - f
    rms = np.sqrt(np.mean(residuals**2, axis=0))
    return CalibrationModel(c=c, rms=rms, n_train=a.shape[0])


def predict(model: CalibrationModel, readings: np.ndarray) -> np.ndarray:
    """Apply the calibration map: forces = C @ [readings; 1]."""
    return _design(readings) @ model.c.T


def rms_error(
    model: CalibrationModel, readings: np.ndarray, forces: np.ndarray
) -> np.ndarray:
    """Per-axis RMS prediction error [N]."""
    f = np.asarray(forces, dtype=float).reshape(-1, 3)
    if f.shape[0] == 0:
        raise ValueError("empty evaluation set")
    residuals = predict(model, readings) - f
    return np.sqrt(np.mean(residuals**2, axis=0))


def write_dataset_csv(
    readings: np.ndarray, forces: np.ndarray, stream: TextIO
) -> None:
    stream.write(",".join(DATASET_HEADER) + "\n")
    f = np.asarray(forces, dtype=float).reshape(-1, 3)
    r = np.asarray(readings, dtype=float).reshape(-1, N_CHANNELS)
    for k in range(r.shape[0]):
        row = [repr(float(v)) for v in r[k]] + [repr(float(v)) for v in f[k]]
        stream.write(",".join(row) + "\n")


def read_dataset_csv(stream: TextIO) -> tuple[np.ndarray, np.ndarray]:
    header = stream.readline().rstrip("\n").split(",")
    if header != DATASET_HEADER:
        raise ValueError(f"bad dataset header; expected {','.join(DATASET_HEADER)}")
    rows = []
    for line_no, line in enumerate(stream, start=2):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != len(DATASET_HEADER):
            raise ValueError(f"line {line_no}: expected {len(DATASET_HEADER)} fields")
        rows.append([float(v) for v in parts])
    data = np.asarray(rows, dtype=float).reshape(-1, len(DATASET_HEADER))
    return data[:, :N_CHANNELS], data[:, N_CHANNELS:]


def write_model_json(model: CalibrationModel, stream: TextIO) -> None:
    json.dump(
        {
            "c": [list(map(float, row)) for row in model.c],
            "rms": list(map(float, model.rms)),
            "n_train": model.n_train,
        },
        stream,
        indent=2,
        sort_keys=True,
    )
    stream.write("\n")


def read_model_json(stream: TextIO) -> CalibrationModel:
    doc = json.load(stream)
    return CalibrationModel(
        c=np.asarray(doc["c"], dtype=float).reshape(3, N_CHANNELS + 1),
        rms=np.asarray(doc["rms"], dtype=float),
        n_train=int(doc["n_train"]),
    )
