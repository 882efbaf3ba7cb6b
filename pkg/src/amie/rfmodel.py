"""RSSI/distance conversion models and calibration fitting.

Two converter families are supported: a cubic polynomial fitted from
calibration walks, and the log-distance path loss model used for both
simulation and the baseline comparison. All functions are pure; random
state for the forward (noisy) model is owned by the caller.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass

import numpy as np

from .errors import FitError

# Readings weaker than this are meaningless with distance and are
# excluded from localization.
USABLE_RSSI_FLOOR = -90.0

# Forward-model clamp: avoids the log singularity at zero separation.
MIN_MODEL_DISTANCE = 0.1


@dataclass(frozen=True)
class Rssi:
    """One beacon reading in dBm. More negative means further away."""

    node_id: int
    value: float

    @property
    def usable(self) -> bool:
        return self.value >= USABLE_RSSI_FLOOR


@dataclass(frozen=True)
class CubicDistanceModel:
    """distance(x) = a3*x^3 + a2*x^2 + a1*x + a0, x in dBm."""

    a3: float
    a2: float
    a1: float
    a0: float

    def distance_for(self, rssi: float) -> float:
        return eval_cubic_distance(self, rssi)


@dataclass(frozen=True)
class LogDistanceModel:
    """Log-distance path loss: rssi0 at reference distance d0, exponent n."""

    rssi0: float
    d0: float = 1.0
    n: float = 2.0

    def __post_init__(self):
        if self.d0 <= 0:
            raise ValueError("reference distance must be positive")
        if self.n <= 0:
            raise ValueError("path-loss exponent must be positive")

    def distance_for(self, rssi: float) -> float:
        return eval_log_distance(self, rssi)


@dataclass(frozen=True)
class CalibrationSample:
    rssi: float
    distance: float

    def __post_init__(self):
        if not math.isfinite(self.distance) or self.distance < 0:
            raise ValueError("calibration distance must be finite and non-negative")


# Cubic coefficients from the original hallway calibration. They produce
# negative distances over the whole usable RSSI range (a transcription
# defect), so they are kept for reference and tests only; localization
# defaults to a calibrated log-distance model instead.
LEGACY_CUBIC = CubicDistanceModel(a3=-31e-5, a2=-73e-2, a1=0.0, a0=-1.5e2)

# Default simulation radio: free-space-like indoor propagation.
DEFAULT_RADIO = LogDistanceModel(rssi0=-59.0, d0=1.0, n=2.0)


def eval_cubic_distance(model: CubicDistanceModel, rssi: float) -> float:
    """Evaluate the cubic converter at one RSSI value. No clamping."""
    x = rssi
    return ((model.a3 * x + model.a2) * x + model.a1) * x + model.a0


def eval_log_distance(model: LogDistanceModel, rssi: float) -> float:
    """Invert the log-distance model: meters for a given RSSI."""
    return model.d0 * 10.0 ** ((model.rssi0 - rssi) / (10.0 * model.n))


def predict_rssi_log(
    model: LogDistanceModel,
    distance: float,
    noise_sigma: float = 0.0,
    rng: random.Random | None = None,
) -> float:
    """Forward model: expected RSSI at ``distance`` meters plus Gaussian noise.

    Distances below MIN_MODEL_DISTANCE are clamped up. ``rng`` must be
    supplied when ``noise_sigma`` > 0 so that draws stay caller-ordered
    and reproducible.
    """
    d = max(distance, MIN_MODEL_DISTANCE)
    rssi = model.rssi0 - 10.0 * model.n * math.log10(d / model.d0)
    if noise_sigma > 0:
        if rng is None:
            raise ValueError("rng required for noisy prediction")
        rssi += rng.gauss(0.0, noise_sigma)
    return rssi


def fit_cubic_model(samples: list[CalibrationSample]) -> CubicDistanceModel:
    """Least-squares degree-3 fit of distance against RSSI.

    Requires at least four samples with four distinct RSSI values;
    repeated readings at the same distance are fine and are averaged
    by the fit naturally.
    """
    if len(samples) < 4:
        raise FitError(f"need at least 4 calibration samples, got {len(samples)}")
    xs = [s.rssi for s in samples]
    if len(set(xs)) < 4:
        raise FitError("need at least 4 distinct RSSI values for a cubic fit")
    ys = [s.distance for s in samples]
    a3, a2, a1, a0 = np.polyfit(np.asarray(xs), np.asarray(ys), deg=3)
    return CubicDistanceModel(a3=float(a3), a2=float(a2), a1=float(a1), a0=float(a0))


def fit_cubic_to_log_model(
    radio: LogDistanceModel,
    d_min: float = 0.1,
    d_max: float = 14.0,
    count: int = 140,
) -> CubicDistanceModel:
    """Cubic approximation of a log-distance radio over a distance band.

    Stands in for a hallway calibration walk: exact forward readings are
    taken on an even distance grid and fitted. The band should cover the
    beacon-to-user distances the deployment can produce.
    """
    if count < 4 or d_max <= d_min:
        raise FitError("calibration band must contain at least 4 increasing distances")
    step = (d_max - d_min) / (count - 1)
    samples = []
    for i in range(count):
        d = d_min + i * step
        samples.append(CalibrationSample(rssi=predict_rssi_log(radio, d), distance=d))
    return fit_cubic_model(samples)


def load_calibration_csv(path: str) -> list[CalibrationSample]:
    """Read calibration samples from a CSV with header rssi_dbm,distance_m."""
    samples = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != [
            "rssi_dbm",
            "distance_m",
        ]:
            raise FitError(f"expected header rssi_dbm,distance_m in {path}")
        for row in reader:
            samples.append(
                CalibrationSample(rssi=float(row["rssi_dbm"]), distance=float(row["distance_m"]))
            )
    return samples
