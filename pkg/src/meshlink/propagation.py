"""Path-loss models, range inversion, and node-density estimation.

Turns an attenuation budget into deployable numbers: how far a link
reaches under a log-distance decay law, and how many nodes blanket a
square kilometre at that reach.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

from .presets import ModemPreset

FREE_SPACE = "free_space"
LOG_DISTANCE = "log_distance"

HIGH_DENSITY = "HighDensity"
BALANCED_URBAN = "BalancedUrban"
MAXIMUM_RANGE = "MaximumRange"

_REGIMES = {
    "ShortTurbo": HIGH_DENSITY,
    "ShortFast": HIGH_DENSITY,
    "ShortSlow": HIGH_DENSITY,
    "MediumFast": BALANCED_URBAN,
    "MediumSlow": BALANCED_URBAN,
    "LongFast": BALANCED_URBAN,
    "LongModerate": MAXIMUM_RANGE,
    "LongSlow": MAXIMUM_RANGE,
}

DEFAULT_OVERLAP_FACTOR = 3.0  # hex-packing slack over the raw disc bound


def fspl_db(distance_m: float, frequency_hz: float) -> float:
    """Free-space path loss, classic 32.45 + 20log10(f_MHz) + 20log10(d_km)."""
    return (
        32.45
        + 20.0 * math.log10(frequency_hz / 1e6)
        + 20.0 * math.log10(distance_m / 1000.0)
    )


@dataclass(frozen=True)
class PathLossModel:
    """Log-distance decay law; free space is the n=2, zero-excess special case."""

    kind: str = LOG_DISTANCE
    frequency_hz: float = 915e6
    exponent: float = 3.5
    reference_distance_m: float = 1.0
    reference_loss_db: float | None = None  # None: free-space loss at d0
    excess_loss_db: float = 0.0
    name: str | None = None

    def __post_init__(self) -> None:
        if self.frequency_hz <= 0 or self.reference_distance_m <= 0:
            raise ValueError("frequency and reference distance must be positive")
        if self.kind == FREE_SPACE:
            object.__setattr__(self, "exponent", 2.0)
            object.__setattr__(self, "excess_loss_db", 0.0)
            object.__setattr__(self, "reference_loss_db", None)
        elif self.kind == LOG_DISTANCE:
            if not 1.6 <= self.exponent <= 6.5:
                raise ValueError(f"path-loss exponent {self.exponent} outside [1.6, 6.5]")
        else:
            raise ValueError(f"unknown path-loss kind {self.kind!r}")

    @property
    def d0_loss_db(self) -> float:
        if self.reference_loss_db is not None:
            return self.reference_loss_db
        return fspl_db(self.reference_distance_m, self.frequency_hz)


def path_loss_db(model: PathLossModel, distance_m: float) -> float:
    """Loss at a distance; valid from the reference distance outward."""
    if distance_m < model.reference_distance_m:
        raise ValueError(
            f"distance {distance_m} m below reference distance {model.reference_distance_m} m"
        )
    return (
        model.d0_loss_db
        + 10.0 * model.exponent * math.log10(distance_m / model.reference_distance_m)
        + model.excess_loss_db
    )


def max_range_m(model: PathLossModel, link_budget_db: float, fade_margin_db: float = 0.0) -> float:
    """Largest distance whose path loss fits inside budget minus margin.

    Exact analytic inversion of path_loss_db.
    """
    allowed = link_budget_db - fade_margin_db
    floor = model.d0_loss_db + model.excess_loss_db
    if allowed <= floor:
        raise ValueError(
            f"budget {link_budget_db} dB minus margin {fade_margin_db} dB cannot close "
            f"a link even at the {model.reference_distance_m} m reference distance"
        )
    return model.reference_distance_m * 10.0 ** ((allowed - floor) / (10.0 * model.exponent))


def density_per_km2(range_m: float, overlap_factor: float = DEFAULT_OVERLAP_FACTOR) -> int:
    """Nodes per square kilometre so every point sits within one node's reach.

    Disc-coverage bound scaled by an overlap factor for packing slack,
    rounded up to whole nodes.
    """
    if range_m <= 0:
        raise ValueError("range must be positive")
    if overlap_factor < 1:
        raise ValueError("overlap factor must be >= 1")
    return math.ceil(overlap_factor / (math.pi * (range_m / 1000.0) ** 2))


def regime_for(preset: ModemPreset) -> str:
    """Operational regime a preset belongs to."""
    return _REGIMES[preset.name]


def model_to_dict(model: PathLossModel) -> dict:
    doc = {
        "kind": model.kind,
        "frequency_hz": model.frequency_hz,
        "exponent": model.exponent,
        "reference_distance_m": model.reference_distance_m,
        "reference_loss_db": model.reference_loss_db,
        "excess_loss_db": model.excess_loss_db,
    }
    if model.name:
        doc["name"] = model.name
    return doc


def model_from_dict(doc: dict, name: str | None = None) -> PathLossModel:
    kind = doc.get("kind", LOG_DISTANCE)
    return PathLossModel(
        kind=kind,
        frequency_hz=float(doc.get("frequency_hz", 915e6)),
        exponent=float(doc.get("exponent", 2.0 if kind == FREE_SPACE else 3.5)),
        reference_distance_m=float(doc.get("reference_distance_m", 1.0)),
        reference_loss_db=(
            None if doc.get("reference_loss_db") is None else float(doc["reference_loss_db"])
        ),
        excess_loss_db=float(doc.get("excess_loss_db", 0.0)),
        name=doc.get("name", name),
    )


def load_models(path: str) -> dict[str, PathLossModel]:
    """Load a {name: model} JSON document from disk."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return {name: model_from_dict(doc, name) for name, doc in raw.items()}


def _builtin_models() -> dict[str, PathLossModel]:
    raw = json.loads(
        resources.files("meshlink.data").joinpath("path-loss-models.json").read_text()
    )
    return {name: model_from_dict(doc, name) for name, doc in raw.items()}


MODEL_PRESETS: dict[str, PathLossModel] = _builtin_models()


def model_by_name(name: str) -> PathLossModel:
    try:
        return MODEL_PRESETS[name]
    except KeyError:
        valid = ", ".join(sorted(MODEL_PRESETS))
        raise ValueError(f"unknown path-loss model {name!r}; built-ins: {valid}") from None
