"""Behavioral model of the SX1262 receiver.

Covers sensitivity (datasheet-style and empirically calibrated), LoRa
time-on-air, the RSSI register artefacts seen on real hardware (front-end
saturation, noise-floor plateau), and the packet-success curve used by the
guided-link sweep.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources

import numpy as np

from .presets import TX_MAX_DBM, ModemPreset

# Demodulation SNR limits per spreading factor. Only the SF12 value (-20 dB)
# is anchored by the transceiver characterisation; the rest follow the usual
# 2.5 dB-per-SF staircase and are configurable on the model.
DEFAULT_SNR_LIMITS_DB: dict[int, float] = {
    7: -7.5,
    8: -10.0,
    9: -12.5,
    10: -15.0,
    11: -17.5,
    12: -20.0,
}

# Maximum tolerable cascade attenuation at Max power, per preset, as a
# sweep would extract it (largest 1 dB step still holding PER <= 10%).
# Placed strictly inside the measured family bands so that binomial noise
# on a 50-packet burst cannot push an extracted threshold over a band edge.
DEFAULT_EMPIRICAL_THRESHOLDS_DB: dict[str, float] = {
    "ShortTurbo": 112.0,
    "ShortFast": 116.0,
    "ShortSlow": 119.0,
    "MediumFast": 137.0,
    "MediumSlow": 148.0,
    "LongFast": 155.0,
    "LongModerate": 160.0,  # RF capability; the firmware fault masks this
    "LongSlow": 180.0,
}

DATASHEET = "datasheet"
EMPIRICAL = "empirical"

_LN99 = math.log(99.0)
_LN9 = math.log(9.0)


@dataclass(frozen=True)
class FrameParams:
    """LoRa frame composition used for airtime computation."""

    preamble_symbols: int = 16
    explicit_header: bool = True
    crc: bool = True


@dataclass
class RadioModel:
    """Receiver parameters driving sensitivity, artefacts and packet loss.

    ``empirical_threshold_db`` values are cascade-attenuation readings taken
    at Max power on a reference rig whose insertion loss is
    ``empirical_rig_loss_db``; they therefore live on the same attenuation
    axis the sweep reports, not on the received-power axis.
    """

    name: str = "sx1262-default"
    noise_figure_db: float = 6.0
    snr_limit_db: dict[int, float] = field(default_factory=lambda: dict(DEFAULT_SNR_LIMITS_DB))
    sensitivity_source: str = EMPIRICAL
    empirical_threshold_db: dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_EMPIRICAL_THRESHOLDS_DB)
    )
    empirical_rig_loss_db: float = 2.0
    rssi_saturation_dbm: float = 0.0
    rssi_register_floor_dbm: float = -100.0
    failure_width_db: float = 2.0
    long_moderate_fault: bool = True
    fault_cutoff_db: float = 80.0

    def __post_init__(self) -> None:
        if self.sensitivity_source not in (DATASHEET, EMPIRICAL):
            raise ValueError(f"sensitivity_source must be '{DATASHEET}' or '{EMPIRICAL}'")
        missing = [sf for sf in range(7, 13) if sf not in self.snr_limit_db]
        if missing:
            raise ValueError(f"snr_limit_db missing spreading factors: {missing}")
        limits = [self.snr_limit_db[sf] for sf in range(7, 13)]
        if any(b >= a for a, b in zip(limits, limits[1:])):
            raise ValueError("snr_limit_db must be strictly decreasing in SF")
        if not 0.0 <= self.failure_width_db <= 4.0:
            raise ValueError("failure_width_db must lie in [0, 4]")

    def with_source(self, source: str) -> "RadioModel":
        return replace(self, sensitivity_source=source)


@dataclass(frozen=True)
class RxObservation:
    """One packet's worth of receiver readout."""

    true_prx_dbm: float
    reported_rssi_dbm: float
    snr_db: float
    demodulated: bool


def noise_floor_dbm(bw_hz: float, noise_figure_db: float) -> float:
    """Thermal noise power in the channel bandwidth, including the NF."""
    return -174.0 + 10.0 * math.log10(bw_hz) + noise_figure_db


def sensitivity_dbm(preset: ModemPreset, model: RadioModel) -> float:
    """Receiver sensitivity for a preset under the model's source mode.

    Datasheet mode is the textbook thermal-noise formula; empirical mode
    converts the calibrated attenuation threshold at Max power into a
    received-power figure.
    """
    if model.sensitivity_source == DATASHEET:
        return noise_floor_dbm(preset.bw_hz, model.noise_figure_db) + model.snr_limit_db[preset.sf]
    try:
        threshold = model.empirical_threshold_db[preset.name]
    except KeyError:
        raise ValueError(f"model has no empirical threshold for preset {preset.name!r}") from None
    return TX_MAX_DBM - threshold


def symbol_time_s(preset: ModemPreset) -> float:
    """Duration of one chirp symbol: 2^SF / BW."""
    return (2 ** preset.sf) / preset.bw_hz


def low_data_rate_optimised(preset: ModemPreset) -> bool:
    # Mandated by the transceiver whenever the symbol exceeds 16 ms.
    return symbol_time_s(preset) > 0.016


def time_on_air_s(
    preset: ModemPreset, payload_bytes: int, frame: FrameParams = FrameParams()
) -> float:
    """Packet airtime via the standard LoRa symbol-count relation."""
    if not 1 <= payload_bytes <= 255:
        raise ValueError(f"payload_bytes must lie in [1, 255], got {payload_bytes}")
    t_sym = symbol_time_s(preset)
    de = 1 if low_data_rate_optimised(preset) else 0
    ih = 0 if frame.explicit_header else 1
    crc = 1 if frame.crc else 0
    numerator = 8 * payload_bytes - 4 * preset.sf + 28 + 16 * crc - 20 * ih
    n_payload = 8 + max(0, math.ceil(numerator / (4 * (preset.sf - 2 * de))) * preset.cr_denominator)
    return (frame.preamble_symbols + 4.25 + n_payload) * t_sym


def _logistic_scale_db(model: RadioModel) -> float:
    # 1% -> 99% success spans 2 * failure_width_db.
    return model.failure_width_db / _LN99


def _success_snr_threshold_db(preset: ModemPreset, model: RadioModel) -> float:
    """SNR at which packet success crosses 0.5.

    Datasheet mode places the midpoint at the demodulation SNR limit.
    Empirical thresholds are the last passing 1 dB step of a PER <= 10%
    sweep, so the continuous midpoint sits half a step plus the PER-10%
    logistic offset above the recorded attenuation value.
    """
    if model.sensitivity_source == DATASHEET:
        return model.snr_limit_db[preset.sf]
    try:
        threshold = model.empirical_threshold_db[preset.name]
    except KeyError:
        raise ValueError(f"model has no empirical threshold for preset {preset.name!r}") from None
    midpoint_attenuation = threshold + 0.5 + _logistic_scale_db(model) * _LN9
    prx_midpoint = TX_MAX_DBM - model.empirical_rig_loss_db - midpoint_attenuation
    return prx_midpoint - noise_floor_dbm(preset.bw_hz, model.noise_figure_db)


def _fault_snr_cutoff_db(preset: ModemPreset, model: RadioModel) -> float:
    # The LongModerate firmware fault kills the link once the cascade exceeds
    # fault_cutoff_db at Max power; expressed here as the equivalent SNR floor.
    prx_cutoff = TX_MAX_DBM - model.empirical_rig_loss_db - model.fault_cutoff_db
    return prx_cutoff - noise_floor_dbm(preset.bw_hz, model.noise_figure_db)


def packet_success_prob(preset: ModemPreset, snr_db: float, model: RadioModel) -> float:
    """Probability that a packet demodulates at the given SNR.

    Logistic in the margin above the mode's SNR threshold: 0.5 at zero
    margin, 0.99/0.01 at +/- failure_width_db. With the LongModerate fault
    flag set, the probability collapses to zero below the fault cutoff no
    matter how much SNR margin remains.
    """
    if (
        model.long_moderate_fault
        and preset.name == "LongModerate"
        and snr_db < _fault_snr_cutoff_db(preset, model)
    ):
        return 0.0
    margin = snr_db - _success_snr_threshold_db(preset, model)
    scale = _logistic_scale_db(model)
    if scale == 0.0:  # hard cliff
        return 1.0 if margin > 0 else 0.5 if margin == 0 else 0.0
    # Clamp the exponent so extreme margins cannot overflow.
    z = max(-60.0, min(60.0, margin / scale))
    return 1.0 / (1.0 + math.exp(-z))


def reported_rssi_dbm(true_prx_dbm: float, model: RadioModel) -> float:
    """RSSI register value after front-end artefacts.

    The register reads signal-plus-noise power, so it plateaus at the
    noise-floor register value for weak signals, and clips at the ADC
    saturation level for strong ones.
    """
    total = 10.0 ** (true_prx_dbm / 10.0) + 10.0 ** (model.rssi_register_floor_dbm / 10.0)
    return min(model.rssi_saturation_dbm, 10.0 * math.log10(total))


def observe(
    preset: ModemPreset,
    true_prx_dbm: float,
    model: RadioModel,
    rng: np.random.Generator,
) -> RxObservation:
    """Simulate one packet arriving at the receiver front end."""
    snr = true_prx_dbm - noise_floor_dbm(preset.bw_hz, model.noise_figure_db)
    rssi = reported_rssi_dbm(true_prx_dbm, model)
    demodulated = bool(rng.random() < packet_success_prob(preset, snr, model))
    return RxObservation(true_prx_dbm, rssi, snr, demodulated)


def corrected_prx_dbm(rssi_dbm: float, snr_db: float) -> float:
    """Received power reconstructed from the register pair.

    Below the noise floor the RSSI register reads noise power, so the SNR
    has to be folded back in; at non-negative SNR the register is trusted
    as-is.
    """
    if snr_db < 0:
        return rssi_dbm + snr_db
    return rssi_dbm


def radio_model_to_dict(model: RadioModel) -> dict:
    return {
        "name": model.name,
        "noise_figure_db": model.noise_figure_db,
        "snr_limit_db": {str(sf): model.snr_limit_db[sf] for sf in sorted(model.snr_limit_db)},
        "sensitivity_source": model.sensitivity_source,
        "empirical_threshold_db": dict(model.empirical_threshold_db),
        "empirical_rig_loss_db": model.empirical_rig_loss_db,
        "rssi_saturation_dbm": model.rssi_saturation_dbm,
        "rssi_register_floor_dbm": model.rssi_register_floor_dbm,
        "failure_width_db": model.failure_width_db,
        "long_moderate_fault": model.long_moderate_fault,
        "fault_cutoff_db": model.fault_cutoff_db,
    }


def radio_model_from_dict(doc: dict) -> RadioModel:
    try:
        return RadioModel(
            name=doc.get("name", "custom"),
            noise_figure_db=float(doc["noise_figure_db"]),
            snr_limit_db={int(sf): float(v) for sf, v in doc["snr_limit_db"].items()},
            sensitivity_source=str(doc["sensitivity_source"]),
            empirical_threshold_db={k: float(v) for k, v in doc["empirical_threshold_db"].items()},
            empirical_rig_loss_db=float(doc.get("empirical_rig_loss_db", 2.0)),
            rssi_saturation_dbm=float(doc["rssi_saturation_dbm"]),
            rssi_register_floor_dbm=float(doc["rssi_register_floor_dbm"]),
            failure_width_db=float(doc["failure_width_db"]),
            long_moderate_fault=bool(doc["long_moderate_fault"]),
            fault_cutoff_db=float(doc["fault_cutoff_db"]),
        )
    except KeyError as exc:
        raise ValueError(f"radio model document missing key {exc.args[0]!r}") from None


def default_radio_model(source: str = EMPIRICAL) -> RadioModel:
    """The embedded "sx1262-default" model, optionally switched to datasheet mode."""
    doc = json.loads(resources.files("meshlink.data").joinpath("sx1262-default.json").read_text())
    model = radio_model_from_dict(doc)
    if source != model.sensitivity_source:
        model = model.with_source(source)
    return model
