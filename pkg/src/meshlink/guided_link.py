"""Simulation of the cascaded-attenuator bench.

A transmitter and receiver are joined by a wired chain of fixed attenuator
stages plus a 0-110 dB rotary step attenuator. Sweeping the rotary setting
while firing 50-packet bursts maps the packet error rate curve, from which
the sensitivity threshold (last attenuation step holding PER <= 10%) is
extracted.

Attenuation bookkeeping: ``attenuation_db`` everywhere below means the
cascade total (fixed stages + rotary), excluding jumper insertion loss,
which is accounted separately when computing received power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from . import phy
from .phy import RadioModel
from .presets import PRESETS, ModemPreset, TxPowerLevel, power_by_name, preset_by_name

PER_THRESHOLD_PERCENT = 10.0
DEFAULT_PACKETS_PER_BURST = 50
DEFAULT_PAYLOAD_BYTES = 32
STABILISATION_S = 5.0
DEFAULT_STAGE_DB = 30.0
DEFAULT_INSERTION_LOSS_DB = 2.0


@dataclass
class AttenuatorChain:
    """Wired channel: fixed stages, jumper losses, and the rotary attenuator."""

    fixed_stages_db: tuple[float, ...] = ()
    insertion_loss_db: float = DEFAULT_INSERTION_LOSS_DB
    variable_db: int = 0
    variable_range_db: tuple[int, int] = (0, 110)
    uncertainty_db: float = 0.0  # calibration half-width; 0 keeps sweeps exact

    def __post_init__(self) -> None:
        self.fixed_stages_db = tuple(float(s) for s in self.fixed_stages_db)
        if any(s < 0 for s in self.fixed_stages_db):
            raise ValueError("fixed stage attenuations must be >= 0")
        if self.insertion_loss_db < 0 or self.uncertainty_db < 0:
            raise ValueError("losses and uncertainty must be >= 0")
        lo, hi = self.variable_range_db
        if not lo <= self.variable_db <= hi:
            raise ValueError(f"variable_db {self.variable_db} outside range [{lo}, {hi}]")

    @property
    def fixed_total_db(self) -> float:
        return float(sum(self.fixed_stages_db))

    @property
    def attenuation_db(self) -> float:
        """Cascade attenuation at the current rotary setting."""
        return self.fixed_total_db + self.variable_db

    def at_variable(self, variable_db: int) -> "AttenuatorChain":
        return replace(self, variable_db=variable_db)


class PacketEvent(NamedTuple):
    """One row of the packet log CSV."""

    timestamp_s: float
    run_id: str
    preset: str
    power_dbm: float
    attenuation_db: float
    rssi_dbm: float | None
    snr_db: float | None
    payload_tag: str
    received: bool


@dataclass
class BurstRecord:
    """Outcome of one 50-packet burst at a single attenuation step."""

    attenuation_db: float
    sent: int
    lost: int
    per_percent: float
    mean_rssi_dbm: float | None
    mean_snr_db: float | None


@dataclass
class SweepResult:
    """Full rotary sweep for one (preset, power) cell."""

    preset: ModemPreset
    power: TxPowerLevel
    chain: AttenuatorChain
    records: list[BurstRecord]
    threshold_attenuation_db: float | None
    threshold_prx_dbm: float | None
    run_id: str = "sweep"
    seed: int | None = None
    packet_events: list[PacketEvent] = field(default_factory=list, repr=False)


def received_power_dbm(
    tx_dbm: float, chain: AttenuatorChain, rng: np.random.Generator | None = None
) -> float:
    """Power at the receiver port: TX minus insertion loss minus every stage.

    When a generator is supplied and the chain carries a calibration
    uncertainty, a single uniform draw in +/- uncertainty_db perturbs the
    result.
    """
    prx = tx_dbm - chain.insertion_loss_db - chain.fixed_total_db - chain.variable_db
    if rng is not None and chain.uncertainty_db > 0:
        prx += rng.uniform(-chain.uncertainty_db, chain.uncertainty_db)
    return prx


def _burst(
    preset: ModemPreset,
    power: TxPowerLevel,
    chain: AttenuatorChain,
    model: RadioModel,
    packets: int,
    rng: np.random.Generator,
    events: list[PacketEvent] | None,
    start_s: float,
    toa_s: float,
    run_id: str,
) -> tuple[BurstRecord, float]:
    """One burst at the chain's current setting; returns (record, end time)."""
    prx = received_power_dbm(power.dbm, chain, rng)
    tag = f"att{chain.attenuation_db:g}"
    rssi_sum = snr_sum = 0.0
    n_rx = 0
    now = start_s
    for _ in range(packets):
        obs = phy.observe(preset, prx, model, rng)
        if obs.demodulated:
            rssi_sum += obs.reported_rssi_dbm
            snr_sum += obs.snr_db
            n_rx += 1
        if events is not None:
            events.append(
                PacketEvent(
                    timestamp_s=now,
                    run_id=run_id,
                    preset=preset.name,
                    power_dbm=power.dbm,
                    attenuation_db=chain.attenuation_db,
                    rssi_dbm=obs.reported_rssi_dbm if obs.demodulated else None,
                    snr_db=obs.snr_db if obs.demodulated else None,
                    payload_tag=tag,
                    received=obs.demodulated,
                )
            )
        now += toa_s
    lost = packets - n_rx
    record = BurstRecord(
        attenuation_db=chain.attenuation_db,
        sent=packets,
        lost=lost,
        per_percent=100.0 * lost / packets,
        mean_rssi_dbm=rssi_sum / n_rx if n_rx else None,
        mean_snr_db=snr_sum / n_rx if n_rx else None,
    )
    return record, now


def run_burst(
    preset: ModemPreset,
    power: TxPowerLevel,
    chain: AttenuatorChain,
    model: RadioModel,
    packets: int = DEFAULT_PACKETS_PER_BURST,
    seed: int | np.random.Generator = 0,
) -> BurstRecord:
    """Fire one burst at the chain's current setting and tally the PER."""
    if packets < 1:
        raise ValueError("packets must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    toa = phy.time_on_air_s(preset, DEFAULT_PAYLOAD_BYTES)
    record, _ = _burst(preset, power, chain, model, packets, rng, None, 0.0, toa, "burst")
    return record


def extract_threshold(records: list[BurstRecord]) -> float | None:
    """Sensitivity threshold from an ordered PER curve.

    The threshold is the last attenuation step with PER <= 10% (every later
    step failing), so an isolated mid-sweep PER excursion does not count as
    link failure. Returns None when the sweep never drove the link past 10%.
    """
    if not records:
        raise ValueError("no burst records to extract a threshold from")
    if all(r.per_percent <= PER_THRESHOLD_PERCENT for r in records):
        return None  # link never stressed to failure
    for record in reversed(records):
        if record.per_percent <= PER_THRESHOLD_PERCENT:
            return record.attenuation_db
    return None  # failing from the first step: no passing region observed


def run_sweep(
    preset: ModemPreset,
    power: TxPowerLevel,
    chain: AttenuatorChain,
    model: RadioModel,
    seed: int | np.random.SeedSequence = 0,
    packets: int = DEFAULT_PACKETS_PER_BURST,
    payload_bytes: int = DEFAULT_PAYLOAD_BYTES,
    run_id: str = "sweep",
    collect_packets: bool = True,
) -> SweepResult:
    """Step the rotary attenuator across its range, one burst per step.

    Timestamps are simulated: each step advances by the burst's airtime plus
    the 5 s stabilisation pause; nothing sleeps.
    """
    lo, hi = chain.variable_range_db
    if hi < lo:
        raise ValueError("variable range is empty")
    seed_seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    rng = np.random.default_rng(seed_seq)
    toa = phy.time_on_air_s(preset, payload_bytes)
    records: list[BurstRecord] = []
    events: list[PacketEvent] | None = [] if collect_packets else None
    now = 0.0
    for var in range(lo, hi + 1):
        record, now = _burst(
            preset, power, chain.at_variable(var), model, packets, rng, events, now, toa, run_id
        )
        now += STABILISATION_S
        records.append(record)
    threshold = extract_threshold(records)
    threshold_prx = (
        power.dbm - threshold - chain.insertion_loss_db if threshold is not None else None
    )
    return SweepResult(
        preset=preset,
        power=power,
        chain=chain,
        records=records,
        threshold_attenuation_db=threshold,
        threshold_prx_dbm=threshold_prx,
        run_id=run_id,
        seed=None if isinstance(seed, np.random.SeedSequence) else int(seed),
        packet_events=events or [],
    )


def predicted_threshold_db(preset: ModemPreset, power: TxPowerLevel, model: RadioModel) -> float:
    """Where on the cascade-attenuation axis the link is expected to fail."""
    if model.sensitivity_source == phy.EMPIRICAL:
        expected = model.empirical_threshold_db[preset.name] - (phy.TX_MAX_DBM - power.dbm)
    else:
        sensitivity = phy.sensitivity_dbm(preset, model)
        expected = power.dbm - model.empirical_rig_loss_db - sensitivity
    if model.long_moderate_fault and preset.name == "LongModerate":
        fault_attenuation = model.fault_cutoff_db - (phy.TX_MAX_DBM - power.dbm)
        expected = min(expected, fault_attenuation)
    return expected


def auto_chain(
    preset: ModemPreset,
    power: TxPowerLevel,
    model: RadioModel,
    stage_db: float = DEFAULT_STAGE_DB,
    insertion_loss_db: float = DEFAULT_INSERTION_LOSS_DB,
    uncertainty_db: float = 0.0,
) -> AttenuatorChain:
    """Stack enough fixed stages to bracket the expected failure point.

    The rotary only spans 110 dB, so the bench operator inserts fixed stages
    until the expected threshold sits 60-90 dB into the sweep: a long passing
    region below it and a sustained failing region above.
    """
    expected = predicted_threshold_db(preset, power, model)
    n_stages = max(0, math.floor((expected - 2 * stage_db) / stage_db))
    return AttenuatorChain(
        fixed_stages_db=(stage_db,) * n_stages,
        insertion_loss_db=insertion_loss_db,
        uncertainty_db=uncertainty_db,
    )


@dataclass
class MatrixConfig:
    """Which (preset, power, repetition) cells a matrix run covers.

    The default reproduces the 42-dataset bench campaign: every preset at
    Low/Medium/Max, duplicate runs for the six fast presets, single runs for
    LongModerate and LongSlow.
    """

    preset_names: tuple[str, ...] = tuple(p.name for p in PRESETS)
    power_labels: tuple[str, ...] = ("Low", "Medium", "Max")
    runs_per_preset: dict[str, int] | None = None
    runs_override: int | None = None
    packets: int = DEFAULT_PACKETS_PER_BURST
    payload_bytes: int = DEFAULT_PAYLOAD_BYTES
    stage_db: float = DEFAULT_STAGE_DB
    insertion_loss_db: float = DEFAULT_INSERTION_LOSS_DB
    uncertainty_db: float = 0.0

    def runs_for(self, preset_name: str) -> int:
        if self.runs_override is not None:
            return self.runs_override
        defaults = {"LongModerate": 1, "LongSlow": 1}
        if self.runs_per_preset and preset_name in self.runs_per_preset:
            return self.runs_per_preset[preset_name]
        return defaults.get(preset_name, 2)

    def cells(self) -> list[tuple[ModemPreset, TxPowerLevel, int]]:
        out = []
        for name in self.preset_names:
            preset = preset_by_name(name)
            for label in self.power_labels:
                power = power_by_name(label)
                for run in range(1, self.runs_for(preset.name) + 1):
                    out.append((preset, power, run))
        return out


def run_matrix(
    config: MatrixConfig,
    model: RadioModel,
    seed: int = 0,
    collect_packets: bool = True,
) -> list[SweepResult]:
    """Execute every cell of the test matrix with derived sub-seeds.

    Sub-seeds are a pure function of (seed, catalog index, power index, run),
    so restricting the matrix does not reshuffle the cells it keeps, and
    repetition runs differ only by their run number.
    """
    catalog_index = {p.name: i for i, p in enumerate(PRESETS)}
    power_index = {"Low": 0, "Medium": 1, "Max": 2}
    results = []
    for preset, power, run in config.cells():
        cell_seq = np.random.SeedSequence(
            entropy=(seed, catalog_index[preset.name], power_index[power.label], run)
        )
        chain = auto_chain(
            preset,
            power,
            model,
            stage_db=config.stage_db,
            insertion_loss_db=config.insertion_loss_db,
            uncertainty_db=config.uncertainty_db,
        )
        results.append(
            run_sweep(
                preset,
                power,
                chain,
                model,
                seed=cell_seq,
                packets=config.packets,
                payload_bytes=config.payload_bytes,
                run_id=f"{preset.name}-{power.label}-run{run}",
                collect_packets=collect_packets,
            )
        )
    return results


def chain_to_dict(chain: AttenuatorChain) -> dict:
    return {
        "fixed_stages_db": list(chain.fixed_stages_db),
        "insertion_loss_db": chain.insertion_loss_db,
        "variable_range_db": list(chain.variable_range_db),
        "uncertainty_db": chain.uncertainty_db,
    }


def sweep_result_to_dict(result: SweepResult) -> dict:
    """JSON document for one sweep; packet events are exported separately."""
    return {
        "schema_version": "1",
        "run_id": result.run_id,
        "preset": result.preset.name,
        "power": {"label": result.power.label, "dbm": result.power.dbm},
        "chain": chain_to_dict(result.chain),
        "seed": result.seed,
        # Total cascade attenuation (fixed stages + rotary); insertion loss excluded.
        "attenuation_axis": "cascade_total_db",
        "records": [
            {
                "attenuation_db": r.attenuation_db,
                "sent": r.sent,
                "lost": r.lost,
                "per_percent": r.per_percent,
                "mean_rssi_dbm": r.mean_rssi_dbm,
                "mean_snr_db": r.mean_snr_db,
            }
            for r in result.records
        ],
        "threshold_attenuation_db": result.threshold_attenuation_db,
        "threshold_prx_dbm": result.threshold_prx_dbm,
    }
