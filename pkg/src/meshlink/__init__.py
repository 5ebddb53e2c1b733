"""Guided-link LoRa/Meshtastic sensitivity simulator and mesh coverage planner."""

from .guided_link import (
    AttenuatorChain,
    BurstRecord,
    MatrixConfig,
    SweepResult,
    extract_threshold,
    received_power_dbm,
    run_burst,
    run_matrix,
    run_sweep,
)
from .phy import (
    FrameParams,
    RadioModel,
    RxObservation,
    corrected_prx_dbm,
    default_radio_model,
    observe,
    packet_success_prob,
    sensitivity_dbm,
    time_on_air_s,
)
from .planner import (
    LinkAssessment,
    Node,
    Scenario,
    assess_links,
    connectivity,
    latency_estimate_s,
    plan_summary,
)
from .presets import (
    ModemPreset,
    TxPowerLevel,
    preset_by_name,
    preset_catalog,
)
from .propagation import (
    PathLossModel,
    density_per_km2,
    max_range_m,
    path_loss_db,
    regime_for,
)

__version__ = "0.1.0"
