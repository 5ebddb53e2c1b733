"""Figure rendering for sweep, matrix and plan artifacts.

Everything renders through the Agg backend straight to files, so reports
work headless and byte-reproducibly.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .guided_link import PER_THRESHOLD_PERCENT, SweepResult
from .planner import LinkAssessment, Scenario

DPI = 130

# One stable colour per preset across every figure.
_PRESET_COLOURS = {
    "ShortTurbo": "tab:red",
    "ShortFast": "tab:orange",
    "ShortSlow": "gold",
    "MediumFast": "tab:green",
    "MediumSlow": "tab:cyan",
    "LongFast": "tab:blue",
    "LongModerate": "tab:purple",
    "LongSlow": "black",
}


def _series(result: SweepResult):
    att = [r.attenuation_db for r in result.records]
    rssi = [r.mean_rssi_dbm for r in result.records]
    snr = [r.mean_snr_db for r in result.records]
    per = [r.per_percent for r in result.records]
    return att, rssi, snr, per


def sweep_figure(result: SweepResult, path: str) -> None:
    """Three-panel summary of one sweep: RSSI, SNR and PER vs attenuation."""
    att, rssi, snr, per = _series(result)
    colour = _PRESET_COLOURS.get(result.preset.name, "tab:blue")
    fig, (ax_rssi, ax_snr, ax_per) = plt.subplots(3, 1, figsize=(7, 8.5), sharex=True)

    ax_rssi.plot(att, rssi, color=colour, lw=1.2)
    ax_rssi.set_ylabel("Mean RSSI (dBm)")
    ax_rssi.grid(True, alpha=0.3)

    ax_snr.plot(att, snr, color=colour, lw=1.2)
    ax_snr.axhline(0.0, color="gray", ls="--", lw=0.8, label="noise floor")
    ax_snr.set_ylabel("Mean SNR (dB)")
    ax_snr.grid(True, alpha=0.3)
    ax_snr.legend(loc="upper right", fontsize=8)

    ax_per.plot(att, per, color=colour, lw=1.2)
    ax_per.axhline(PER_THRESHOLD_PERCENT, color="gray", ls="--", lw=0.8, label="PER 10%")
    if result.threshold_attenuation_db is not None:
        ax_per.axvline(
            result.threshold_attenuation_db,
            color="crimson",
            ls=":",
            lw=1.0,
            label=f"threshold {result.threshold_attenuation_db:g} dB",
        )
    ax_per.set_ylabel("PER (%)")
    ax_per.set_xlabel("Total cascade attenuation (dB)")
    ax_per.grid(True, alpha=0.3)
    ax_per.legend(loc="upper left", fontsize=8)

    fig.suptitle(f"{result.preset.name} @ {result.power.label} ({result.power.dbm:g} dBm)")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def matrix_figures(results: list[SweepResult], outdir: str, power_label: str = "Max") -> list[str]:
    """Overview figures across presets at one power level.

    Returns the list of files written.
    """
    chosen: dict[str, SweepResult] = {}
    for res in results:
        if res.power.label == power_label and res.preset.name not in chosen:
            chosen[res.preset.name] = res
    written = []

    specs = [
        ("rssi_vs_attenuation.png", 1, "Mean RSSI (dBm)"),
        ("snr_vs_attenuation.png", 2, "Mean SNR (dB)"),
        ("per_vs_attenuation.png", 3, "PER (%)"),
    ]
    for fname, idx, ylabel in specs:
        fig, ax = plt.subplots(figsize=(8, 5))
        for name, res in chosen.items():
            series = _series(res)
            ax.plot(
                series[0],
                series[idx],
                label=name,
                color=_PRESET_COLOURS.get(name),
                lw=1.1,
            )
        if idx == 2:
            ax.axhline(0.0, color="gray", ls="--", lw=0.8)
        if idx == 3:
            ax.axhline(PER_THRESHOLD_PERCENT, color="gray", ls="--", lw=0.8)
        ax.set_xlabel("Total cascade attenuation (dB)")
        ax.set_ylabel(ylabel)
        ax.set_title(f"Modem presets @ {power_label} power")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = f"{outdir}/{fname}"
        fig.savefig(path, dpi=DPI)
        plt.close(fig)
        written.append(path)
    return written


_MARGIN_SOLID_DB = 10.0


def plan_figure(scenario: Scenario, links: list[LinkAssessment], path: str) -> None:
    """Node map with closed links coloured by margin bucket."""
    fig, ax = plt.subplots(figsize=(7, 7))
    pos = {n.id: (n.x_m, n.y_m) for n in scenario.nodes}
    drawn = {"strong": False, "thin": False}
    for link in links:
        if not link.closed:
            continue
        (xa, ya), (xb, yb) = pos[link.a], pos[link.b]
        strong = link.margin_db >= _MARGIN_SOLID_DB
        key = "strong" if strong else "thin"
        ax.plot(
            [xa, xb],
            [ya, yb],
            color="seagreen" if strong else "darkorange",
            lw=1.6 if strong else 1.2,
            label=(None if drawn[key] else (f"margin >= {_MARGIN_SOLID_DB:g} dB" if strong else f"margin 0-{_MARGIN_SOLID_DB:g} dB")),
            zorder=1,
        )
        drawn[key] = True
    xs = [n.x_m for n in scenario.nodes]
    ys = [n.y_m for n in scenario.nodes]
    ax.scatter(xs, ys, s=60, color="tab:blue", zorder=2)
    for node in scenario.nodes:
        ax.annotate(node.id, (node.x_m, node.y_m), textcoords="offset points", xytext=(6, 6), fontsize=9)
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_title(f"{scenario.preset.name} @ {scenario.power.label}, fade margin {scenario.fade_margin_db:g} dB")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, alpha=0.3)
    if any(drawn.values()):
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
