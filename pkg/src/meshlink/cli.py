"""Command-line surface: sweep, matrix, plan, toa, serve.

Configuration precedence is flags > MESHLINK_* environment variables >
--config JSON file > built-in defaults. The fully resolved simulation
parameters (not output locations) are echoed into every artifact under
"run_config", and feeding such an artifact back through --config
reproduces it byte-for-byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

from . import guided_link as gl
from . import phy, planner, report
from .presets import PRESETS, power_by_name, preset_by_name, preset_catalog

ENV_PREFIX = "MESHLINK_"
EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class Option:
    name: str
    parse: Callable[[str], Any]
    default: Any
    help: str
    in_run_config: bool = True


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_csv_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


_COMMON_SIM = [
    Option("preset", str, "LongFast", "modem preset name"),
    Option("power", str, "Max", "transmit power level (Low/Medium/Max)"),
    Option("model", str, "empirical", "sensitivity source: datasheet or empirical"),
    Option("seed", int, 0, "global random seed"),
    Option("packets", int, gl.DEFAULT_PACKETS_PER_BURST, "packets per burst"),
    Option("payload_bytes", int, gl.DEFAULT_PAYLOAD_BYTES, "payload size in bytes"),
    Option("fixed_attenuation_db", float, None, "total fixed attenuation; omit to auto-size"),
    Option("insertion_loss_db", float, gl.DEFAULT_INSERTION_LOSS_DB, "jumper/connector loss"),
    Option("uncertainty_db", float, 0.0, "chain calibration uncertainty half-width"),
]

COMMAND_OPTIONS: dict[str, list[Option]] = {
    "sweep": _COMMON_SIM + [Option("output", str, "meshlink-out/sweep", "output directory", in_run_config=False)],
    "matrix": [
        Option("presets", _parse_csv_list, [p.name for p in PRESETS], "comma-separated preset names"),
        Option("powers", _parse_csv_list, ["Low", "Medium", "Max"], "comma-separated power levels"),
        Option("runs", int, None, "override repetitions per (preset, power) cell"),
        Option("model", str, "empirical", "sensitivity source: datasheet or empirical"),
        Option("seed", int, 0, "global random seed"),
        Option("packets", int, gl.DEFAULT_PACKETS_PER_BURST, "packets per burst"),
        Option("payload_bytes", int, gl.DEFAULT_PAYLOAD_BYTES, "payload size in bytes"),
        Option("insertion_loss_db", float, gl.DEFAULT_INSERTION_LOSS_DB, "jumper/connector loss"),
        Option("output", str, "meshlink-out/matrix", "output directory", in_run_config=False),
    ],
    "plan": [
        Option("scenario", str, None, "scenario JSON file (default: bundled demo)"),
        Option("format", str, "table", "report format: table or json", in_run_config=False),
        Option("output", str, None, "optional output directory for artifacts", in_run_config=False),
    ],
    "toa": [
        Option("payload_bytes", int, gl.DEFAULT_PAYLOAD_BYTES, "payload size in bytes"),
        Option("format", str, "table", "report format: table or json", in_run_config=False),
        Option("output", str, None, "optional output directory for artifacts", in_run_config=False),
    ],
    "serve": [
        Option("port", int, 8731, "listen port (0 picks a free one)", in_run_config=False),
        Option("host", str, "127.0.0.1", "bind address", in_run_config=False),
        Option("ui_dir", str, None, "static directory served at / (e.g. frontend/)", in_run_config=False),
    ],
}


def _load_config_file(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    # Artifacts embed their parameters under "run_config"; accept them directly.
    if "run_config" in doc and isinstance(doc["run_config"], dict):
        return doc["run_config"]
    return doc


def resolve_config(command: str, args: argparse.Namespace) -> dict:
    """Merge defaults, config file, environment and flags for one command."""
    options = COMMAND_OPTIONS[command]
    resolved = {opt.name: opt.default for opt in options}
    if getattr(args, "config", None):
        file_values = _load_config_file(args.config)
        for opt in options:
            if opt.name in file_values:
                raw = file_values[opt.name]
                resolved[opt.name] = opt.parse(raw) if isinstance(raw, str) else raw
    for opt in options:
        env_value = os.environ.get(ENV_PREFIX + opt.name.upper())
        if env_value is not None:
            try:
                resolved[opt.name] = opt.parse(env_value)
            except ValueError as exc:
                raise UsageError(f"bad {ENV_PREFIX}{opt.name.upper()}: {exc}") from None
    for opt in options:
        flag_value = getattr(args, opt.name, None)
        if flag_value is not None:
            resolved[opt.name] = flag_value
    return resolved


def run_config_echo(command: str, config: dict) -> dict:
    """The provenance block embedded in artifacts (simulation keys only)."""
    keys = [opt.name for opt in COMMAND_OPTIONS[command] if opt.in_run_config]
    return {"command": command, **{k: config[k] for k in keys}}


def _json_text(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def _fmt_opt(value: float | None, fmt: str = ".4f") -> str:
    return "" if value is None else format(value, fmt)


def write_packet_csv(path: Path, events: list[gl.PacketEvent], run_config: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# run_config: {json.dumps(run_config)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [
                "timestamp_s",
                "run_id",
                "preset",
                "power_dbm",
                "attenuation_db",
                "rssi_dbm",
                "snr_db",
                "payload_tag",
                "received",
            ]
        )
        for ev in events:
            writer.writerow(
                [
                    format(ev.timestamp_s, ".6f"),
                    ev.run_id,
                    ev.preset,
                    format(ev.power_dbm, "g"),
                    format(ev.attenuation_db, "g"),
                    _fmt_opt(ev.rssi_dbm),
                    _fmt_opt(ev.snr_db),
                    ev.payload_tag,
                    "1" if ev.received else "0",
                ]
            )


def read_packet_csv(path: str | Path) -> list[dict]:
    """Read a packet log back, skipping provenance comment lines."""
    with open(path, encoding="utf-8") as fh:
        rows = [line for line in fh if not line.startswith("#")]
    return list(csv.DictReader(rows))


def _radio_model(source: str) -> phy.RadioModel:
    if source not in (phy.DATASHEET, phy.EMPIRICAL):
        raise UsageError(f"unknown model {source!r}; choose datasheet or empirical")
    return phy.default_radio_model(source)


def _chain_for(config: dict, preset, power, model) -> gl.AttenuatorChain:
    if config.get("fixed_attenuation_db") is not None:
        return gl.AttenuatorChain(
            fixed_stages_db=(float(config["fixed_attenuation_db"]),),
            insertion_loss_db=config["insertion_loss_db"],
            uncertainty_db=config["uncertainty_db"],
        )
    return gl.auto_chain(
        preset,
        power,
        model,
        insertion_loss_db=config["insertion_loss_db"],
        uncertainty_db=config["uncertainty_db"],
    )


def cmd_sweep(config: dict) -> int:
    preset = preset_by_name(config["preset"])
    power = power_by_name(config["power"])
    model = _radio_model(config["model"])
    chain = _chain_for(config, preset, power, model)
    result = gl.run_sweep(
        preset,
        power,
        chain,
        model,
        seed=config["seed"],
        packets=config["packets"],
        payload_bytes=config["payload_bytes"],
        run_id=f"{preset.name}-{power.label}",
    )
    echo = run_config_echo("sweep", config)
    doc = gl.sweep_result_to_dict(result)
    doc["run_config"] = echo
    outdir = Path(config["output"])
    _write_text(outdir / "sweep.json", _json_text(doc))
    write_packet_csv(outdir / "packets.csv", result.packet_events, echo)
    report.sweep_figure(result, str(outdir / "sweep.png"))
    thr = result.threshold_attenuation_db
    print(f"{result.run_id}: threshold = {'not reached' if thr is None else f'{thr:g} dB'}")
    print(f"wrote {outdir}/sweep.json, packets.csv, sweep.png")
    return EXIT_OK


def cmd_matrix(config: dict) -> int:
    model = _radio_model(config["model"])
    matrix_config = gl.MatrixConfig(
        preset_names=tuple(preset_by_name(p).name for p in config["presets"]),
        power_labels=tuple(power_by_name(p).label for p in config["powers"]),
        runs_override=config["runs"],
        packets=config["packets"],
        payload_bytes=config["payload_bytes"],
        insertion_loss_db=config["insertion_loss_db"],
    )
    results = gl.run_matrix(matrix_config, model, seed=config["seed"])
    echo = run_config_echo("matrix", config)
    outdir = Path(config["output"])
    events: list[gl.PacketEvent] = []
    cells = []
    for res in results:
        doc = gl.sweep_result_to_dict(res)
        doc["run_config"] = echo
        name = res.run_id.lower().replace("-", "_")
        _write_text(outdir / "sweeps" / f"{name}.json", _json_text(doc))
        events.extend(res.packet_events)
        cells.append(
            {
                "run_id": res.run_id,
                "preset": res.preset.name,
                "power": res.power.label,
                "threshold_attenuation_db": res.threshold_attenuation_db,
                "threshold_prx_dbm": res.threshold_prx_dbm,
                "file": f"sweeps/{name}.json",
            }
        )
    index = {
        "schema_version": "1",
        "dataset_count": len(results),
        "cells": cells,
        "run_config": echo,
    }
    _write_text(outdir / "index.json", _json_text(index))
    write_packet_csv(outdir / "packets.csv", events, echo)
    (outdir / "figures").mkdir(parents=True, exist_ok=True)
    report.matrix_figures(results, str(outdir / "figures"))
    print(f"{len(results)} datasets -> {outdir}")
    return EXIT_OK


def _plan_table(summary: dict) -> str:
    lines = [
        f"preset            : {summary['preset']}",
        f"power             : {summary['power_dbm']:g} dBm",
        f"regime            : {summary['regime']}",
        f"fade margin       : {summary['fade_margin_db']:g} dB",
        f"hop limit         : {summary['hop_limit']}",
        f"nodes             : {summary['node_count']}",
        f"closed links      : {summary['closed_link_count']}",
        f"components        : {summary['component_count']}",
        f"isolated nodes    : {', '.join(summary['isolated_nodes']) or 'none'}",
        f"max range         : {_fmt_opt(summary['max_range_m'], '.1f')} m"
        + (" (terrain-limited)" if summary["terrain_limited"] else ""),
        f"density           : {summary['density_nodes_per_km2']} nodes/km^2",
        "",
        f"{'preset':<14}{'regime':<16}{'range_m':>10}{'nodes/km^2':>12}",
    ]
    for row in summary["preset_table"]:
        range_text = _fmt_opt(row["max_range_m"], ".1f")
        if row["terrain_limited"]:
            range_text += "*"
        lines.append(
            f"{row['preset']:<14}{row['regime']:<16}{range_text:>10}"
            f"{row['density_nodes_per_km2'] if row['density_nodes_per_km2'] is not None else '':>12}"
        )
    lines.append("  * clamped to the terrain-limited ceiling")
    return "\n".join(lines) + "\n"


def cmd_plan(config: dict) -> int:
    scenario_path = config["scenario"] or planner.bundled_demo_scenario_path()
    try:
        scenario = planner.load_scenario(scenario_path)
    except planner.ScenarioError as exc:
        raise UsageError(f"invalid scenario {scenario_path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid scenario {scenario_path}: not valid JSON ({exc})") from None
    summary = planner.plan_summary(scenario)
    links = planner.assess_links(scenario) if len(scenario.nodes) >= 2 else []
    if config["format"] == "json":
        print(_json_text(summary), end="")
    elif config["format"] == "table":
        print(_plan_table(summary), end="")
    else:
        raise UsageError(f"unknown format {config['format']!r}; choose table or json")
    if config["output"]:
        outdir = Path(config["output"])
        echo = run_config_echo("plan", config)
        echo["scenario"] = scenario_path
        doc = {
            "schema_version": "1",
            "scenario": planner.scenario_to_dict(scenario),
            "plan_summary": summary,
            "links": [vars(l) for l in links],
            "run_config": echo,
        }
        _write_text(outdir / "plan.json", _json_text(doc))
        with open(outdir / "links.csv", "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["a", "b", "distance_m", "path_loss_db", "margin_db", "closed"])
            for link in links:
                writer.writerow(
                    [
                        link.a,
                        link.b,
                        format(link.distance_m, ".2f"),
                        format(link.path_loss_db, ".4f"),
                        format(link.margin_db, ".4f"),
                        "1" if link.closed else "0",
                    ]
                )
        report.plan_figure(scenario, links, str(outdir / "plan.png"))
        print(f"wrote {outdir}/plan.json, links.csv, plan.png")
    return EXIT_OK


def cmd_toa(config: dict) -> int:
    payload = config["payload_bytes"]
    if not 1 <= payload <= 255:
        raise UsageError(f"payload_bytes must lie in [1, 255], got {payload}")
    rows = []
    for preset in preset_catalog():
        rows.append(
            {
                "preset": preset.name,
                "sf": preset.sf,
                "bw_hz": preset.bw_hz,
                "cr": preset.cr,
                "symbol_time_ms": phy.symbol_time_s(preset) * 1e3,
                "time_on_air_ms": phy.time_on_air_s(preset, payload) * 1e3,
            }
        )
    rows.sort(key=lambda r: r["time_on_air_ms"])
    if config["format"] == "json":
        print(_json_text({"schema_version": "1", "payload_bytes": payload, "rows": rows}), end="")
    elif config["format"] == "table":
        print(f"{'preset':<14}{'SF':>3}{'BW(kHz)':>9}{'CR':>5}{'Tsym(ms)':>10}{'ToA(ms)':>10}")
        for r in rows:
            print(
                f"{r['preset']:<14}{r['sf']:>3}{r['bw_hz'] / 1e3:>9g}{r['cr']:>5}"
                f"{r['symbol_time_ms']:>10.3f}{r['time_on_air_ms']:>10.3f}"
            )
    else:
        raise UsageError(f"unknown format {config['format']!r}; choose table or json")
    if config["output"]:
        outdir = Path(config["output"])
        echo = run_config_echo("toa", config)
        _write_text(
            outdir / "toa.json",
            _json_text(
                {"schema_version": "1", "payload_bytes": payload, "rows": rows, "run_config": echo}
            ),
        )
        with open(outdir / "toa.csv", "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["preset", "sf", "bw_hz", "cr", "symbol_time_ms", "time_on_air_ms"])
            for r in rows:
                writer.writerow(
                    [
                        r["preset"],
                        r["sf"],
                        r["bw_hz"],
                        r["cr"],
                        format(r["symbol_time_ms"], ".6f"),
                        format(r["time_on_air_ms"], ".6f"),
                    ]
                )
        print(f"wrote {outdir}/toa.json, toa.csv")
    return EXIT_OK


def cmd_serve(config: dict) -> int:
    from . import service

    server = service.make_server(config["host"], config["port"], ui_dir=config["ui_dir"])
    host, port = server.server_address[:2]
    print(f"meshlink service listening on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meshlink",
        description="Guided-link LoRa sensitivity simulator and mesh coverage planner",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "sweep": "run one attenuation sweep and write its artifacts",
        "matrix": "run the preset x power test matrix (42 datasets by default)",
        "plan": "assess a scenario file and report coverage/density",
        "toa": "print time-on-air for all presets at a payload size",
        "serve": "serve the HTTP API consumed by the web planner",
    }
    for command, options in COMMAND_OPTIONS.items():
        cmd_parser = sub.add_parser(command, help=descriptions[command])
        cmd_parser.add_argument("--config", help="JSON config file (same keys as flags)")
        for opt in options:
            flag = "--" + opt.name.replace("_", "-")
            if opt.parse is _parse_csv_list:
                cmd_parser.add_argument(flag, type=_parse_csv_list, default=None, help=opt.help)
            elif opt.parse is bool:
                cmd_parser.add_argument(flag, type=_parse_bool, default=None, help=opt.help)
            else:
                cmd_parser.add_argument(flag, type=opt.parse, default=None, help=opt.help)
    return parser


_HANDLERS = {
    "sweep": cmd_sweep,
    "matrix": cmd_matrix,
    "plan": cmd_plan,
    "toa": cmd_toa,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args.command, args)
        return _HANDLERS[args.command](config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
