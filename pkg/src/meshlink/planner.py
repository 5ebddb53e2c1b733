"""Scenario-level mesh planning.

Positioned nodes plus a preset, power level, path-loss model and radio
model give per-pair link closure; hop-limited reachability over the closed
links approximates the firmware's bounded-hop rebroadcast relaying.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from importlib import resources

from . import phy, propagation
from .phy import RadioModel
from .presets import PRESETS, ModemPreset, TxPowerLevel, power_by_name, preset_by_name
from .propagation import PathLossModel

DEFAULT_HOP_LIMIT = 3
DEFAULT_FORWARDING_DELAY_S = 0.5
# Reported ranges are clamped here: the log-distance law alone would promise
# Long-preset reaches no flat-terrain deployment delivers.
DEFAULT_RANGE_CEILING_M = 5000.0


class ScenarioError(ValueError):
    """Scenario document rejected; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class Node:
    id: str
    x_m: float
    y_m: float
    antenna_gain_db: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x_m) and math.isfinite(self.y_m)):
            raise ScenarioError(f"nodes[{self.id}]", "coordinates must be finite")

    def distance_to(self, other: "Node") -> float:
        return math.hypot(self.x_m - other.x_m, self.y_m - other.y_m)


@dataclass
class Scenario:
    nodes: list[Node]
    preset: ModemPreset
    power: TxPowerLevel
    path_loss: PathLossModel
    radio: RadioModel = field(default_factory=phy.default_radio_model)
    fade_margin_db: float = 0.0
    hop_limit: int = DEFAULT_HOP_LIMIT

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for node in self.nodes:
            if node.id in seen:
                raise ScenarioError(f"nodes[{node.id}].id", f"duplicate node id {node.id!r}")
            seen.add(node.id)
        if self.hop_limit < 1:
            raise ScenarioError("hop_limit", "must be >= 1")
        if self.fade_margin_db < 0:
            raise ScenarioError("fade_margin_db", "must be >= 0")

    def node(self, node_id: str) -> Node:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise ValueError(f"unknown node id {node_id!r}")


@dataclass(frozen=True)
class LinkAssessment:
    a: str
    b: str
    distance_m: float
    path_loss_db: float
    margin_db: float
    closed: bool


def link_budget_db(s: Scenario, gain_a: float = 0.0, gain_b: float = 0.0) -> float:
    """TX power plus antenna gains minus receiver sensitivity."""
    return s.power.dbm + gain_a + gain_b - phy.sensitivity_dbm(s.preset, s.radio)


def assess_links(s: Scenario) -> list[LinkAssessment]:
    """Closure verdict for every unordered node pair.

    A pair at less than the model's reference distance is charged the
    reference loss; links close when the margin (budget minus loss minus
    fade margin) is non-negative.
    """
    if len(s.nodes) < 2:
        raise ValueError("link assessment needs at least 2 nodes")
    out = []
    for i, a in enumerate(s.nodes):
        for b in s.nodes[i + 1 :]:
            d = a.distance_to(b)
            loss = propagation.path_loss_db(s.path_loss, max(d, s.path_loss.reference_distance_m))
            margin = link_budget_db(s, a.antenna_gain_db, b.antenna_gain_db) - loss - s.fade_margin_db
            out.append(
                LinkAssessment(
                    a=a.id,
                    b=b.id,
                    distance_m=d,
                    path_loss_db=loss,
                    margin_db=margin,
                    closed=margin >= 0.0,
                )
            )
    return out


def _adjacency(s: Scenario, links: list[LinkAssessment] | None = None) -> dict[str, set[str]]:
    adj: dict[str, set[str]] = {n.id: set() for n in s.nodes}
    if len(s.nodes) >= 2:
        for link in links if links is not None else assess_links(s):
            if link.closed:
                adj[link.a].add(link.b)
                adj[link.b].add(link.a)
    return adj


def _hops_from(adj: dict[str, set[str]], start: str) -> dict[str, int]:
    hops = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nxt in adj[cur]:
            if nxt not in hops:
                hops[nxt] = hops[cur] + 1
                queue.append(nxt)
    return hops


@dataclass
class ConnectivityReport:
    components: list[list[str]]
    reachable: dict[str, list[str]]  # ids reachable within hop_limit, per node
    hop_counts: dict[str, dict[str, int]]


def connectivity(s: Scenario, links: list[LinkAssessment] | None = None) -> ConnectivityReport:
    """Component partition and hop-limited reachability over closed links."""
    if not s.nodes:
        raise ValueError("connectivity needs at least 1 node")
    adj = _adjacency(s, links)
    all_hops = {n.id: _hops_from(adj, n.id) for n in s.nodes}

    components: list[list[str]] = []
    assigned: set[str] = set()
    for node in s.nodes:
        if node.id in assigned:
            continue
        member_ids = sorted(all_hops[node.id].keys())
        assigned.update(member_ids)
        components.append(member_ids)

    reachable = {
        nid: sorted(other for other, h in hops.items() if other != nid and h <= s.hop_limit)
        for nid, hops in all_hops.items()
    }
    hop_counts = {
        nid: {other: h for other, h in sorted(hops.items()) if other != nid}
        for nid, hops in all_hops.items()
    }
    return ConnectivityReport(components=components, reachable=reachable, hop_counts=hop_counts)


def latency_estimate_s(
    s: Scenario,
    a: str,
    b: str,
    payload_bytes: int = 32,
    forwarding_delay_s: float = DEFAULT_FORWARDING_DELAY_S,
) -> float | None:
    """Minimum-hop latency estimate, or None when b is unreachable from a."""
    if a == b:
        raise ValueError("latency needs two distinct nodes")
    s.node(a)
    s.node(b)
    hops = _hops_from(_adjacency(s), a).get(b)
    if hops is None or hops > s.hop_limit:
        return None
    toa = phy.time_on_air_s(s.preset, payload_bytes)
    return hops * (toa + forwarding_delay_s)


def _range_row(
    s: Scenario, preset: ModemPreset, range_ceiling_m: float
) -> tuple[float | None, bool, int | None]:
    budget = s.power.dbm - phy.sensitivity_dbm(preset, s.radio)
    try:
        reach = propagation.max_range_m(s.path_loss, budget, s.fade_margin_db)
    except ValueError:
        return None, False, None
    clamped = reach > range_ceiling_m
    reported = min(reach, range_ceiling_m)
    return reported, clamped, propagation.density_per_km2(reported)


def plan_summary(s: Scenario, range_ceiling_m: float = DEFAULT_RANGE_CEILING_M) -> dict:
    """Deployment report: regime, range/density table, connectivity overview.

    Pure function of the scenario; key order is fixed so serialised reports
    are golden-file stable.
    """
    links = assess_links(s) if len(s.nodes) >= 2 else []
    conn = connectivity(s)
    isolated = [c[0] for c in conn.components if len(c) == 1]
    reach, clamped, density = _range_row(s, s.preset, range_ceiling_m)
    preset_table = []
    for preset in PRESETS:
        p_reach, p_clamped, p_density = _range_row(s, preset, range_ceiling_m)
        preset_table.append(
            {
                "preset": preset.name,
                "regime": propagation.regime_for(preset),
                "max_range_m": p_reach,
                "terrain_limited": p_clamped,
                "density_nodes_per_km2": p_density,
            }
        )
    return {
        "schema_version": "1",
        "preset": s.preset.name,
        "power_dbm": s.power.dbm,
        "regime": propagation.regime_for(s.preset),
        "fade_margin_db": s.fade_margin_db,
        "hop_limit": s.hop_limit,
        "node_count": len(s.nodes),
        "closed_link_count": sum(1 for l in links if l.closed),
        "component_count": len(conn.components),
        "isolated_nodes": isolated,
        "max_range_m": reach,
        "terrain_limited": clamped,
        "density_nodes_per_km2": density,
        "preset_table": preset_table,
    }


# --- Scenario JSON document ---------------------------------------------


def _require(doc: dict, key: str, kind, field_name: str | None = None):
    field_name = field_name or key
    if key not in doc:
        raise ScenarioError(field_name, "missing required field")
    value = doc[key]
    if kind is float:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
        raise ScenarioError(field_name, "expected a number")
    if not isinstance(value, kind):
        raise ScenarioError(field_name, f"expected {kind.__name__}")
    return value


def scenario_from_dict(doc: dict) -> Scenario:
    """Build a Scenario from its JSON document, naming any offending field."""
    if not isinstance(doc, dict):
        raise ScenarioError("document", "scenario must be a JSON object")
    raw_nodes = _require(doc, "nodes", list)
    if not raw_nodes:
        raise ScenarioError("nodes", "at least one node is required")
    nodes = []
    for i, entry in enumerate(raw_nodes):
        if not isinstance(entry, dict):
            raise ScenarioError(f"nodes[{i}]", "expected object")
        node_id = _require(entry, "id", str, f"nodes[{i}].id")
        try:
            nodes.append(
                Node(
                    id=node_id,
                    x_m=_require(entry, "x_m", float, f"nodes[{i}].x_m"),
                    y_m=_require(entry, "y_m", float, f"nodes[{i}].y_m"),
                    antenna_gain_db=float(entry.get("antenna_gain_db", 0.0)),
                )
            )
        except (TypeError,) as exc:
            raise ScenarioError(f"nodes[{i}]", str(exc)) from None
    try:
        preset = preset_by_name(_require(doc, "preset", str))
    except ValueError as exc:
        raise ScenarioError("preset", str(exc)) from None
    try:
        power = power_by_name(_require(doc, "power", str))
    except ValueError as exc:
        raise ScenarioError("power", str(exc)) from None

    pl_doc = doc.get("path_loss_model", "dense-urban")
    try:
        if isinstance(pl_doc, str):
            path_loss = propagation.model_by_name(pl_doc)
        elif isinstance(pl_doc, dict):
            path_loss = propagation.model_from_dict(pl_doc)
        else:
            raise ValueError("expected model name or object")
    except ValueError as exc:
        raise ScenarioError("path_loss_model", str(exc)) from None

    radio_doc = doc.get("radio_model", "sx1262-default")
    try:
        if isinstance(radio_doc, str):
            if radio_doc != "sx1262-default":
                raise ValueError(f"unknown radio model {radio_doc!r}")
            radio = phy.default_radio_model()
        elif isinstance(radio_doc, dict):
            radio = phy.radio_model_from_dict(radio_doc)
        else:
            raise ValueError("expected model name or object")
    except ValueError as exc:
        raise ScenarioError("radio_model", str(exc)) from None

    fade = float(doc.get("fade_margin_db", 0.0))
    hop_limit = int(doc.get("hop_limit", DEFAULT_HOP_LIMIT))
    return Scenario(
        nodes=nodes,
        preset=preset,
        power=power,
        path_loss=path_loss,
        radio=radio,
        fade_margin_db=fade,
        hop_limit=hop_limit,
    )


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "schema_version": "1",
        "nodes": [
            {"id": n.id, "x_m": n.x_m, "y_m": n.y_m, "antenna_gain_db": n.antenna_gain_db}
            for n in s.nodes
        ],
        "preset": s.preset.name,
        "power": s.power.label,
        "path_loss_model": (
            s.path_loss.name if s.path_loss.name else propagation.model_to_dict(s.path_loss)
        ),
        "radio_model": s.radio.name if s.radio.name == "sx1262-default" else phy.radio_model_to_dict(s.radio),
        "fade_margin_db": s.fade_margin_db,
        "hop_limit": s.hop_limit,
    }


def load_scenario(path: str) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return scenario_from_dict(json.load(fh))


def bundled_demo_scenario_path() -> str:
    """Path of the dense-urban demo scenario shipped with the package."""
    return str(resources.files("meshlink.data").joinpath("dense-urban-demo.json"))
