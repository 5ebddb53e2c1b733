// View model for the readout panel. Every value is a formatted copy of an
// /assess response field; no numbers are computed locally.

import { formatCount, formatDbm, formatDensity, formatRangeM } from "./format.js";
import type { AssessResponse } from "./types.js";

export interface PanelModel {
    empty: boolean;
    regime: string;
    powerDbm: string;
    maxRangeM: string;
    terrainLimited: boolean;
    densityPerKm2: string;
    nodeCount: string;
    closedLinkCount: string;
    componentCount: string;
    isolatedNodes: string[];
    fadeMarginDb: string;
    hopLimit: string;
}

export const EMPTY_PANEL: PanelModel = {
    empty: true,
    regime: "",
    powerDbm: "",
    maxRangeM: "",
    terrainLimited: false,
    densityPerKm2: "",
    nodeCount: "0",
    closedLinkCount: "",
    componentCount: "",
    isolatedNodes: [],
    fadeMarginDb: "",
    hopLimit: "",
};

export function buildPanelModel(response: AssessResponse | null): PanelModel {
    if (response === null) {
        return EMPTY_PANEL;
    }
    const summary = response.plan_summary;
    return {
        empty: false,
        regime: summary.regime,
        powerDbm: formatDbm(summary.power_dbm),
        maxRangeM: formatRangeM(summary.max_range_m),
        terrainLimited: summary.terrain_limited,
        densityPerKm2: formatDensity(summary.density_nodes_per_km2),
        nodeCount: formatCount(summary.node_count),
        closedLinkCount: formatCount(summary.closed_link_count),
        componentCount: formatCount(summary.component_count),
        isolatedNodes: [...summary.isolated_nodes],
        fadeMarginDb: formatDbm(summary.fade_margin_db),
        hopLimit: formatCount(summary.hop_limit),
    };
}
