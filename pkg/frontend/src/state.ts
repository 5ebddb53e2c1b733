// Scenario state held by the UI: the scenario document plus view-only
// extras (zoom/pan/selection). Serialising drops the view state so the
// result is exactly what POST /assess accepts.

import type { NodeDocument, ScenarioDocument } from "./types.js";

export interface ViewState {
    zoomPxPerM: number;
    panX: number;
    panY: number;
    selectedNodeId: string | null;
}

export interface UiScenarioState {
    nodes: NodeDocument[];
    preset: string;
    power: string;
    pathLossModel: string | Record<string, unknown>;
    radioModel?: string | Record<string, unknown>;
    fadeMarginDb: number;
    hopLimit: number;
    view: ViewState;
}

export function defaultView(): ViewState {
    return { zoomPxPerM: 0.12, panX: 0, panY: 0, selectedNodeId: null };
}

export function defaultState(): UiScenarioState {
    return {
        nodes: [],
        preset: "LongFast",
        power: "Max",
        pathLossModel: "dense-urban",
        fadeMarginDb: 10,
        hopLimit: 3,
        view: defaultView(),
    };
}

export function toScenarioDocument(state: UiScenarioState): ScenarioDocument {
    const doc: ScenarioDocument = {
        schema_version: "1",
        nodes: state.nodes.map((n) => ({
            id: n.id,
            x_m: n.x_m,
            y_m: n.y_m,
            antenna_gain_db: n.antenna_gain_db,
        })),
        preset: state.preset,
        power: state.power,
        path_loss_model: state.pathLossModel,
        fade_margin_db: state.fadeMarginDb,
        hop_limit: state.hopLimit,
    };
    if (state.radioModel !== undefined) {
        doc.radio_model = state.radioModel;
    }
    return doc;
}

export function fromScenarioDocument(doc: ScenarioDocument, view?: ViewState): UiScenarioState {
    return {
        nodes: doc.nodes.map((n) => ({
            id: n.id,
            x_m: n.x_m,
            y_m: n.y_m,
            antenna_gain_db: n.antenna_gain_db ?? 0,
        })),
        preset: doc.preset,
        power: doc.power,
        pathLossModel: doc.path_loss_model,
        radioModel: doc.radio_model,
        fadeMarginDb: doc.fade_margin_db,
        hopLimit: doc.hop_limit,
        view: view ?? defaultView(),
    };
}

export type ValidationResult =
    | { ok: true; doc: ScenarioDocument }
    | { ok: false; field: string; message: string };

function fail(field: string, message: string): ValidationResult {
    return { ok: false, field, message };
}

function isFiniteNumber(value: unknown): value is number {
    return typeof value === "number" && Number.isFinite(value);
}

/** Structural validation of an imported document; imports are atomic, so the
 *  caller only replaces its state when this returns ok. */
export function validateScenarioDocument(
    raw: unknown,
    knownPresets?: string[],
): ValidationResult {
    if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
        return fail("document", "scenario must be a JSON object");
    }
    const doc = raw as Record<string, unknown>;
    if (!Array.isArray(doc.nodes)) {
        return fail("nodes", "expected an array of nodes");
    }
    if (doc.nodes.length === 0) {
        return fail("nodes", "at least one node is required");
    }
    const ids = new Set<string>();
    for (let i = 0; i < doc.nodes.length; i++) {
        const node = doc.nodes[i] as Record<string, unknown>;
        if (typeof node !== "object" || node === null) {
            return fail(`nodes[${i}]`, "expected an object");
        }
        if (typeof node.id !== "string" || node.id === "") {
            return fail(`nodes[${i}].id`, "expected a non-empty string");
        }
        if (ids.has(node.id)) {
            return fail(`nodes[${i}].id`, `duplicate node id '${node.id}'`);
        }
        ids.add(node.id);
        for (const key of ["x_m", "y_m"]) {
            if (!isFiniteNumber(node[key])) {
                return fail(`nodes[${i}].${key}`, "expected a finite number");
            }
        }
        if (node.antenna_gain_db !== undefined && !isFiniteNumber(node.antenna_gain_db)) {
            return fail(`nodes[${i}].antenna_gain_db`, "expected a finite number");
        }
    }
    if (typeof doc.preset !== "string") {
        return fail("preset", "expected a preset name");
    }
    if (knownPresets && !knownPresets.includes(doc.preset)) {
        return fail("preset", `unknown preset '${doc.preset}'`);
    }
    if (typeof doc.power !== "string") {
        return fail("power", "expected a power level name");
    }
    const pathLoss = doc.path_loss_model ?? "dense-urban";
    if (typeof pathLoss !== "string" && (typeof pathLoss !== "object" || pathLoss === null)) {
        return fail("path_loss_model", "expected a model name or object");
    }
    if (doc.fade_margin_db !== undefined && !isFiniteNumber(doc.fade_margin_db)) {
        return fail("fade_margin_db", "expected a finite number");
    }
    if ((doc.fade_margin_db as number) < 0) {
        return fail("fade_margin_db", "must be >= 0");
    }
    if (doc.hop_limit !== undefined) {
        if (!isFiniteNumber(doc.hop_limit) || !Number.isInteger(doc.hop_limit)) {
            return fail("hop_limit", "expected an integer");
        }
        if (doc.hop_limit < 1) {
            return fail("hop_limit", "must be >= 1");
        }
    }
    const nodes = (doc.nodes as NodeDocument[]).map((n) => ({
        id: n.id,
        x_m: n.x_m,
        y_m: n.y_m,
        antenna_gain_db: n.antenna_gain_db ?? 0,
    }));
    return {
        ok: true,
        doc: {
            schema_version: "1",
            nodes,
            preset: doc.preset,
            power: doc.power,
            path_loss_model: pathLoss as ScenarioDocument["path_loss_model"],
            radio_model: doc.radio_model as ScenarioDocument["radio_model"],
            fade_margin_db: (doc.fade_margin_db as number) ?? 0,
            hop_limit: (doc.hop_limit as number) ?? 3,
        },
    };
}

export function nextNodeId(nodes: NodeDocument[]): string {
    const taken = new Set(nodes.map((n) => n.id));
    let i = 1;
    while (taken.has(`n${i}`)) {
        i++;
    }
    return `n${i}`;
}
