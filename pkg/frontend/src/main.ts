// Entry point: wires the canvas, controls and readout panel to the API.

import { ApiClient, ApiRequestError } from "./api.js";
import { MapCanvas } from "./canvas.js";
import { formatDistanceM, formatMarginDb } from "./format.js";
import { buildPanelModel } from "./panel.js";
import { AssessScheduler } from "./scheduler.js";
import {
    UiScenarioState,
    defaultState,
    fromScenarioDocument,
    nextNodeId,
    toScenarioDocument,
    validateScenarioDocument,
} from "./state.js";
import type { AssessResponse, ScenarioDocument } from "./types.js";

const api = new ApiClient("");
const state: UiScenarioState = defaultState();
let lastAssessment: AssessResponse | null = null;
let knownPresets: string[] = [];

function el<T extends HTMLElement>(id: string): T {
    return document.getElementById(id) as T;
}

const banner = el<HTMLDivElement>("banner");
const panelRoot = el<HTMLDivElement>("panel");
const linksRoot = el<HTMLDivElement>("links");
const nodeEditor = el<HTMLDivElement>("node-editor");

function showBanner(text: string): void {
    banner.textContent = text;
    banner.style.display = "block";
}

function clearBanner(): void {
    banner.style.display = "none";
}

const scheduler = new AssessScheduler<ScenarioDocument, AssessResponse>(
    {
        send: (doc) => api.assess(doc),
        onResult: (_doc, result) => {
            lastAssessment = result;
            clearBanner();
            refresh(false);
        },
        onError: (error) => {
            // non-blocking: keep the last assessment on screen
            const reason =
                error instanceof ApiRequestError
                    ? `${error.field ? error.field + ": " : ""}${error.message}`
                    : "service unreachable";
            showBanner(`assessment failed - ${reason} (showing last result)`);
            refresh(true);
        },
    },
    150,
);

function requestAssessment(): void {
    if (state.nodes.length === 0) {
        lastAssessment = null;
        refresh(false);
        return;
    }
    refresh(true);
    scheduler.request(toScenarioDocument(state));
}

const canvas = new MapCanvas(el<HTMLCanvasElement>("map"), state.view, {
    onNodeMoved: () => requestAssessment(),
    onSelect: (id) => {
        state.view.selectedNodeId = id;
        renderNodeEditor();
        canvas.redraw();
    },
    onAddNode: (x, y) => {
        state.nodes.push({ id: nextNodeId(state.nodes), x_m: x, y_m: y, antenna_gain_db: 0 });
        requestAssessment();
    },
    onViewChanged: () => undefined,
});

function renderPanel(): void {
    const model = buildPanelModel(lastAssessment);
    if (state.nodes.length === 0) {
        panelRoot.innerHTML = `<p class="hint">add nodes to assess the mesh</p>`;
        linksRoot.innerHTML = "";
        return;
    }
    if (model.empty) {
        panelRoot.innerHTML = `<p class="hint">waiting for assessment...</p>`;
        return;
    }
    const rows: [string, string][] = [
        ["regime", model.regime],
        ["tx power (dBm)", model.powerDbm],
        ["max range (m)", model.maxRangeM + (model.terrainLimited ? " *" : "")],
        ["density (nodes/km2)", model.densityPerKm2],
        ["nodes", model.nodeCount],
        ["closed links", model.closedLinkCount],
        ["components", model.componentCount],
        ["isolated", model.isolatedNodes.length ? model.isolatedNodes.join(", ") : "none"],
        ["fade margin (dB)", model.fadeMarginDb],
        ["hop limit", model.hopLimit],
    ];
    panelRoot.innerHTML =
        rows
            .map(
                ([label, value]) =>
                    `<div class="row"><span class="label">${label}</span><span class="value">${value}</span></div>`,
            )
            .join("") + (model.terrainLimited ? `<p class="hint">* terrain-limited ceiling</p>` : "");
    if (lastAssessment) {
        const closed = lastAssessment.links.filter((l) => l.closed);
        linksRoot.innerHTML =
            `<h3>closed links</h3>` +
            (closed.length
                ? closed
                      .map(
                          (l) =>
                              `<div class="row"><span class="label">${l.a} - ${l.b}</span>` +
                              `<span class="value">${formatDistanceM(l.distance_m)} m / ${formatMarginDb(l.margin_db)} dB</span></div>`,
                      )
                      .join("")
                : `<p class="hint">none</p>`);
    }
}

function renderNodeEditor(): void {
    const id = state.view.selectedNodeId;
    const node = state.nodes.find((n) => n.id === id);
    if (!node) {
        nodeEditor.innerHTML = `<p class="hint">select a node to edit</p>`;
        return;
    }
    nodeEditor.innerHTML = `
        <h3>node ${node.id}</h3>
        <label>x (m) <input id="node-x" type="number" value="${node.x_m}"></label>
        <label>y (m) <input id="node-y" type="number" value="${node.y_m}"></label>
        <label>antenna gain (dB) <input id="node-gain" type="number" step="0.5" value="${node.antenna_gain_db}"></label>
        <button id="node-delete">delete node</button>`;
    el<HTMLInputElement>("node-x").onchange = (e) => {
        node.x_m = Number((e.target as HTMLInputElement).value);
        requestAssessment();
    };
    el<HTMLInputElement>("node-y").onchange = (e) => {
        node.y_m = Number((e.target as HTMLInputElement).value);
        requestAssessment();
    };
    el<HTMLInputElement>("node-gain").onchange = (e) => {
        node.antenna_gain_db = Number((e.target as HTMLInputElement).value);
        requestAssessment();
    };
    el<HTMLButtonElement>("node-delete").onclick = () => {
        state.nodes = state.nodes.filter((n) => n.id !== node.id);
        state.view.selectedNodeId = null;
        renderNodeEditor();
        requestAssessment();
    };
}

function refresh(stale: boolean): void {
    canvas.update(state.nodes, lastAssessment, stale);
    renderPanel();
}

function bindControls(): void {
    const preset = el<HTMLSelectElement>("preset");
    const power = el<HTMLSelectElement>("power");
    const model = el<HTMLSelectElement>("path-loss");
    const fade = el<HTMLInputElement>("fade-margin");
    const hops = el<HTMLInputElement>("hop-limit");
    preset.onchange = () => {
        state.preset = preset.value;
        requestAssessment();
    };
    power.onchange = () => {
        state.power = power.value;
        requestAssessment();
    };
    model.onchange = () => {
        state.pathLossModel = model.value;
        requestAssessment();
    };
    fade.onchange = () => {
        state.fadeMarginDb = Math.max(0, Number(fade.value));
        fade.value = String(state.fadeMarginDb);
        requestAssessment();
    };
    hops.onchange = () => {
        state.hopLimit = Math.max(1, Math.round(Number(hops.value)));
        hops.value = String(state.hopLimit);
        requestAssessment();
    };

    el<HTMLButtonElement>("export").onclick = () => {
        const doc = toScenarioDocument(state);
        const blob = new Blob([JSON.stringify(doc, null, 2) + "\n"], { type: "application/json" });
        const link = document.createElement("a");
        link.href = URL.createObjectURL(blob);
        link.download = "scenario.json";
        link.click();
        URL.revokeObjectURL(link.href);
    };
    const importInput = el<HTMLInputElement>("import-file");
    el<HTMLButtonElement>("import").onclick = () => importInput.click();
    importInput.onchange = async () => {
        const file = importInput.files?.[0];
        importInput.value = "";
        if (!file) {
            return;
        }
        let raw: unknown;
        try {
            raw = JSON.parse(await file.text());
        } catch {
            showBanner("import rejected - file is not valid JSON");
            return;
        }
        const checked = validateScenarioDocument(raw, knownPresets);
        if (!checked.ok) {
            showBanner(`import rejected - ${checked.field}: ${checked.message}`);
            return;
        }
        clearBanner();
        const imported = fromScenarioDocument(checked.doc, state.view);
        state.nodes = imported.nodes;
        state.preset = imported.preset;
        state.power = imported.power;
        state.pathLossModel = imported.pathLossModel;
        state.radioModel = imported.radioModel;
        state.fadeMarginDb = imported.fadeMarginDb;
        state.hopLimit = imported.hopLimit;
        syncControls();
        requestAssessment();
    };
}

function syncControls(): void {
    el<HTMLSelectElement>("preset").value = state.preset;
    el<HTMLSelectElement>("power").value = state.power;
    if (typeof state.pathLossModel === "string") {
        el<HTMLSelectElement>("path-loss").value = state.pathLossModel;
    }
    el<HTMLInputElement>("fade-margin").value = String(state.fadeMarginDb);
    el<HTMLInputElement>("hop-limit").value = String(state.hopLimit);
}

async function bootstrap(): Promise<void> {
    bindControls();
    refresh(false);
    try {
        const [presets, models] = await Promise.all([api.getPresets(), api.getModels()]);
        knownPresets = presets.map((p) => p.name);
        const presetSelect = el<HTMLSelectElement>("preset");
        presetSelect.innerHTML = presets
            .map(
                (p) =>
                    `<option value="${p.name}">${p.name} (SF${p.sf}/${p.bw_hz / 1000}kHz)</option>`,
            )
            .join("");
        const modelSelect = el<HTMLSelectElement>("path-loss");
        modelSelect.innerHTML = Object.keys(models.path_loss_models)
            .map((name) => `<option value="${name}">${name}</option>`)
            .join("");
        syncControls();
        clearBanner();
    } catch {
        showBanner("service unreachable - start it with: meshlink serve --ui-dir frontend");
    }
}

void bootstrap();
