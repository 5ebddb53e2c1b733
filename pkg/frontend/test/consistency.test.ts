// Backend consistency: spawns the Python service, assesses the bundled demo
// scenario, and checks that every numeric string the panel would display is
// exactly the fixed-precision rendering of the corresponding response field,
// and that toggling ShortTurbo <-> LongSlow flips the demo's long edge.

import { spawn, type ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import path from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { formatCount, formatDbm, formatDensity, formatRangeM } from "../src/format.js";
import { buildPanelModel } from "../src/panel.js";
import { validateScenarioDocument } from "../src/state.js";
import type { AssessResponse, ScenarioDocument } from "../src/types.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const repoRoot = path.resolve(here, "..", "..");
const demoPath = path.join(repoRoot, "src", "meshlink", "data", "dense-urban-demo.json");

let server: ChildProcess;
let api: ApiClient;

function loadDemo(): ScenarioDocument {
    return JSON.parse(readFileSync(demoPath, "utf-8")) as ScenarioDocument;
}

beforeAll(async () => {
    server = spawn("python3", ["-m", "meshlink", "serve", "--port", "0"], {
        cwd: repoRoot,
        stdio: ["ignore", "pipe", "pipe"],
    });
    const port = await new Promise<number>((resolve, reject) => {
        const timeout = setTimeout(() => reject(new Error("service did not start")), 15000);
        let buffer = "";
        server.stdout!.on("data", (chunk: Buffer) => {
            buffer += chunk.toString();
            const match = buffer.match(/listening on http:\/\/[^:]+:(\d+)/);
            if (match) {
                clearTimeout(timeout);
                resolve(Number(match[1]));
            }
        });
        server.on("exit", () => reject(new Error("service exited early")));
    });
    api = new ApiClient(`http://127.0.0.1:${port}`);
}, 20000);

afterAll(() => {
    server?.kill();
});

describe("panel consistency with POST /assess", () => {
    let response: AssessResponse;

    beforeAll(async () => {
        response = await api.assess(loadDemo());
    });

    it("every panel value is the formatted copy of a response field", () => {
        const panel = buildPanelModel(response);
        const summary = response.plan_summary;
        expect(panel.regime).toBe(summary.regime);
        expect(panel.powerDbm).toBe(formatDbm(summary.power_dbm));
        expect(panel.maxRangeM).toBe(formatRangeM(summary.max_range_m));
        expect(panel.terrainLimited).toBe(summary.terrain_limited);
        expect(panel.densityPerKm2).toBe(formatDensity(summary.density_nodes_per_km2));
        expect(panel.nodeCount).toBe(formatCount(summary.node_count));
        expect(panel.closedLinkCount).toBe(formatCount(summary.closed_link_count));
        expect(panel.componentCount).toBe(formatCount(summary.component_count));
        expect(panel.isolatedNodes).toEqual(summary.isolated_nodes);
        expect(panel.fadeMarginDb).toBe(formatDbm(summary.fade_margin_db));
        expect(panel.hopLimit).toBe(formatCount(summary.hop_limit));
    });

    it("demo values are concrete and non-empty", () => {
        const panel = buildPanelModel(response);
        expect(panel.regime).toBe("MaximumRange");
        expect(panel.nodeCount).toBe("4");
        expect(Number(panel.closedLinkCount)).toBeGreaterThan(0);
        expect(panel.maxRangeM).toMatch(/^\d+\.\d$/);
        expect(panel.densityPerKm2).toMatch(/^\d+$/);
    });
});

describe("preset toggle on the demo's long edge", () => {
    function longEdge(response: AssessResponse) {
        const edge = response.links.find(
            (l) => (l.a === "hub" && l.b === "tower") || (l.a === "tower" && l.b === "hub"),
        );
        expect(edge).toBeDefined();
        return edge!;
    }

    it("LongSlow closes hub-tower, ShortTurbo opens it", async () => {
        const slowDoc = loadDemo();
        slowDoc.preset = "LongSlow";
        const fastDoc = loadDemo();
        fastDoc.preset = "ShortTurbo";
        const [slow, fast] = await Promise.all([api.assess(slowDoc), api.assess(fastDoc)]);
        expect(longEdge(slow).closed).toBe(true);
        expect(longEdge(fast).closed).toBe(false);
        // the tower drops out of the mesh entirely under ShortTurbo
        expect(fast.plan_summary.isolated_nodes).toContain("tower");
        expect(slow.plan_summary.isolated_nodes).not.toContain("tower");
        expect(fast.plan_summary.component_count).toBeGreaterThan(
            slow.plan_summary.component_count,
        );
    });
});

describe("scenario io against the bundled demo", () => {
    it("the bundled demo imports cleanly and round-trips through the server", async () => {
        const presets = await api.getPresets();
        const names = presets.map((p) => p.name);
        const checked = validateScenarioDocument(loadDemo(), names);
        expect(checked.ok).toBe(true);
        if (checked.ok) {
            const response = await api.assess(checked.doc);
            expect(response.plan_summary.node_count).toBe(4);
        }
    });

    it("field errors from the server match the client's validation field names", async () => {
        const doc = loadDemo();
        doc.nodes = [];
        const local = validateScenarioDocument(doc);
        expect(local).toMatchObject({ ok: false, field: "nodes" });
        await expect(api.assess(doc)).rejects.toMatchObject({ field: "nodes" });
    });
});
