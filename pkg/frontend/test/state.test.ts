import { describe, expect, it } from "vitest";

import {
    defaultView,
    fromScenarioDocument,
    nextNodeId,
    toScenarioDocument,
    validateScenarioDocument,
} from "../src/state.js";
import type { ScenarioDocument } from "../src/types.js";

const demoDoc: ScenarioDocument = {
    schema_version: "1",
    nodes: [
        { id: "hub", x_m: 0, y_m: 0, antenna_gain_db: 0 },
        { id: "tower", x_m: 4800, y_m: 0, antenna_gain_db: 0 },
    ],
    preset: "LongSlow",
    power: "Max",
    path_loss_model: "dense-urban",
    radio_model: "sx1262-default",
    fade_margin_db: 10,
    hop_limit: 3,
};

describe("scenario state", () => {
    it("round-trips a document losslessly, dropping view state", () => {
        const view = { ...defaultView(), zoomPxPerM: 0.5, panX: 55, selectedNodeId: "hub" };
        const state = fromScenarioDocument(demoDoc, view);
        const out = toScenarioDocument(state);
        expect(out).toEqual(demoDoc);
        expect(JSON.stringify(out)).not.toContain("zoom");
        expect(JSON.stringify(out)).not.toContain("selected");
    });

    it("view state does not affect the serialised document", () => {
        const a = toScenarioDocument(fromScenarioDocument(demoDoc, defaultView()));
        const b = toScenarioDocument(
            fromScenarioDocument(demoDoc, { zoomPxPerM: 3, panX: -10, panY: 99, selectedNodeId: "x" }),
        );
        expect(a).toEqual(b);
    });

    it("defaults missing antenna gain to zero", () => {
        const doc = JSON.parse(JSON.stringify(demoDoc)) as ScenarioDocument;
        delete (doc.nodes[0] as Partial<(typeof doc.nodes)[0]>).antenna_gain_db;
        const state = fromScenarioDocument(doc);
        expect(state.nodes[0].antenna_gain_db).toBe(0);
    });

    it("allocates fresh node ids", () => {
        expect(nextNodeId([])).toBe("n1");
        expect(nextNodeId([{ id: "n1", x_m: 0, y_m: 0, antenna_gain_db: 0 }])).toBe("n2");
        expect(
            nextNodeId([
                { id: "n1", x_m: 0, y_m: 0, antenna_gain_db: 0 },
                { id: "n3", x_m: 0, y_m: 0, antenna_gain_db: 0 },
            ]),
        ).toBe("n2");
    });
});

describe("scenario validation", () => {
    it("accepts the demo document", () => {
        const result = validateScenarioDocument(demoDoc, ["LongSlow", "ShortTurbo"]);
        expect(result.ok).toBe(true);
    });

    it("rejects non-objects", () => {
        const result = validateScenarioDocument([1, 2]);
        expect(result).toMatchObject({ ok: false, field: "document" });
    });

    it("rejects empty node lists", () => {
        const result = validateScenarioDocument({ ...demoDoc, nodes: [] });
        expect(result).toMatchObject({ ok: false, field: "nodes" });
    });

    it("names the offending node field", () => {
        const doc = JSON.parse(JSON.stringify(demoDoc));
        doc.nodes[1].x_m = "far away";
        const result = validateScenarioDocument(doc);
        expect(result).toMatchObject({ ok: false, field: "nodes[1].x_m" });
    });

    it("rejects duplicate ids with the id in the message", () => {
        const doc = JSON.parse(JSON.stringify(demoDoc));
        doc.nodes.push({ ...doc.nodes[0] });
        const result = validateScenarioDocument(doc);
        expect(result.ok).toBe(false);
        if (!result.ok) {
            expect(result.field).toBe("nodes[2].id");
            expect(result.message).toContain("hub");
        }
    });

    it("rejects unknown presets against the fetched catalog", () => {
        const result = validateScenarioDocument(
            { ...demoDoc, preset: "LongTurbo" },
            ["LongSlow", "LongFast"],
        );
        expect(result).toMatchObject({ ok: false, field: "preset" });
        if (!result.ok) {
            expect(result.message).toContain("LongTurbo");
        }
    });

    it("rejects bad hop limits and fade margins", () => {
        expect(validateScenarioDocument({ ...demoDoc, hop_limit: 0 })).toMatchObject({
            ok: false,
            field: "hop_limit",
        });
        expect(validateScenarioDocument({ ...demoDoc, fade_margin_db: -2 })).toMatchObject({
            ok: false,
            field: "fade_margin_db",
        });
    });
});
