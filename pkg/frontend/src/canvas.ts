// Canvas rendering and pointer interaction for the node map.

import type { ViewState } from "./state.js";
import type { AssessResponse, NodeDocument } from "./types.js";

const NODE_RADIUS_PX = 9;
const STRONG_MARGIN_DB = 10;
const CANDIDATE_RANGE_FACTOR = 1.5;

export interface CanvasCallbacks {
    onNodeMoved: (id: string, x_m: number, y_m: number) => void;
    onSelect: (id: string | null) => void;
    onAddNode: (x_m: number, y_m: number) => void;
    onViewChanged: () => void;
}

interface DragState {
    kind: "node" | "pan";
    nodeId?: string;
    lastX: number;
    lastY: number;
    moved: boolean;
}

export class MapCanvas {
    private ctx: CanvasRenderingContext2D;
    private drag: DragState | null = null;
    private nodes: NodeDocument[] = [];
    private assessment: AssessResponse | null = null;
    private stale = false;

    constructor(
        private canvas: HTMLCanvasElement,
        private view: ViewState,
        private callbacks: CanvasCallbacks,
    ) {
        this.ctx = canvas.getContext("2d")!;
        canvas.addEventListener("pointerdown", (e) => this.onPointerDown(e));
        canvas.addEventListener("pointermove", (e) => this.onPointerMove(e));
        canvas.addEventListener("pointerup", (e) => this.onPointerUp(e));
        canvas.addEventListener("wheel", (e) => this.onWheel(e), { passive: false });
        canvas.addEventListener("dblclick", (e) => this.onDoubleClick(e));
    }

    // --- coordinate transforms ---------------------------------------

    private toScreen(x_m: number, y_m: number): [number, number] {
        const cx = this.canvas.width / 2 + this.view.panX;
        const cy = this.canvas.height / 2 + this.view.panY;
        return [cx + x_m * this.view.zoomPxPerM, cy - y_m * this.view.zoomPxPerM];
    }

    private toWorld(px: number, py: number): [number, number] {
        const cx = this.canvas.width / 2 + this.view.panX;
        const cy = this.canvas.height / 2 + this.view.panY;
        return [(px - cx) / this.view.zoomPxPerM, (cy - py) / this.view.zoomPxPerM];
    }

    private nodeAt(px: number, py: number): NodeDocument | null {
        for (let i = this.nodes.length - 1; i >= 0; i--) {
            const [nx, ny] = this.toScreen(this.nodes[i].x_m, this.nodes[i].y_m);
            if (Math.hypot(px - nx, py - ny) <= NODE_RADIUS_PX + 3) {
                return this.nodes[i];
            }
        }
        return null;
    }

    private eventPoint(e: MouseEvent): [number, number] {
        const rect = this.canvas.getBoundingClientRect();
        return [e.clientX - rect.left, e.clientY - rect.top];
    }

    // --- interactions --------------------------------------------------

    private onPointerDown(e: PointerEvent): void {
        const [px, py] = this.eventPoint(e);
        const hit = this.nodeAt(px, py);
        this.canvas.setPointerCapture(e.pointerId);
        if (hit) {
            this.drag = { kind: "node", nodeId: hit.id, lastX: px, lastY: py, moved: false };
            this.callbacks.onSelect(hit.id);
        } else {
            this.drag = { kind: "pan", lastX: px, lastY: py, moved: false };
        }
    }

    private onPointerMove(e: PointerEvent): void {
        if (!this.drag) {
            return;
        }
        const [px, py] = this.eventPoint(e);
        const dx = px - this.drag.lastX;
        const dy = py - this.drag.lastY;
        if (dx === 0 && dy === 0) {
            return;
        }
        this.drag.moved = true;
        this.drag.lastX = px;
        this.drag.lastY = py;
        if (this.drag.kind === "pan") {
            this.view.panX += dx;
            this.view.panY += dy;
        } else {
            const node = this.nodes.find((n) => n.id === this.drag!.nodeId);
            if (node) {
                node.x_m += dx / this.view.zoomPxPerM;
                node.y_m -= dy / this.view.zoomPxPerM;
                this.stale = true; // geometry moved; edges re-evaluated on drop
            }
        }
        this.redraw();
    }

    private onPointerUp(e: PointerEvent): void {
        if (!this.drag) {
            return;
        }
        const drag = this.drag;
        this.drag = null;
        this.canvas.releasePointerCapture(e.pointerId);
        if (drag.kind === "node" && drag.moved && drag.nodeId) {
            const node = this.nodes.find((n) => n.id === drag.nodeId);
            if (node) {
                this.callbacks.onNodeMoved(node.id, node.x_m, node.y_m);
            }
        } else if (drag.kind === "pan" && !drag.moved) {
            this.callbacks.onSelect(null);
            this.redraw();
        } else if (drag.kind === "pan") {
            this.callbacks.onViewChanged();
        }
    }

    private onWheel(e: WheelEvent): void {
        e.preventDefault();
        const factor = e.deltaY < 0 ? 1.15 : 1 / 1.15;
        const next = Math.min(20, Math.max(0.005, this.view.zoomPxPerM * factor));
        const [px, py] = this.eventPoint(e);
        const [wx, wy] = this.toWorld(px, py);
        this.view.zoomPxPerM = next;
        // keep the point under the cursor fixed while zooming
        const [nx, ny] = this.toScreen(wx, wy);
        this.view.panX += px - nx;
        this.view.panY += py - ny;
        this.callbacks.onViewChanged();
        this.redraw();
    }

    private onDoubleClick(e: MouseEvent): void {
        const [px, py] = this.eventPoint(e);
        if (this.nodeAt(px, py)) {
            return;
        }
        const [wx, wy] = this.toWorld(px, py);
        this.callbacks.onAddNode(Math.round(wx), Math.round(wy));
    }

    // --- rendering -------------------------------------------------------

    update(nodes: NodeDocument[], assessment: AssessResponse | null, stale = false): void {
        this.nodes = nodes;
        this.assessment = assessment;
        this.stale = stale;
        this.redraw();
    }

    redraw(): void {
        const { ctx, canvas } = this;
        ctx.clearRect(0, 0, canvas.width, canvas.height);
        this.drawGrid();
        if (this.assessment) {
            this.drawEdges();
        }
        this.drawNodes();
        if (this.nodes.length === 0) {
            ctx.fillStyle = "#888";
            ctx.font = "15px sans-serif";
            ctx.textAlign = "center";
            ctx.fillText("double-click to add nodes", canvas.width / 2, canvas.height / 2);
            ctx.textAlign = "left";
        }
    }

    private drawGrid(): void {
        const { ctx, canvas } = this;
        const spacingM = gridSpacingM(this.view.zoomPxPerM);
        const [left, top] = this.toWorld(0, 0);
        const [right, bottom] = this.toWorld(canvas.width, canvas.height);
        ctx.strokeStyle = "#eee";
        ctx.lineWidth = 1;
        for (let x = Math.floor(left / spacingM) * spacingM; x <= right; x += spacingM) {
            const [sx] = this.toScreen(x, 0);
            ctx.beginPath();
            ctx.moveTo(sx, 0);
            ctx.lineTo(sx, canvas.height);
            ctx.stroke();
        }
        for (let y = Math.floor(bottom / spacingM) * spacingM; y <= top; y += spacingM) {
            const [, sy] = this.toScreen(0, y);
            ctx.beginPath();
            ctx.moveTo(0, sy);
            ctx.lineTo(canvas.width, sy);
            ctx.stroke();
        }
        ctx.fillStyle = "#aaa";
        ctx.font = "11px sans-serif";
        ctx.fillText(`grid ${spacingM >= 1000 ? spacingM / 1000 + " km" : spacingM + " m"}`, 8, canvas.height - 8);
    }

    private drawEdges(): void {
        const { ctx } = this;
        const byId = new Map(this.nodes.map((n) => [n.id, n]));
        const maxRange = this.assessment!.plan_summary.max_range_m;
        for (const link of this.assessment!.links) {
            const a = byId.get(link.a);
            const b = byId.get(link.b);
            if (!a || !b) {
                continue; // nodes changed since this assessment
            }
            const [ax, ay] = this.toScreen(a.x_m, a.y_m);
            const [bx, by] = this.toScreen(b.x_m, b.y_m);
            ctx.beginPath();
            ctx.moveTo(ax, ay);
            ctx.lineTo(bx, by);
            if (link.closed) {
                ctx.setLineDash(this.stale ? [3, 3] : []);
                ctx.strokeStyle = link.margin_db >= STRONG_MARGIN_DB ? "#2e8b57" : "#e08020";
                ctx.lineWidth = 2;
            } else if (maxRange !== null && link.distance_m <= CANDIDATE_RANGE_FACTOR * maxRange) {
                ctx.setLineDash([5, 5]);
                ctx.strokeStyle = "#bbb";
                ctx.lineWidth = 1;
            } else {
                continue;
            }
            ctx.stroke();
            ctx.setLineDash([]);
        }
    }

    private drawNodes(): void {
        const { ctx } = this;
        const isolated = new Set(this.assessment?.plan_summary.isolated_nodes ?? []);
        for (const node of this.nodes) {
            const [x, y] = this.toScreen(node.x_m, node.y_m);
            ctx.beginPath();
            ctx.arc(x, y, NODE_RADIUS_PX, 0, 2 * Math.PI);
            ctx.fillStyle = isolated.has(node.id) ? "#d64545" : "#3b6ea5";
            ctx.fill();
            if (node.id === this.view.selectedNodeId) {
                ctx.beginPath();
                ctx.arc(x, y, NODE_RADIUS_PX + 4, 0, 2 * Math.PI);
                ctx.strokeStyle = "#222";
                ctx.lineWidth = 2;
                ctx.stroke();
            }
            ctx.fillStyle = "#222";
            ctx.font = "12px sans-serif";
            ctx.fillText(node.id, x + NODE_RADIUS_PX + 4, y - 4);
            if (isolated.has(node.id)) {
                ctx.fillStyle = "#d64545";
                ctx.fillText("isolated", x + NODE_RADIUS_PX + 4, y + 12);
            }
        }
    }
}

export function gridSpacingM(zoomPxPerM: number): number {
    // pick a 1/2/5 decade so grid lines sit 40-200 px apart
    const targetPx = 80;
    const raw = targetPx / zoomPxPerM;
    const decade = Math.pow(10, Math.floor(Math.log10(raw)));
    for (const mult of [1, 2, 5, 10]) {
        if (decade * mult >= raw) {
            return decade * mult;
        }
    }
    return decade * 10;
}
