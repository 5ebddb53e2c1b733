// Wire types for the meshlink HTTP API (schema_version 1).

export interface NodeDocument {
    id: string;
    x_m: number;
    y_m: number;
    antenna_gain_db: number;
}

export interface ScenarioDocument {
    schema_version?: string;
    nodes: NodeDocument[];
    preset: string;
    power: string;
    path_loss_model: string | Record<string, unknown>;
    radio_model?: string | Record<string, unknown>;
    fade_margin_db: number;
    hop_limit: number;
}

export interface LinkDocument {
    a: string;
    b: string;
    distance_m: number;
    path_loss_db: number;
    margin_db: number;
    closed: boolean;
}

export interface PresetTableRow {
    preset: string;
    regime: string;
    max_range_m: number | null;
    terrain_limited: boolean;
    density_nodes_per_km2: number | null;
}

export interface PlanSummary {
    schema_version: string;
    preset: string;
    power_dbm: number;
    regime: string;
    fade_margin_db: number;
    hop_limit: number;
    node_count: number;
    closed_link_count: number;
    component_count: number;
    isolated_nodes: string[];
    max_range_m: number | null;
    terrain_limited: boolean;
    density_nodes_per_km2: number | null;
    preset_table: PresetTableRow[];
}

export interface ConnectivityDocument {
    components: string[][];
    reachable: Record<string, string[]>;
    hop_counts: Record<string, Record<string, number>>;
}

export interface AssessResponse {
    schema_version: string;
    links: LinkDocument[];
    connectivity: ConnectivityDocument;
    plan_summary: PlanSummary;
}

export interface ModemPresetDocument {
    name: string;
    sf: number;
    bw_hz: number;
    cr_denominator: number;
    target: string;
    is_default: boolean;
}

export interface ModelsResponse {
    schema_version: string;
    path_loss_models: Record<string, Record<string, unknown>>;
    radio_models: Record<string, Record<string, unknown>>;
}

export interface ApiErrorBody {
    schema_version: string;
    error: { message: string; field?: string };
}
