import type {
    ApiErrorBody,
    AssessResponse,
    ModelsResponse,
    ModemPresetDocument,
    ScenarioDocument,
} from "./types.js";

export class ApiRequestError extends Error {
    constructor(
        message: string,
        public readonly field?: string,
        public readonly status?: number,
    ) {
        super(message);
    }
}

async function parseError(response: Response): Promise<ApiRequestError> {
    try {
        const body = (await response.json()) as ApiErrorBody;
        return new ApiRequestError(body.error.message, body.error.field, response.status);
    } catch {
        return new ApiRequestError(`request failed (${response.status})`, undefined, response.status);
    }
}

export class ApiClient {
    constructor(private baseUrl = "") {}

    private async get<T>(path: string): Promise<T> {
        const response = await fetch(this.baseUrl + path);
        if (!response.ok) {
            throw await parseError(response);
        }
        return (await response.json()) as T;
    }

    private async post<T>(path: string, doc: unknown): Promise<T> {
        const response = await fetch(this.baseUrl + path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(doc),
        });
        if (!response.ok) {
            throw await parseError(response);
        }
        return (await response.json()) as T;
    }

    async getPresets(): Promise<ModemPresetDocument[]> {
        const body = await this.get<{ presets: ModemPresetDocument[] }>("/presets");
        return body.presets;
    }

    async getModels(): Promise<ModelsResponse> {
        return this.get<ModelsResponse>("/models");
    }

    async assess(doc: ScenarioDocument): Promise<AssessResponse> {
        return this.post<AssessResponse>("/assess", doc);
    }
}
