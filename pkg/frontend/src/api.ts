/**
 * Typed HTTP client for the paste-watching sentinel service. Every piece
 * of playground state lives server-side; this module only moves JSON.
 */

export interface Recommendation {
    id: string;
    fileId: string;
    span: [number, number];
    matchCount: number;
    exactMatchCount: number;
    probability: number | null;
    state: string;
}

export interface Counters {
    copyCount: number;
    pasteCount: number;
    notificationCount: number;
    extractMethodAppliedCount: number;
    extractMethodCanceledCount: number;
}

export interface Settings {
    cloneThreshold: number;
    delayMs: number;
    expiryMs: number;
    decisionThreshold: number;
}

export interface PasteResult {
    status: string;
    dueAt?: number;
    reason?: string;
}

export interface ApplyResult {
    diff: string;
    content: string;
    newMethodName: string;
}

export class ApiError extends Error {
    constructor(
        readonly status: number,
        readonly code: string,
        detail: string,
    ) {
        super(detail);
        this.name = "ApiError";
    }
}

interface ErrorBody {
    error?: string;
    detail?: string;
}

export class SentinelClient {
    constructor(private readonly baseUrl: string = "") {}

    private async request<T>(
        method: string,
        path: string,
        body?: unknown,
    ): Promise<T> {
        const init: RequestInit = { method };
        if (body !== undefined) {
            init.headers = { "Content-Type": "application/json" };
            init.body = JSON.stringify(body);
        }
        const response = await fetch(this.baseUrl + path, init);
        if (!response.ok) {
            let parsed: ErrorBody = {};
            try {
                parsed = (await response.json()) as ErrorBody;
            } catch {
                // non-JSON error body; fall through to the generic message
            }
            throw new ApiError(
                response.status,
                parsed.error ?? "HTTP_ERROR",
                parsed.detail ?? `request failed with ${response.status}`,
            );
        }
        return (await response.json()) as T;
    }

    async registerFile(content: string): Promise<string> {
        const data = await this.request<{ fileId: string }>(
            "POST", "/files", { content });
        return data.fileId;
    }

    async getFile(fileId: string): Promise<string> {
        const data = await this.request<{ content: string }>(
            "GET", `/files/${fileId}`);
        return data.content;
    }

    async edit(
        fileId: string,
        start: number,
        end: number,
        text: string,
    ): Promise<string> {
        const data = await this.request<{ content: string }>(
            "POST", `/files/${fileId}/edit`, { start, end, text });
        return data.content;
    }

    copy(fileId: string): Promise<Counters> {
        return this.request<Counters>("POST", `/files/${fileId}/copy`);
    }

    paste(fileId: string, text: string, offset: number): Promise<PasteResult> {
        return this.request<PasteResult>(
            "POST", `/files/${fileId}/paste`, { text, offset });
    }

    async recommendations(): Promise<Recommendation[]> {
        const data = await this.request<{ recommendations: Recommendation[] }>(
            "GET", "/recommendations");
        return data.recommendations;
    }

    apply(recommendationId: string, name: string): Promise<ApplyResult> {
        return this.request<ApplyResult>(
            "POST", `/recommendations/${recommendationId}/apply`, { name });
    }

    async cancel(recommendationId: string): Promise<void> {
        await this.request<{ ok: boolean }>(
            "POST", `/recommendations/${recommendationId}/cancel`);
    }

    counters(): Promise<Counters> {
        return this.request<Counters>("GET", "/counters");
    }

    async countersXml(): Promise<string> {
        const response = await fetch(this.baseUrl + "/counters.xml");
        if (!response.ok) {
            throw new ApiError(response.status, "HTTP_ERROR",
                `request failed with ${response.status}`);
        }
        return response.text();
    }

    settings(): Promise<Settings> {
        return this.request<Settings>("GET", "/settings");
    }
}
