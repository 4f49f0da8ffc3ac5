/**
 * DOM-free orchestration of a playground session. Owns the file id, the
 * mirrored editor content, and the set of recommendations the user has
 * already been shown; the UI layer subscribes through SessionEvents.
 *
 * All decisions (clone matching, classification, extractability) happen
 * server-side — this class only reports what the service says.
 */

import {
    Counters,
    Recommendation,
    SentinelClient,
    Settings,
} from "./api.js";

export interface SessionEvents {
    onContent(content: string): void;
    onCountdownStart(delayMs: number): void;
    onPasteDiscarded(reason: string): void;
    onRecommendationShown(recommendation: Recommendation): void;
    onRecommendationGone(recommendationId: string): void;
    onCounters(counters: Counters): void;
    onConnectionChange(connected: boolean): void;
}

export class PlaygroundSession {
    fileId: string | null = null;
    content: string = "";
    settings: Settings | null = null;

    private readonly seen = new Map<string, Recommendation>();
    private connected = true;

    constructor(
        private readonly client: SentinelClient,
        private readonly events: SessionEvents,
    ) {}

    /** Register the initial editor content and load service settings. */
    async start(initialContent: string): Promise<void> {
        await this.guard(async () => {
            this.settings = await this.client.settings();
            this.fileId = await this.client.registerFile(initialContent);
            this.content = initialContent;
            this.events.onContent(this.content);
            this.events.onCounters(await this.client.counters());
        });
    }

    /**
     * Report a paste. The service inserts the text itself, so the local
     * mirror is updated here rather than via a follow-up edit (which
     * would count as an edit inside the paste and suppress it).
     */
    async notifyPaste(text: string, offset: number): Promise<void> {
        const fileId = this.requireFile();
        await this.guard(async () => {
            const result = await this.client.paste(fileId, text, offset);
            this.content = this.content.slice(0, offset) + text
                + this.content.slice(offset);
            this.events.onContent(this.content);
            if (result.status === "queued") {
                this.events.onCountdownStart(this.settings?.delayMs ?? 0);
            } else {
                this.events.onPasteDiscarded(result.reason ?? result.status);
            }
        });
    }

    /** Report a typing edit; the service echoes the resulting content. */
    async notifyEdit(start: number, end: number, text: string): Promise<void> {
        const fileId = this.requireFile();
        await this.guard(async () => {
            this.content = await this.client.edit(fileId, start, end, text);
            this.events.onContent(this.content);
        });
    }

    async notifyCopy(): Promise<void> {
        const fileId = this.requireFile();
        await this.guard(async () => {
            this.events.onCounters(await this.client.copy(fileId));
        });
    }

    /**
     * Poll for recommendations and counters. New recommendations fire
     * onRecommendationShown exactly once; ones that disappeared
     * (expired or suppressed server-side) fire onRecommendationGone.
     */
    async poll(): Promise<void> {
        await this.guard(async () => {
            const current = await this.client.recommendations();
            const currentIds = new Set(current.map((r) => r.id));
            for (const rec of current) {
                if (!this.seen.has(rec.id)) {
                    this.events.onRecommendationShown(rec);
                }
                this.seen.set(rec.id, rec);
            }
            for (const id of [...this.seen.keys()]) {
                if (!currentIds.has(id)) {
                    this.seen.delete(id);
                    this.events.onRecommendationGone(id);
                }
            }
            this.events.onCounters(await this.client.counters());
        });
    }

    /** Apply a recommendation; returns the unified diff on success. */
    async apply(recommendationId: string, name: string): Promise<string> {
        const result = await this.client.apply(recommendationId, name);
        this.content = result.content;
        this.events.onContent(this.content);
        this.forget(recommendationId);
        await this.poll();
        return result.diff;
    }

    async cancel(recommendationId: string): Promise<void> {
        await this.client.cancel(recommendationId);
        this.forget(recommendationId);
        await this.poll();
    }

    /** The span text a recommendation refers to, for preview/highlight. */
    fragmentText(recommendation: Recommendation): string {
        const [start, end] = recommendation.span;
        return this.content.slice(start, end);
    }

    private forget(recommendationId: string): void {
        if (this.seen.delete(recommendationId)) {
            this.events.onRecommendationGone(recommendationId);
        }
    }

    private requireFile(): string {
        if (this.fileId === null) {
            throw new Error("session not started");
        }
        return this.fileId;
    }

    /** Track connection state across network failures. */
    private async guard(action: () => Promise<void>): Promise<void> {
        try {
            await action();
            if (!this.connected) {
                this.connected = true;
                this.events.onConnectionChange(true);
            }
        } catch (error) {
            if (error instanceof TypeError) {
                // fetch rejects with TypeError on network failure
                if (this.connected) {
                    this.connected = false;
                    this.events.onConnectionChange(false);
                }
                return;
            }
            throw error;
        }
    }
}
