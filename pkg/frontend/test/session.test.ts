import { describe, expect, it, vi } from "vitest";

import {
    Counters,
    Recommendation,
    SentinelClient,
    Settings,
} from "../src/api.js";
import { PlaygroundSession, SessionEvents } from "../src/session.js";

const SETTINGS: Settings = {
    cloneThreshold: 0.8,
    delayMs: 10000,
    expiryMs: 30000,
    decisionThreshold: 0.5,
};

const ZERO_COUNTERS: Counters = {
    copyCount: 0,
    pasteCount: 0,
    notificationCount: 0,
    extractMethodAppliedCount: 0,
    extractMethodCanceledCount: 0,
};

function recommendation(id: string, span: [number, number]): Recommendation {
    return {
        id, span, fileId: "f1", matchCount: 2, exactMatchCount: 1,
        probability: 0.9, state: "Shown",
    };
}

/** In-memory stand-in for the HTTP client with scripted responses. */
function fakeClient(overrides: Partial<SentinelClient> = {}): SentinelClient {
    const base = {
        settings: vi.fn().mockResolvedValue(SETTINGS),
        registerFile: vi.fn().mockResolvedValue("f1"),
        getFile: vi.fn(),
        edit: vi.fn(),
        copy: vi.fn(),
        paste: vi.fn(),
        recommendations: vi.fn().mockResolvedValue([]),
        apply: vi.fn(),
        cancel: vi.fn().mockResolvedValue(undefined),
        counters: vi.fn().mockResolvedValue(ZERO_COUNTERS),
        countersXml: vi.fn(),
    };
    return Object.assign(base, overrides) as unknown as SentinelClient;
}

function recordingEvents(): SessionEvents & {
    shown: Recommendation[];
    gone: string[];
    contents: string[];
    countdowns: number[];
    discarded: string[];
    connection: boolean[];
    counters: Counters[];
} {
    const log = {
        shown: [] as Recommendation[],
        gone: [] as string[],
        contents: [] as string[],
        countdowns: [] as number[],
        discarded: [] as string[],
        connection: [] as boolean[],
        counters: [] as Counters[],
    };
    return {
        ...log,
        onContent: (c: string) => void log.contents.push(c),
        onCountdownStart: (ms: number) => void log.countdowns.push(ms),
        onPasteDiscarded: (r: string) => void log.discarded.push(r),
        onRecommendationShown: (r: Recommendation) => void log.shown.push(r),
        onRecommendationGone: (id: string) => void log.gone.push(id),
        onCounters: (c: Counters) => void log.counters.push(c),
        onConnectionChange: (ok: boolean) => void log.connection.push(ok),
    };
}

describe("PlaygroundSession", () => {
    it("start registers the file and reports initial state", async () => {
        const client = fakeClient();
        const events = recordingEvents();
        const session = new PlaygroundSession(client, events);

        await session.start("class A {}");

        expect(session.fileId).toBe("f1");
        expect(client.registerFile).toHaveBeenCalledWith("class A {}");
        expect(events.contents).toEqual(["class A {}"]);
        expect(events.counters).toEqual([ZERO_COUNTERS]);
    });

    it("queued paste mirrors the insertion and starts the countdown",
            async () => {
        const client = fakeClient({
            paste: vi.fn().mockResolvedValue({ status: "queued", dueAt: 10 }),
        } as Partial<SentinelClient>);
        const events = recordingEvents();
        const session = new PlaygroundSession(client, events);
        await session.start("abcdef");

        await session.notifyPaste("XY", 3);

        expect(session.content).toBe("abcXYdef");
        expect(events.contents.at(-1)).toBe("abcXYdef");
        expect(events.countdowns).toEqual([10000]);
        expect(client.paste).toHaveBeenCalledWith("f1", "XY", 3);
    });

    it("discarded paste reports the reason instead of a countdown",
            async () => {
        const client = fakeClient({
            paste: vi.fn().mockResolvedValue({
                status: "discarded", reason: "NotStatement",
            }),
        } as Partial<SentinelClient>);
        const events = recordingEvents();
        const session = new PlaygroundSession(client, events);
        await session.start("");

        await session.notifyPaste("some prose", 0);

        expect(events.countdowns).toEqual([]);
        expect(events.discarded).toEqual(["NotStatement"]);
    });

    it("poll announces each recommendation exactly once", async () => {
        const rec = recommendation("r1", [0, 4]);
        const client = fakeClient({
            recommendations: vi.fn().mockResolvedValue([rec]),
        } as Partial<SentinelClient>);
        const events = recordingEvents();
        const session = new PlaygroundSession(client, events);
        await session.start("class A {}");

        await session.poll();
        await session.poll();

        expect(events.shown).toEqual([rec]);
    });

    it("poll reports recommendations that disappeared server-side",
            async () => {
        const rec = recommendation("r1", [0, 4]);
        const recommendations = vi.fn()
            .mockResolvedValueOnce([rec])
            .mockResolvedValueOnce([]);
        const client = fakeClient(
            { recommendations } as Partial<SentinelClient>);
        const events = recordingEvents();
        const session = new PlaygroundSession(client, events);
        await session.start("class A {}");

        await session.poll();
        await session.poll();

        expect(events.gone).toEqual(["r1"]);
    });

    it("apply adopts the server content and returns the diff", async () => {
        const client = fakeClient({
            apply: vi.fn().mockResolvedValue({
                diff: "--- before\n+++ after\n",
                content: "class A { void helper() {} }",
                newMethodName: "helper",
            }),
        } as Partial<SentinelClient>);
        const events = recordingEvents();
        const session = new PlaygroundSession(client, events);
        await session.start("class A {}");

        const diff = await session.apply("r1", "helper");

        expect(diff).toBe("--- before\n+++ after\n");
        expect(session.content).toBe("class A { void helper() {} }");
        expect(client.apply).toHaveBeenCalledWith("r1", "helper");
        // apply re-polls so the counters panel refreshes
        expect(events.counters.length).toBe(2);
    });

    it("cancel forwards to the service and forgets the recommendation",
            async () => {
        const rec = recommendation("r1", [0, 4]);
        const recommendations = vi.fn()
            .mockResolvedValueOnce([rec])
            .mockResolvedValue([]);
        const client = fakeClient(
            { recommendations } as Partial<SentinelClient>);
        const events = recordingEvents();
        const session = new PlaygroundSession(client, events);
        await session.start("class A {}");
        await session.poll();

        await session.cancel("r1");

        expect(client.cancel).toHaveBeenCalledWith("r1");
        expect(events.gone).toEqual(["r1"]);
    });

    it("fragmentText slices the recommended span from the content",
            async () => {
        const client = fakeClient();
        const session = new PlaygroundSession(client, recordingEvents());
        await session.start("0123456789");

        expect(session.fragmentText(recommendation("r1", [2, 6])))
            .toBe("2345");
    });

    it("network failures toggle the connection state once each way",
            async () => {
        const counters = vi.fn()
            .mockResolvedValueOnce(ZERO_COUNTERS)       // during start
            .mockRejectedValueOnce(new TypeError("fetch failed"))
            .mockRejectedValueOnce(new TypeError("fetch failed"))
            .mockResolvedValue(ZERO_COUNTERS);
        const client = fakeClient({ counters } as Partial<SentinelClient>);
        const events = recordingEvents();
        const session = new PlaygroundSession(client, events);
        await session.start("class A {}");

        await session.poll();  // fails -> offline
        await session.poll();  // still failing, no duplicate event
        await session.poll();  // recovers -> online

        expect(events.connection).toEqual([false, true]);
    });

    it("service errors other than network failures propagate", async () => {
        const client = fakeClient({
            apply: vi.fn().mockRejectedValue(new Error("name collision")),
        } as Partial<SentinelClient>);
        const session = new PlaygroundSession(client, recordingEvents());
        await session.start("class A {}");

        await expect(session.apply("r1", "original"))
            .rejects.toThrow("name collision");
    });

    it("refuses editor events before the session starts", async () => {
        const session = new PlaygroundSession(fakeClient(),
            recordingEvents());
        await expect(session.notifyPaste("x", 0))
            .rejects.toThrow("session not started");
    });
});
