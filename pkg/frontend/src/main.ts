/**
 * Wires the playground page to the sentinel service: editor events in,
 * recommendations and counters out.
 */

import { Recommendation, SentinelClient } from "./api.js";
import { Countdown } from "./countdown.js";
import { diffEdit } from "./edits.js";
import { PlaygroundSession } from "./session.js";
import { downloadCountersXml, renderCounters } from "./ui/countersPanel.js";
import { showDiffModal } from "./ui/diffModal.js";
import { highlightSpan } from "./ui/highlight.js";
import { showToast } from "./ui/toast.js";

const INITIAL_CONTENT = `class Playground {
    void original() {
        int a = 1;
        int b = 2;
        int sum = a + b;
        System.out.println(sum);
    }

    void pasteTargetGoesHere() {
    }
}
`;

const POLL_INTERVAL_MS = 1000;

function byId<T extends HTMLElement>(id: string): T {
    const element = document.getElementById(id);
    if (!element) {
        throw new Error(`missing element #${id}`);
    }
    return element as T;
}

export function bootstrap(baseUrl: string = ""): void {
    const editor = byId<HTMLTextAreaElement>("editor");
    const countdownLabel = byId<HTMLElement>("countdown");
    const statusLabel = byId<HTMLElement>("status");
    const countersPanel = byId<HTMLElement>("counters");
    const downloadButton = byId<HTMLButtonElement>("download-xml");

    const client = new SentinelClient(baseUrl);
    const countdown = new Countdown();
    let syncing = false;

    const session = new PlaygroundSession(client, {
        onContent(content) {
            if (editor.value !== content) {
                syncing = true;
                editor.value = content;
                syncing = false;
            }
        },
        onCountdownStart(delayMs) {
            countdown.start(
                delayMs,
                (remainingMs) => {
                    countdownLabel.textContent =
                        `evaluating paste in ${Math.ceil(remainingMs / 1000)}s`;
                },
                () => {
                    countdownLabel.textContent = "";
                },
            );
        },
        onPasteDiscarded(reason) {
            showToast({
                message: `Paste ignored (${reason})`,
                durationMs: 4000,
            });
        },
        onRecommendationShown(recommendation) {
            countdown.stop();
            countdownLabel.textContent = "";
            highlightSpan(editor, recommendation.span);
            offerRecommendation(recommendation);
        },
        onRecommendationGone() {
            // toasts are dismissed by their own buttons; nothing to undo
        },
        onCounters(counters) {
            renderCounters(countersPanel, counters);
        },
        onConnectionChange(connected) {
            statusLabel.textContent = connected ? "connected" : "offline";
            statusLabel.className = connected ? "pw-online" : "pw-offline";
        },
    });

    function offerRecommendation(recommendation: Recommendation): void {
        const matches = recommendation.matchCount;
        showToast({
            message: `Pasted code matches ${matches} existing fragment`
                + `${matches === 1 ? "" : "s"} — extract a method?`,
            actions: [
                {
                    label: "Preview",
                    onClick: () => {
                        showDiffModal({
                            fragment: session.fragmentText(recommendation),
                            defaultName: "extracted",
                            onApply: (name) =>
                                session.apply(recommendation.id, name),
                            onCancel: () => {
                                void session.cancel(recommendation.id);
                            },
                        });
                    },
                },
                {
                    label: "Dismiss",
                    onClick: () => {
                        void session.cancel(recommendation.id);
                    },
                },
            ],
        });
    }

    editor.addEventListener("paste", (event: ClipboardEvent) => {
        event.preventDefault();
        const text = event.clipboardData?.getData("text/plain") ?? "";
        if (!text) {
            return;
        }
        const start = editor.selectionStart;
        const end = editor.selectionEnd;
        const send = end > start
            // replacing a selection: delete it first, then paste
            ? session.notifyEdit(start, end, "")
                .then(() => session.notifyPaste(text, start))
            : session.notifyPaste(text, start);
        void send.then(() => {
            editor.setSelectionRange(start + text.length, start + text.length);
        });
    });

    editor.addEventListener("copy", () => {
        void session.notifyCopy();
    });

    editor.addEventListener("input", () => {
        if (syncing) {
            return;
        }
        const edit = diffEdit(session.content, editor.value);
        if (edit) {
            void session.notifyEdit(edit.start, edit.end, edit.text);
        }
    });

    downloadButton.addEventListener("click", () => {
        void client.countersXml().then(downloadCountersXml);
    });

    void session.start(INITIAL_CONTENT).then(() => {
        setInterval(() => void session.poll(), POLL_INTERVAL_MS);
    });
}

if (typeof document !== "undefined" && document.getElementById("editor")) {
    bootstrap();
}
