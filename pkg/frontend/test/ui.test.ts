// @vitest-environment jsdom
import { beforeEach, describe, expect, it, vi } from "vitest";

import { Counters } from "../src/api.js";
import { renderCounters } from "../src/ui/countersPanel.js";
import { showDiffModal } from "../src/ui/diffModal.js";
import { splitSpan } from "../src/ui/highlight.js";
import { dismissToast, showToast } from "../src/ui/toast.js";

beforeEach(() => {
    document.body.innerHTML = "";
});

describe("showToast", () => {
    it("appends the message to a bottom-right container", () => {
        const toast = showToast({ message: "2 duplicates found" });

        const container = document.getElementById("pw-toast-container");
        expect(container).not.toBeNull();
        expect(container!.contains(toast)).toBe(true);
        expect(toast.textContent).toContain("2 duplicates found");
    });

    it("runs the action and dismisses the toast on click", () => {
        const onClick = vi.fn();
        const toast = showToast({
            message: "extract?",
            actions: [{ label: "Preview", onClick }],
        });

        const button = toast.querySelector<HTMLButtonElement>(
            ".pw-toast-action");
        button!.click();

        expect(onClick).toHaveBeenCalledTimes(1);
        expect(document.body.contains(toast)).toBe(false);
    });

    it("auto-dismisses after the configured duration", () => {
        vi.useFakeTimers();
        try {
            const toast = showToast({ message: "bye", durationMs: 4000 });
            vi.advanceTimersByTime(4000);
            expect(document.body.contains(toast)).toBe(false);
        } finally {
            vi.useRealTimers();
        }
    });

    it("dismissToast removes a toast manually", () => {
        const toast = showToast({ message: "manual" });
        dismissToast(toast);
        expect(document.body.contains(toast)).toBe(false);
    });
});

describe("showDiffModal", () => {
    it("shows the fragment and the default method name", () => {
        const overlay = showDiffModal({
            fragment: "int sum = a + b;",
            defaultName: "extracted",
            onApply: () => Promise.resolve(""),
            onCancel: () => undefined,
        });

        expect(overlay.querySelector(".pw-modal-fragment")!.textContent)
            .toBe("int sum = a + b;");
        const input = overlay.querySelector<HTMLInputElement>(
            ".pw-modal-name");
        expect(input!.value).toBe("extracted");
    });

    it("applies with the typed name and swaps to the returned diff",
            async () => {
        const onApply = vi.fn().mockResolvedValue("+    printSum();");
        const overlay = showDiffModal({
            fragment: "frag",
            defaultName: "extracted",
            onApply,
            onCancel: () => undefined,
        });

        const input = overlay.querySelector<HTMLInputElement>(
            ".pw-modal-name")!;
        input.value = "printSum";
        overlay.querySelector<HTMLButtonElement>(".pw-modal-apply")!.click();
        await Promise.resolve();
        await Promise.resolve();

        expect(onApply).toHaveBeenCalledWith("printSum");
        expect(overlay.querySelector(".pw-modal-diff")!.textContent)
            .toBe("+    printSum();");
        // apply button is gone; cancel became a close button
        expect(overlay.querySelector(".pw-modal-apply")).toBeNull();
        expect(overlay.querySelector(".pw-modal-cancel")!.textContent)
            .toBe("Close");
    });

    it("requires a non-empty method name", () => {
        const onApply = vi.fn();
        const overlay = showDiffModal({
            fragment: "frag",
            defaultName: "",
            onApply,
            onCancel: () => undefined,
        });

        overlay.querySelector<HTMLButtonElement>(".pw-modal-apply")!.click();

        expect(onApply).not.toHaveBeenCalled();
        expect(overlay.querySelector(".pw-modal-error")!.textContent)
            .toContain("name is required");
    });

    it("shows the service error and stays open on rejected apply",
            async () => {
        const onApply = vi.fn().mockRejectedValue(
            new Error("a method named original already exists"));
        const overlay = showDiffModal({
            fragment: "frag",
            defaultName: "original",
            onApply,
            onCancel: () => undefined,
        });

        overlay.querySelector<HTMLButtonElement>(".pw-modal-apply")!.click();
        await Promise.resolve();
        await Promise.resolve();

        expect(document.body.contains(overlay)).toBe(true);
        expect(overlay.querySelector(".pw-modal-error")!.textContent)
            .toContain("already exists");
        const apply = overlay.querySelector<HTMLButtonElement>(
            ".pw-modal-apply")!;
        expect(apply.disabled).toBe(false);
    });

    it("cancel invokes the callback and closes the modal", () => {
        const onCancel = vi.fn();
        const overlay = showDiffModal({
            fragment: "frag",
            defaultName: "extracted",
            onApply: () => Promise.resolve(""),
            onCancel,
        });

        overlay.querySelector<HTMLButtonElement>(".pw-modal-cancel")!.click();

        expect(onCancel).toHaveBeenCalledTimes(1);
        expect(document.body.contains(overlay)).toBe(false);
    });
});

describe("renderCounters", () => {
    const counters: Counters = {
        copyCount: 3,
        pasteCount: 2,
        notificationCount: 1,
        extractMethodAppliedCount: 1,
        extractMethodCanceledCount: 0,
    };

    it("renders one row per counter", () => {
        const panel = document.createElement("div");
        renderCounters(panel, counters);

        expect(panel.querySelectorAll("tr").length).toBe(5);
        expect(panel.querySelector('[data-counter="pasteCount"]')!
            .textContent).toBe("2");
    });

    it("updates values in place on re-render", () => {
        const panel = document.createElement("div");
        renderCounters(panel, counters);
        renderCounters(panel, { ...counters, pasteCount: 7 });

        expect(panel.querySelectorAll("table").length).toBe(1);
        expect(panel.querySelector('[data-counter="pasteCount"]')!
            .textContent).toBe("7");
    });
});

describe("splitSpan", () => {
    it("splits content around the span", () => {
        expect(splitSpan("0123456789", [2, 6])).toEqual({
            before: "01", selected: "2345", after: "6789",
        });
    });

    it("clamps out-of-range spans", () => {
        expect(splitSpan("abc", [1, 99])).toEqual({
            before: "a", selected: "bc", after: "",
        });
        expect(splitSpan("abc", [5, 9])).toEqual({
            before: "abc", selected: "", after: "",
        });
    });
});
