import { describe, expect, it } from "vitest";

import { applyEdit, diffEdit } from "../src/edits.js";

describe("diffEdit", () => {
    it("returns null for identical strings", () => {
        expect(diffEdit("abc", "abc")).toBeNull();
    });

    it("detects a pure insertion", () => {
        expect(diffEdit("int x;", "int xy;"))
            .toEqual({ start: 5, end: 5, text: "y" });
    });

    it("detects a pure deletion", () => {
        expect(diffEdit("hello world", "hello"))
            .toEqual({ start: 5, end: 11, text: "" });
    });

    it("detects a replacement in the middle", () => {
        const edit = diffEdit("int a = 1;", "int b = 1;");
        expect(edit).toEqual({ start: 4, end: 5, text: "b" });
    });

    it("handles edits at the start", () => {
        expect(diffEdit("bc", "abc"))
            .toEqual({ start: 0, end: 0, text: "a" });
    });

    it("round-trips through applyEdit on random pairs", () => {
        const alphabet = "ab\n ;x";
        let state = 12345;
        const rand = (n: number) => {
            // deterministic linear congruential generator
            state = (state * 1103515245 + 12345) % 2147483648;
            return state % n;
        };
        const randomText = (length: number) =>
            Array.from({ length }, () => alphabet[rand(alphabet.length)])
                .join("");
        for (let trial = 0; trial < 200; trial++) {
            const before = randomText(rand(30));
            const after = randomText(rand(30));
            const edit = diffEdit(before, after);
            if (edit === null) {
                expect(before).toBe(after);
            } else {
                expect(edit.start).toBeLessThanOrEqual(edit.end);
                expect(applyEdit(before, edit)).toBe(after);
            }
        }
    });
});
