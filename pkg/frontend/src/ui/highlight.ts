/**
 * Highlight a character span inside the editor textarea by selecting it.
 */

export interface SpanParts {
    before: string;
    selected: string;
    after: string;
}

/** Split content around a [start, end) span; clamps out-of-range spans. */
export function splitSpan(
    content: string,
    span: [number, number],
): SpanParts {
    const start = Math.max(0, Math.min(span[0], content.length));
    const end = Math.max(start, Math.min(span[1], content.length));
    return {
        before: content.slice(0, start),
        selected: content.slice(start, end),
        after: content.slice(end),
    };
}

export function highlightSpan(
    editor: HTMLTextAreaElement,
    span: [number, number],
): void {
    const start = Math.max(0, Math.min(span[0], editor.value.length));
    const end = Math.max(start, Math.min(span[1], editor.value.length));
    editor.focus();
    editor.setSelectionRange(start, end);
}
