/**
 * Turn a before/after pair of editor contents into the single
 * replace-range edit the sentinel's edit endpoint expects.
 */

export interface EditRange {
    start: number;
    end: number;
    text: string;
}

/**
 * Compute the minimal `{start, end, text}` such that replacing
 * `before[start:end]` with `text` yields `after`. Returns null when the
 * two strings are identical.
 */
export function diffEdit(before: string, after: string): EditRange | null {
    if (before === after) {
        return null;
    }
    let prefix = 0;
    const maxPrefix = Math.min(before.length, after.length);
    while (prefix < maxPrefix && before[prefix] === after[prefix]) {
        prefix += 1;
    }
    let suffix = 0;
    while (
        suffix < maxPrefix - prefix &&
        before[before.length - 1 - suffix] === after[after.length - 1 - suffix]
    ) {
        suffix += 1;
    }
    return {
        start: prefix,
        end: before.length - suffix,
        text: after.slice(prefix, after.length - suffix),
    };
}

/** Apply an edit range to a string; inverse of diffEdit for testing. */
export function applyEdit(content: string, edit: EditRange): string {
    return content.slice(0, edit.start) + edit.text + content.slice(edit.end);
}
