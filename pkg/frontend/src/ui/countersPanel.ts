/**
 * Live panel for the service's event counters, plus an XML download.
 */

import { Counters } from "../api.js";

const ROWS: Array<[keyof Counters, string]> = [
    ["copyCount", "Copies"],
    ["pasteCount", "Pastes"],
    ["notificationCount", "Notifications"],
    ["extractMethodAppliedCount", "Applied"],
    ["extractMethodCanceledCount", "Canceled"],
];

export function renderCounters(panel: HTMLElement, counters: Counters): void {
    let table = panel.querySelector("table");
    if (!table) {
        table = document.createElement("table");
        table.className = "pw-counters";
        for (const [key, title] of ROWS) {
            const row = document.createElement("tr");
            const name = document.createElement("td");
            name.textContent = title;
            const value = document.createElement("td");
            value.dataset.counter = key;
            row.appendChild(name);
            row.appendChild(value);
            table.appendChild(row);
        }
        panel.appendChild(table);
    }
    for (const [key] of ROWS) {
        const cell = table.querySelector<HTMLElement>(
            `td[data-counter="${key}"]`);
        if (cell) {
            cell.textContent = String(counters[key]);
        }
    }
}

/** Trigger a browser download of the counters as XML. */
export function downloadCountersXml(xml: string, filename = "statistics.xml"):
        void {
    const blob = new Blob([xml], { type: "application/xml" });
    const url = URL.createObjectURL(blob);
    const link = document.createElement("a");
    link.href = url;
    link.download = filename;
    document.body.appendChild(link);
    link.click();
    link.remove();
    URL.revokeObjectURL(url);
}
