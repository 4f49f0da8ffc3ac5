/**
 * Modal dialog for reviewing an extraction: shows the duplicated
 * fragment, takes a method name, and swaps to the unified diff that the
 * service returns once the extraction is applied.
 */

export interface DiffModalOptions {
    fragment: string;
    defaultName: string;
    /** Resolve with the unified diff once the service has applied it. */
    onApply: (name: string) => Promise<string>;
    onCancel: () => void;
}

export function showDiffModal(options: DiffModalOptions): HTMLElement {
    const overlay = document.createElement("div");
    overlay.className = "pw-modal-overlay";

    const modal = document.createElement("div");
    modal.className = "pw-modal";
    modal.setAttribute("role", "dialog");
    overlay.appendChild(modal);

    const title = document.createElement("h2");
    title.textContent = "Extract method";
    modal.appendChild(title);

    const fragment = document.createElement("pre");
    fragment.className = "pw-modal-fragment";
    fragment.textContent = options.fragment;
    modal.appendChild(fragment);

    const label = document.createElement("label");
    label.textContent = "Method name: ";
    const nameInput = document.createElement("input");
    nameInput.type = "text";
    nameInput.className = "pw-modal-name";
    nameInput.value = options.defaultName;
    label.appendChild(nameInput);
    modal.appendChild(label);

    const errorLine = document.createElement("p");
    errorLine.className = "pw-modal-error";
    modal.appendChild(errorLine);

    const buttons = document.createElement("div");
    buttons.className = "pw-modal-buttons";
    modal.appendChild(buttons);

    const applyButton = document.createElement("button");
    applyButton.type = "button";
    applyButton.className = "pw-modal-apply";
    applyButton.textContent = "Apply";
    buttons.appendChild(applyButton);

    const cancelButton = document.createElement("button");
    cancelButton.type = "button";
    cancelButton.className = "pw-modal-cancel";
    cancelButton.textContent = "Cancel";
    buttons.appendChild(cancelButton);

    const close = () => overlay.remove();

    applyButton.addEventListener("click", () => {
        const name = nameInput.value.trim();
        if (!name) {
            errorLine.textContent = "A method name is required.";
            return;
        }
        applyButton.disabled = true;
        options.onApply(name).then(
            (diff) => {
                // swap the review view for the applied diff
                fragment.textContent = diff;
                fragment.className = "pw-modal-diff";
                label.remove();
                errorLine.textContent = "";
                applyButton.remove();
                cancelButton.textContent = "Close";
            },
            (error: unknown) => {
                applyButton.disabled = false;
                errorLine.textContent =
                    error instanceof Error ? error.message : String(error);
            },
        );
    });

    cancelButton.addEventListener("click", () => {
        if (cancelButton.textContent === "Close") {
            close();
        } else {
            options.onCancel();
            close();
        }
    });

    document.body.appendChild(overlay);
    nameInput.focus();
    return overlay;
}
