/**
 * Bottom-right toast notifications with optional action buttons.
 */

export interface ToastAction {
    label: string;
    onClick: () => void;
}

export interface ToastOptions {
    message: string;
    actions?: ToastAction[];
    durationMs?: number;
}

const CONTAINER_ID = "pw-toast-container";

function ensureContainer(): HTMLElement {
    let container = document.getElementById(CONTAINER_ID);
    if (!container) {
        container = document.createElement("div");
        container.id = CONTAINER_ID;
        container.style.position = "fixed";
        container.style.bottom = "16px";
        container.style.right = "16px";
        container.style.display = "flex";
        container.style.flexDirection = "column";
        container.style.gap = "8px";
        container.style.zIndex = "1000";
        document.body.appendChild(container);
    }
    return container;
}

export function showToast(options: ToastOptions): HTMLElement {
    const container = ensureContainer();
    const toast = document.createElement("div");
    toast.className = "pw-toast";
    toast.setAttribute("role", "status");

    const message = document.createElement("span");
    message.className = "pw-toast-message";
    message.textContent = options.message;
    toast.appendChild(message);

    for (const action of options.actions ?? []) {
        const button = document.createElement("button");
        button.type = "button";
        button.className = "pw-toast-action";
        button.textContent = action.label;
        button.addEventListener("click", () => {
            action.onClick();
            dismissToast(toast);
        });
        toast.appendChild(button);
    }

    container.appendChild(toast);
    if (options.durationMs !== undefined) {
        setTimeout(() => dismissToast(toast), options.durationMs);
    }
    return toast;
}

export function dismissToast(toast: HTMLElement): void {
    toast.remove();
}
