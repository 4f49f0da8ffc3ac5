/**
 * Ticking countdown used to show how long until a queued paste is
 * evaluated. Driven by the page's timers so tests can fake them.
 */

export class Countdown {
    private timer: ReturnType<typeof setInterval> | null = null;

    start(
        delayMs: number,
        onTick: (remainingMs: number) => void,
        onDone: () => void,
        tickMs: number = 1000,
    ): void {
        this.stop();
        let remaining = delayMs;
        onTick(remaining);
        this.timer = setInterval(() => {
            remaining -= tickMs;
            if (remaining <= 0) {
                this.stop();
                onTick(0);
                onDone();
            } else {
                onTick(remaining);
            }
        }, tickMs);
    }

    stop(): void {
        if (this.timer !== null) {
            clearInterval(this.timer);
            this.timer = null;
        }
    }

    get running(): boolean {
        return this.timer !== null;
    }
}
