// Debounced dispatcher keeping at most one /assess request in flight.
// While a request is out, newer scenarios overwrite the pending slot, so
// the newest state always wins and stale responses are dropped.

export interface SchedulerHooks<TDoc, TResult> {
    send: (doc: TDoc) => Promise<TResult>;
    onResult: (doc: TDoc, result: TResult) => void;
    onError: (error: unknown) => void;
}

export class AssessScheduler<TDoc, TResult> {
    private pending: TDoc | null = null;
    private inFlight = false;
    private timer: ReturnType<typeof setTimeout> | null = null;

    constructor(
        private hooks: SchedulerHooks<TDoc, TResult>,
        private debounceMs = 150,
    ) {}

    request(doc: TDoc): void {
        this.pending = doc;
        if (this.timer !== null) {
            clearTimeout(this.timer);
        }
        this.timer = setTimeout(() => {
            this.timer = null;
            void this.dispatch();
        }, this.debounceMs);
    }

    /** True while a newer scenario than the dispatched one is waiting. */
    private superseded(): boolean {
        return this.pending !== null || this.timer !== null;
    }

    private async dispatch(): Promise<void> {
        if (this.inFlight || this.pending === null) {
            return;
        }
        const doc = this.pending;
        this.pending = null;
        this.inFlight = true;
        try {
            const result = await this.hooks.send(doc);
            if (!this.superseded()) {
                this.hooks.onResult(doc, result);
            }
        } catch (error) {
            if (!this.superseded()) {
                this.hooks.onError(error);
            }
        } finally {
            this.inFlight = false;
            if (this.pending !== null && this.timer === null) {
                void this.dispatch();
            }
        }
    }
}
