/** Preview scheduling: throttled requests, sequence-numbered responses.
 *
 * Rules: at most one request in flight; requests are spaced at least
 * `intervalMs` apart (so a continuous slider drag tops out around
 * 1000/intervalMs per second); edits arriving while busy coalesce into one
 * trailing request; a response is shown only if no newer response has been
 * shown (stale results are dropped, never displayed).
 */

export type PreviewFetcher = (seq: number) => Promise<Blob | null>;

export interface PreviewSchedulerOptions {
  intervalMs?: number;
  now?: () => number;
  setTimer?: (fn: () => void, ms: number) => unknown;
  clearTimer?: (handle: unknown) => void;
}

export class PreviewScheduler {
  private seq = 0;
  private shownSeq = 0;
  private lastFire = -Infinity;
  private inFlight = false;
  private pending = false;
  private timer: unknown = null;
  private readonly intervalMs: number;
  private readonly now: () => number;
  private readonly setTimer: (fn: () => void, ms: number) => unknown;
  private readonly clearTimer: (handle: unknown) => void;
  requestCount = 0;

  constructor(
    private fetcher: PreviewFetcher,
    private onShow: (blob: Blob, seq: number) => void,
    options: PreviewSchedulerOptions = {},
  ) {
    this.intervalMs = options.intervalMs ?? 300;
    this.now = options.now ?? (() => Date.now());
    this.setTimer = options.setTimer ?? ((fn, ms) => setTimeout(fn, ms));
    this.clearTimer = options.clearTimer ?? ((h) => clearTimeout(h as number));
  }

  /** Call on every edit. */
  schedule(): void {
    const wait = this.lastFire + this.intervalMs - this.now();
    if (this.inFlight || wait > 0) {
      this.pending = true;
      if (!this.inFlight && this.timer === null) {
        this.timer = this.setTimer(() => {
          this.timer = null;
          if (this.pending) this.fire();
        }, wait);
      }
      return;
    }
    this.fire();
  }

  private fire(): void {
    if (this.timer !== null) {
      this.clearTimer(this.timer);
      this.timer = null;
    }
    this.pending = false;
    this.inFlight = true;
    this.lastFire = this.now();
    const seq = ++this.seq;
    this.requestCount += 1;
    this.fetcher(seq)
      .then((blob) => {
        if (blob !== null && seq > this.shownSeq) {
          this.shownSeq = seq;
          this.onShow(blob, seq);
        }
      })
      .catch(() => undefined)
      .finally(() => {
        this.inFlight = false;
        if (this.pending) this.schedule();
      });
  }
}
