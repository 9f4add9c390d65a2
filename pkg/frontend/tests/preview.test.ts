import { describe, expect, it } from "vitest";

import { PreviewScheduler } from "../src/preview.js";

/** Deterministic clock + timer queue so timing is exact in tests. */
class FakeClock {
  now = 0;
  private timers = new Map<number, { at: number; fn: () => void }>();
  private nextId = 1;

  setTimer = (fn: () => void, ms: number): unknown => {
    const id = this.nextId++;
    this.timers.set(id, { at: this.now + Math.max(0, ms), fn });
    return id;
  };

  clearTimer = (handle: unknown): void => {
    this.timers.delete(handle as number);
  };

  private async flush(): Promise<void> {
    // drain then/catch/finally chains fully before looking at timers
    for (let i = 0; i < 8; i += 1) await Promise.resolve();
  }

  async advance(ms: number): Promise<void> {
    const target = this.now + ms;
    for (;;) {
      await this.flush();
      const due = [...this.timers.entries()]
        .filter(([, t]) => t.at <= target)
        .sort((a, b) => a[1].at - b[1].at)[0];
      if (!due) break;
      this.now = due[1].at;
      this.timers.delete(due[0]);
      due[1].fn();
    }
    this.now = target;
    await this.flush();
  }
}

interface Deferred {
  seq: number;
  resolve: (blob: Blob | null) => void;
}

function makeScheduler(clock: FakeClock, autoResolve = true) {
  const pending: Deferred[] = [];
  const shown: number[] = [];
  const scheduler = new PreviewScheduler(
    (seq) =>
      new Promise((resolve) => {
        if (autoResolve) resolve(new Blob([String(seq)]));
        else pending.push({ seq, resolve });
      }),
    (_blob, seq) => shown.push(seq),
    { intervalMs: 300, now: () => clock.now, setTimer: clock.setTimer, clearTimer: clock.clearTimer },
  );
  return { scheduler, pending, shown };
}

describe("preview scheduling", () => {
  it("continuous slider drag stays at or under 4 requests per second", async () => {
    const clock = new FakeClock();
    const { scheduler } = makeScheduler(clock);
    // drag event every 40 ms for 3 seconds
    for (let t = 0; t < 3000; t += 40) {
      scheduler.schedule();
      await clock.advance(40);
    }
    await clock.advance(400); // trailing request
    const perSecond = scheduler.requestCount / 3.4;
    expect(perSecond).toBeLessThanOrEqual(4);
    // and it must still deliver a live feed, not just a trailing frame
    expect(scheduler.requestCount).toBeGreaterThanOrEqual(8);
  });

  it("the trailing edit always lands after the drag stops", async () => {
    const clock = new FakeClock();
    const { scheduler, shown } = makeScheduler(clock);
    scheduler.schedule();
    await clock.advance(10);
    scheduler.schedule(); // within the throttle window -> deferred
    await clock.advance(1000);
    expect(scheduler.requestCount).toBe(2);
    expect(shown.length).toBe(2);
  });

  it("stale responses are never displayed", async () => {
    const clock = new FakeClock();
    const { scheduler, pending, shown } = makeScheduler(clock, false);
    scheduler.schedule(); // seq 1 fires immediately and hangs
    await clock.advance(350);
    expect(pending.map((p) => p.seq)).toEqual([1]);
    // edit arrives while seq 1 is in flight; coalesces into seq 2 after completion
    scheduler.schedule();
    expect(pending).toHaveLength(1);
    pending[0].resolve(new Blob(["one"]));
    await clock.advance(300);
    expect(pending.map((p) => p.seq)).toEqual([1, 2]);
    pending[1].resolve(new Blob(["two"]));
    await clock.advance(1);
    expect(shown).toEqual([1, 2]);
  });

  it("a response that loses the race is dropped", async () => {
    const clock = new FakeClock();
    const resolvers = new Map<number, (b: Blob | null) => void>();
    const shown: number[] = [];
    const scheduler = new PreviewScheduler(
      (seq) => new Promise((resolve) => resolvers.set(seq, resolve)),
      (_b, seq) => shown.push(seq),
      { intervalMs: 0, now: () => clock.now, setTimer: clock.setTimer, clearTimer: clock.clearTimer },
    );
    scheduler.schedule();
    resolvers.get(1)!(new Blob(["1"]));
    await clock.advance(1);
    scheduler.schedule();
    scheduler.schedule();
    await clock.advance(1);
    // two requests fired (2 then 3 after coalescing); resolve newer first
    const seqs = [...resolvers.keys()];
    const newest = Math.max(...seqs);
    resolvers.get(newest)!(new Blob(["new"]));
    await clock.advance(1);
    for (const seq of seqs) {
      if (seq !== newest) resolvers.get(seq)?.(new Blob(["old"]));
    }
    await clock.advance(1);
    expect(shown[shown.length - 1]).toBe(newest);
    expect(shown.filter((s) => s < newest && shown.indexOf(s) > shown.indexOf(newest))).toEqual([]);
  });

  it("failed requests do not block later ones", async () => {
    const clock = new FakeClock();
    let calls = 0;
    const scheduler = new PreviewScheduler(
      () => {
        calls += 1;
        return calls === 1 ? Promise.reject(new Error("boom")) : Promise.resolve(new Blob(["ok"]));
      },
      () => undefined,
      { intervalMs: 300, now: () => clock.now, setTimer: clock.setTimer, clearTimer: clock.clearTimer },
    );
    scheduler.schedule();
    await clock.advance(350);
    scheduler.schedule();
    await clock.advance(350);
    expect(calls).toBe(2);
  });
});
