/** Injectable clock so trial logic and the timing harness share one code path. */

export interface Clock {
  now(): number;
  after(ms: number): Promise<void>;
}

export const realClock: Clock = {
  now: () => performance.now(),
  after: (ms: number) => new Promise((resolve) => setTimeout(resolve, ms)),
};

/** Durations actually delivered during one trial presentation. */
export interface PresentationTiming {
  fixationMs: number;
  exposureMs: number;
}
