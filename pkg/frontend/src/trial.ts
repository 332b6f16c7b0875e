/**
 * One 2AFC presentation: fixation cross, timed dual-stimulus exposure
 * with red markers, and keyboard capture.
 *
 * Keys 1/2 are accepted from stimulus onset; the subject need not wait
 * for the stimuli to disappear. At the exposure timeout the stimuli are
 * blanked but the trial stays open until a key arrives. Only the first
 * accepted key counts.
 */

import { Clock, PresentationTiming, realClock } from './timing.js';
import { ResponseKey, TrialPayload } from './types.js';

export interface StageView {
  showFixation(cross: [number, number]): void;
  showStimuli(payload: TrialPayload): void;
  blankStimuli(): void;
  setProgress(index: number, total: number): void;
}

export interface TrialOutcome {
  key: ResponseKey;
  rtMs: number;
  timing: PresentationTiming;
}

const KEY_MAP: Record<string, ResponseKey> = { '1': 'ONE', '2': 'TWO' };

type Phase = 'idle' | 'fixation' | 'exposure' | 'held-open' | 'done';

export class TrialRunner {
  private phase: Phase = 'idle';

  private exposureStart = 0;

  private accepted: { key: ResponseKey; rtMs: number } | null = null;

  private keyWaiter: (() => void) | null = null;

  constructor(
    private view: StageView,
    private clock: Clock = realClock,
  ) {}

  get currentPhase(): Phase {
    return this.phase;
  }

  /** Feed a raw keyboard key ('1' or '2'); returns true if it was accepted. */
  handleKey(rawKey: string): boolean {
    const mapped = KEY_MAP[rawKey];
    if (!mapped) return false;
    if (this.phase !== 'exposure' && this.phase !== 'held-open') return false;
    if (this.accepted !== null) return false; // exactly one response per trial
    this.accepted = { key: mapped, rtMs: this.clock.now() - this.exposureStart };
    if (this.keyWaiter) {
      this.keyWaiter();
      this.keyWaiter = null;
    }
    return true;
  }

  /** Run one presentation to completion; resolves once exposure has
   * elapsed and a key has been received (in either order). */
  async run(payload: TrialPayload): Promise<TrialOutcome> {
    if (payload.done || !payload.marker) {
      throw new Error('cannot run a completed session marker as a trial');
    }
    this.accepted = null;
    this.view.setProgress(payload.trial_index, payload.n_trials);

    this.phase = 'fixation';
    const fixationStart = this.clock.now();
    this.view.showFixation(payload.marker.cross);
    await this.clock.after(payload.fixation_ms ?? 1000);

    this.phase = 'exposure';
    this.exposureStart = this.clock.now();
    this.view.showStimuli(payload);
    await this.clock.after(payload.exposure_ms ?? 3000);
    const exposureEnd = this.clock.now();
    this.view.blankStimuli();

    if (this.accepted === null) {
      this.phase = 'held-open';
      await new Promise<void>((resolve) => {
        this.keyWaiter = resolve;
      });
    }
    this.phase = 'done';

    // handleKey mutates this.accepted from outside this control flow
    const outcome = this.accepted as { key: ResponseKey; rtMs: number } | null;
    if (outcome === null) throw new Error('trial resolved without a response');
    return {
      key: outcome.key,
      rtMs: outcome.rtMs,
      timing: {
        fixationMs: this.exposureStart - fixationStart,
        exposureMs: exposureEnd - this.exposureStart,
      },
    };
  }
}
