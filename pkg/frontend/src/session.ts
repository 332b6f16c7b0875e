/** Session loop: create, run every trial, post each response once, show results. */

import { SessionApi } from './api.js';
import { StageView, TrialRunner } from './trial.js';
import { Clock, realClock } from './timing.js';
import { ResultsPayload } from './types.js';

export interface SessionEvents {
  onResults(results: ResultsPayload): void;
  onError(message: string): void;
}

export class SessionController {
  readonly runner: TrialRunner;

  private sessionId: string | null = null;

  constructor(
    private api: SessionApi,
    view: StageView,
    private events: SessionEvents,
    private clock: Clock = realClock,
  ) {
    this.runner = new TrialRunner(view, clock);
  }

  /** Forward raw keyboard input to the active trial. */
  handleKey(rawKey: string): void {
    this.runner.handleKey(rawKey);
  }

  async run(subjectId: string, family: string, nTrials: number, seed?: number): Promise<void> {
    try {
      const info = await this.api.createSession(subjectId, family, nTrials, seed);
      this.sessionId = info.session_id;
      for (;;) {
        const trial = await this.api.fetchTrial(info.session_id);
        if (trial.done) break;
        const outcome = await this.runner.run(trial);
        await this.api.postResponse(
          info.session_id,
          trial.trial_id as string,
          outcome.key,
          outcome.rtMs,
        );
        await this.clock.after(trial.inter_trial_ms ?? 500);
      }
      this.events.onResults(await this.api.fetchResults(info.session_id));
    } catch (err) {
      this.events.onError(err instanceof Error ? err.message : String(err));
    }
  }

  get id(): string | null {
    return this.sessionId;
  }
}
