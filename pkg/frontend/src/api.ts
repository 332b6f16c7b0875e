/** Typed client for the session server, with idempotent response posting. */

import { ResponseKey, ResultsPayload, SessionInfo, TrialPayload } from './types.js';

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && body.detail) detail = String(body.detail);
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class SessionApi {
  constructor(
    private baseUrl: string = '',
    private fetchFn: typeof fetch = fetch.bind(globalThis),
  ) {}

  createSession(subjectId: string, family: string, nTrials: number, seed?: number): Promise<SessionInfo> {
    return this.fetchFn(`${this.baseUrl}/sessions`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({
        subject_id: subjectId,
        family,
        n_trials: nTrials,
        ...(seed === undefined ? {} : { seed }),
      }),
    }).then((r) => asJson<SessionInfo>(r));
  }

  fetchTrial(sessionId: string): Promise<TrialPayload> {
    return this.fetchFn(`${this.baseUrl}/sessions/${sessionId}/trial`).then((r) =>
      asJson<TrialPayload>(r),
    );
  }

  /**
   * Post a response; retries transient failures. The server rejects a
   * second answer for the same trial with 409, so a retry after a lost
   * acknowledgement is safe and treated as delivered.
   */
  async postResponse(
    sessionId: string,
    trialId: string,
    key: ResponseKey,
    rtMs: number,
    retries = 3,
  ): Promise<void> {
    let lastError: unknown = null;
    for (let attempt = 0; attempt <= retries; attempt++) {
      try {
        const response = await this.fetchFn(`${this.baseUrl}/sessions/${sessionId}/responses`, {
          method: 'POST',
          headers: { 'Content-Type': 'application/json' },
          body: JSON.stringify({ trial_id: trialId, key, rt_ms: rtMs }),
        });
        if (response.ok) return;
        if (response.status === 409) return; // already recorded server-side
        throw new ApiError(response.status, await response.text());
      } catch (err) {
        if (err instanceof ApiError) throw err;
        lastError = err; // network failure: retry
      }
    }
    throw lastError instanceof Error ? lastError : new Error('response post failed');
  }

  fetchResults(sessionId: string): Promise<ResultsPayload> {
    return this.fetchFn(`${this.baseUrl}/sessions/${sessionId}/results`).then((r) =>
      asJson<ResultsPayload>(r),
    );
  }
}
