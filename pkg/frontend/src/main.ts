/**
 * DOM wiring for the 2AFC client.
 *
 * Stimuli render at fixed pixel offsets; mapping visual degrees to
 * screen pixels needs a chin-rest/monitor calibration that lives
 * outside this software (see the calibration note in the page footer).
 */

import { SessionApi } from './api.js';
import { drawResults, reductionReadout } from './results.js';
import { SessionController } from './session.js';
import { StageView } from './trial.js';
import { ResultsPayload, TrialPayload } from './types.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

class DomStage implements StageView {
  private left = el<HTMLImageElement>('left-image');

  private right = el<HTMLImageElement>('right-image');

  private cross = el<HTMLDivElement>('fixation-cross');

  private markers = Array.from(
    document.querySelectorAll<HTMLDivElement>('.marker-line'),
  );

  private progress = el<HTMLDivElement>('progress');

  private notice = el<HTMLDivElement>('stage-notice');

  showFixation(_cross: [number, number]): void {
    this.left.style.visibility = 'hidden';
    this.right.style.visibility = 'hidden';
    for (const m of this.markers) m.style.visibility = 'hidden';
    this.cross.style.visibility = 'visible';
    this.notice.textContent = '';
  }

  showStimuli(payload: TrialPayload): void {
    this.left.src = `data:image/png;base64,${payload.left_image}`;
    this.right.src = `data:image/png;base64,${payload.right_image}`;
    this.left.style.visibility = 'visible';
    this.right.style.visibility = 'visible';
    // two red lines bracket the comparison band on each stimulus
    const [y0, y1] = payload.marker!.rows;
    this.markers.forEach((line, i) => {
      line.style.top = `${i % 2 === 0 ? y0 : y1}px`;
      line.style.visibility = 'visible';
    });
  }

  blankStimuli(): void {
    this.left.style.visibility = 'hidden';
    this.right.style.visibility = 'hidden';
    for (const m of this.markers) m.style.visibility = 'hidden';
    this.notice.textContent = 'Respond now: 1 = left target brighter, 2 = right';
  }

  setProgress(index: number, total: number): void {
    this.progress.textContent = `trial ${index + 1} / ${total}`;
  }
}

function showResults(results: ResultsPayload): void {
  el<HTMLDivElement>('stage').style.display = 'none';
  el<HTMLDivElement>('results').style.display = 'block';
  const canvas = el<HTMLCanvasElement>('curve');
  const ctx = canvas.getContext('2d');
  if (ctx) drawResults(ctx, canvas.width, canvas.height, results);
  el<HTMLDivElement>('reduction-readout').textContent = reductionReadout(results);
  el<HTMLDivElement>('fit-summary').textContent = results.fit.warning
    ? `fit warning: ${results.fit.warning}`
    : `PSE ${results.fit.pse.toFixed(2)}, slope sigma ${results.fit.slope_sigma.toFixed(2)}, ` +
      `${results.n_trials} trials${results.partial ? ' (partial session)' : ''}`;
}

function main(): void {
  const api = new SessionApi('');
  const controller = new SessionController(api, new DomStage(), {
    onResults: showResults,
    onError: (message) => {
      el<HTMLDivElement>('stage-notice').textContent = `error: ${message}`;
    },
  });

  document.addEventListener('keydown', (event) => {
    controller.handleKey(event.key);
  });

  el<HTMLFormElement>('setup').addEventListener('submit', (event) => {
    event.preventDefault();
    el<HTMLDivElement>('setup-panel').style.display = 'none';
    el<HTMLDivElement>('stage').style.display = 'block';
    const subject = el<HTMLInputElement>('subject').value || 'anonymous';
    const family = el<HTMLSelectElement>('family').value;
    const trials = parseInt(el<HTMLInputElement>('trials').value, 10) || 110;
    void controller.run(subject, family, trials);
  });
}

main();
