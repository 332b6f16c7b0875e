/**
 * Results rendering: psychometric scatter, fitted curve, PSE marker,
 * and the reduction readout (the server-reported number, verbatim).
 */

import { FitPayload, ResultsPayload } from './types.js';

/** Abramowitz-Stegun 7.1.26 erf approximation (|error| < 1.5e-7). */
export function erf(x: number): number {
  const sign = x < 0 ? -1 : 1;
  const ax = Math.abs(x);
  const t = 1 / (1 + 0.3275911 * ax);
  const poly =
    t * (0.254829592 + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
  return sign * (1 - poly * Math.exp(-ax * ax));
}

export function normCdf(z: number): number {
  return 0.5 * (1 + erf(z / Math.SQRT2));
}

/** P(standard judged brighter | d) under the fitted curve. */
export function fittedProbability(fit: FitPayload, d: number): number {
  const z = (d - fit.pse) / fit.slope_sigma;
  return fit.family === 'logistic' ? 1 / (1 + Math.exp(-z)) : normCdf(z);
}

export function curvePoints(
  fit: FitPayload,
  dMin: number,
  dMax: number,
  n = 200,
): Array<[number, number]> {
  const pts: Array<[number, number]> = [];
  for (let i = 0; i < n; i++) {
    const d = dMin + ((dMax - dMin) * i) / (n - 1);
    pts.push([d, fittedProbability(fit, d)]);
  }
  return pts;
}

/** The number shown to the subject is exactly the server's value. */
export function reductionReadout(results: ResultsPayload): string {
  if (results.reduction === null) {
    return results.reduction_error ?? 'no reduction estimate (degenerate fit)';
  }
  return String(results.reduction.reduction);
}

export interface PlotContext {
  // the subset of CanvasRenderingContext2D the plot uses
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
}

const MARGIN = 40;

export function drawResults(
  ctx: PlotContext,
  width: number,
  height: number,
  results: ResultsPayload,
): void {
  ctx.clearRect(0, 0, width, height);
  const ds = results.points.map((p) => p.d);
  const dMin = Math.min(...ds);
  const dMax = Math.max(...ds);
  const x = (d: number) => MARGIN + ((d - dMin) / (dMax - dMin || 1)) * (width - 2 * MARGIN);
  const y = (p: number) => height - MARGIN - p * (height - 2 * MARGIN);

  // axes and the 0.5 guide line
  ctx.strokeStyle = '#444';
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(MARGIN, y(0));
  ctx.lineTo(width - MARGIN, y(0));
  ctx.moveTo(MARGIN, y(0));
  ctx.lineTo(MARGIN, y(1));
  ctx.stroke();
  ctx.strokeStyle = '#999';
  ctx.beginPath();
  ctx.moveTo(MARGIN, y(0.5));
  ctx.lineTo(width - MARGIN, y(0.5));
  ctx.stroke();

  // response proportions
  ctx.fillStyle = '#1565c0';
  for (const p of results.points) {
    ctx.beginPath();
    ctx.arc(x(p.d), y(p.proportion), 4, 0, 2 * Math.PI);
    ctx.fill();
  }

  // fitted curve and PSE marker
  if (!results.fit.warning) {
    ctx.strokeStyle = '#1565c0';
    ctx.lineWidth = 2;
    ctx.beginPath();
    const pts = curvePoints(results.fit, dMin, dMax);
    pts.forEach(([d, p], i) => (i === 0 ? ctx.moveTo(x(d), y(p)) : ctx.lineTo(x(d), y(p))));
    ctx.stroke();
    ctx.strokeStyle = '#c62828';
    ctx.lineWidth = 1;
    ctx.beginPath();
    ctx.moveTo(x(results.fit.pse), y(0));
    ctx.lineTo(x(results.fit.pse), y(1));
    ctx.stroke();
    ctx.fillStyle = '#c62828';
    ctx.fillText(`PSE ${results.fit.pse.toFixed(1)}`, x(results.fit.pse) + 4, y(0.95));
  }

  ctx.fillStyle = '#222';
  ctx.font = '12px sans-serif';
  ctx.fillText('standard - comparator luminance difference d', width / 2 - 120, height - 10);
}
