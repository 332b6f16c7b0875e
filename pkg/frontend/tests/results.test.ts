import { describe, expect, it } from 'vitest';

import { curvePoints, erf, fittedProbability, normCdf, reductionReadout } from '../src/results.js';
import { ResultsPayload } from '../src/types.js';

const RESULTS: ResultsPayload = {
  session_id: 'abc',
  subject_id: 's1',
  family: 'sbc',
  status: 'complete',
  partial: false,
  n_trials: 500,
  points: [
    { d: -137, n_trials: 45, n_standard_brighter: 0, proportion: 0 },
    { d: -45, n_trials: 45, n_standard_brighter: 8, proportion: 0.178 },
    { d: 0, n_trials: 45, n_standard_brighter: 44, proportion: 0.978 },
    { d: 92, n_trials: 45, n_standard_brighter: 45, proportion: 1 },
  ],
  fit: {
    family: 'cumulative_gaussian',
    pse: -35.028,
    slope_sigma: 10.4,
    log_likelihood: -120.5,
    n_trials: 500,
    warning: null,
  },
  reduction: { comparator_intensity: 150, reduction: 35.028, perceived_intensity: 114.972 },
};

describe('results view', () => {
  it('erf approximation is accurate', () => {
    expect(erf(0)).toBeCloseTo(0, 7);
    expect(erf(1)).toBeCloseTo(0.8427007929, 6);
    expect(erf(-1)).toBeCloseTo(-0.8427007929, 6);
    expect(normCdf(0)).toBeCloseTo(0.5, 7);
    expect(normCdf(1.96)).toBeCloseTo(0.975, 3);
  });

  it('fitted curve crosses 0.5 at the PSE', () => {
    expect(fittedProbability(RESULTS.fit, RESULTS.fit.pse)).toBeCloseTo(0.5, 6);
    const pts = curvePoints(RESULTS.fit, -137, 92, 400);
    // probability is monotone in d and brackets 0.5 around the PSE
    for (let i = 1; i < pts.length; i++) expect(pts[i][1]).toBeGreaterThanOrEqual(pts[i - 1][1]);
    const below = pts.filter(([d]) => d < RESULTS.fit.pse - 1).every(([, p]) => p < 0.5);
    const above = pts.filter(([d]) => d > RESULTS.fit.pse + 1).every(([, p]) => p > 0.5);
    expect(below && above).toBe(true);
  });

  it('reduction readout is the server value verbatim', () => {
    expect(reductionReadout(RESULTS)).toBe('35.028');
    expect(reductionReadout({ ...RESULTS, reduction: { ...RESULTS.reduction!, reduction: 32.95 } }))
      .toBe('32.95');
  });

  it('degenerate fits fall back to a notice', () => {
    const degenerate: ResultsPayload = {
      ...RESULTS,
      reduction: null,
      reduction_error: 'cannot derive a reduction from a degenerate fit (flat)',
    };
    expect(reductionReadout(degenerate)).toContain('degenerate');
  });
});
