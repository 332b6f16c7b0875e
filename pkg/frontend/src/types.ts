/** Payload shapes of the session server's JSON API. */

export interface SessionInfo {
  session_id: string;
  n_trials: number;
  family: string;
  seed: number;
}

export interface MarkerGeometry {
  /** Row band [y0, y1) of the comparison segment, in image pixels. */
  rows: [number, number];
  /** Fixation cross center [x, y], in image pixels. */
  cross: [number, number];
}

export interface TrialPayload {
  done: boolean;
  trial_id?: string;
  trial_index: number;
  n_trials: number;
  left_image?: string;
  right_image?: string;
  marker?: MarkerGeometry;
  fixation_ms?: number;
  exposure_ms?: number;
  inter_trial_ms?: number;
}

export interface PsychometricPointPayload {
  d: number;
  n_trials: number;
  n_standard_brighter: number;
  proportion: number;
}

export interface FitPayload {
  family: string;
  pse: number;
  slope_sigma: number;
  log_likelihood: number;
  n_trials: number;
  warning: string | null;
}

export interface ReductionPayload {
  comparator_intensity: number;
  reduction: number;
  perceived_intensity: number;
}

export interface ResultsPayload {
  session_id: string;
  subject_id: string;
  family: string;
  status: string;
  partial: boolean;
  n_trials: number;
  points: PsychometricPointPayload[];
  fit: FitPayload;
  reduction: ReductionPayload | null;
  reduction_error?: string;
}

export type ResponseKey = 'ONE' | 'TWO';
