"""Two-alternative forced-choice sessions and psychometric analysis.

A trial shows an illusion (the comparator, with a marked target region
of known physical intensity) next to an 11-segment standard strip whose
segment order is rescrambled every trial. The subject reports which
target looks brighter. Responses aggregate into psychometric points
over the luminance difference

    d = standard segment intensity - comparator physical intensity,

a maximum-likelihood psychometric function is fitted, and the illusory
reduction is read off the point of subjective equality: at PSE the
standard matches the comparator's *perceived* intensity, so

    reduction = -PSE,    perceived = physical - reduction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import FitError, ParameterError, ProtocolError
from .rng import substream
from .stimuli import spec_from_dict, spec_to_dict, target_intensity

# fixed segment intensities of the standard strip
STANDARD_LEVELS = (13, 36, 59, 82, 105, 128, 150, 173, 196, 219, 242)
N_SEGMENTS = len(STANDARD_LEVELS)
CENTER_SEGMENT = N_SEGMENTS // 2

SESSION_LOG_VERSION = 1

# families eligible as comparators; Hermann is excluded because its
# illusory blobs are not physically present, so there is nothing whose
# intensity a standard segment could match
COMPARATOR_FAMILIES = ("sbc", "white", "grating", "grid")


@dataclass(frozen=True)
class StandardTarget:
    """One presentation of the 11-segment standard strip.

    ``permutation[slot]`` is the index into STANDARD_LEVELS shown at
    display slot ``slot`` (slot 0 topmost). The comparison segment is
    the slot at marker height.
    """

    permutation: tuple[int, ...]
    comparison_segment_index: int = CENTER_SEGMENT

    def __post_init__(self):
        if sorted(self.permutation) != list(range(N_SEGMENTS)):
            raise ParameterError("permutation must be a bijection over 11 slots")
        if not 0 <= self.comparison_segment_index < N_SEGMENTS:
            raise ParameterError("comparison_segment_index out of range")

    @property
    def segment_intensities(self) -> tuple[int, ...]:
        return tuple(STANDARD_LEVELS[i] for i in self.permutation)

    @property
    def comparison_level(self) -> int:
        return STANDARD_LEVELS[self.permutation[self.comparison_segment_index]]


@dataclass(frozen=True)
class TrialSpec:
    trial_id: str
    comparator_spec: object
    comparator_intensity: int
    standard: StandardTarget
    comparator_side: str            # 'left' or 'right'
    fixation_ms: int = 1000
    exposure_ms: int = 3000

    @property
    def d(self) -> int:
        return self.standard.comparison_level - self.comparator_intensity


@dataclass(frozen=True)
class TrialResult:
    trial_id: str
    response: str                   # 'comparator_brighter' or 'standard_brighter'
    reaction_ms: float
    d: int

    def __post_init__(self):
        if self.response not in ("comparator_brighter", "standard_brighter"):
            raise ParameterError(f"unknown response {self.response!r}")


@dataclass(frozen=True)
class PsychometricPoint:
    d: float
    n_trials: int
    n_standard_brighter: int

    def __post_init__(self):
        if not 0 <= self.n_standard_brighter <= self.n_trials:
            raise ParameterError("counts must satisfy 0 <= k <= n")

    @property
    def proportion(self) -> float:
        return self.n_standard_brighter / self.n_trials


@dataclass(frozen=True)
class PsychometricFit:
    family: str
    pse: float
    slope_sigma: float
    log_likelihood: float
    n_trials: int
    warning: str | None = None


@dataclass(frozen=True)
class IllusoryReduction:
    comparator_intensity: int
    reduction: float

    @property
    def perceived_intensity(self) -> float:
        return self.comparator_intensity - self.reduction


def response_from_key(key: str) -> str:
    """Map the response keys to their meaning: ONE reports the comparator
    brighter than the standard, TWO the reverse."""
    if key == "ONE":
        return "comparator_brighter"
    if key == "TWO":
        return "standard_brighter"
    raise ParameterError(f"unknown key {key!r}, expected 'ONE' or 'TWO'")


# ---------------------------------------------------------------------------
# scheduling
# ---------------------------------------------------------------------------

def schedule_session(stimuli, n_trials: int, seed: int) -> list[TrialSpec]:
    """Seeded trial schedule: balanced sides, per-trial rescrambled
    standard, comparator drawn from the supplied stimulus specs."""
    stimuli = list(stimuli)
    if not stimuli:
        raise ProtocolError("empty comparator stimulus set")
    for spec in stimuli:
        if spec.family == "hermann":
            raise ProtocolError(
                "hermann stimuli cannot serve as comparators: the blobs are "
                "not physically present"
            )
    if n_trials < N_SEGMENTS:
        raise ProtocolError(f"need at least {N_SEGMENTS} trials, got {n_trials}")

    sides = ["left", "right"] * (n_trials // 2) + ["left"] * (n_trials % 2)
    session_rng = substream(seed, "session")
    sides = [sides[i] for i in session_rng.permutation(n_trials)]

    trials = []
    for i in range(n_trials):
        rng = substream(seed, "trial", i)
        perm = tuple(int(v) for v in rng.permutation(N_SEGMENTS))
        spec = stimuli[int(rng.integers(len(stimuli)))]
        trials.append(
            TrialSpec(
                trial_id=f"t{i:05d}",
                comparator_spec=spec,
                comparator_intensity=target_intensity(spec),
                standard=StandardTarget(permutation=perm),
                comparator_side=sides[i],
            )
        )
    return trials


def default_comparator_specs(family: str, intensity: int = 150):
    """A small comparator pool per family, target fixed at `intensity`."""
    from .stimuli import GratingSpec, GridSpec, SbcSpec, WhiteSpec

    if family == "sbc":
        return [
            SbcSpec(patch_intensity=intensity, dark_bg=d, bright_bg=b,
                    patch_aspect=a, patch_width=w)
            for d, b in ((0, 255), (30, 230))
            for a in (0.2, 0.4, 0.8)
            for w in (48, 64, 96)
        ]
    if family == "white":
        return [
            WhiteSpec(patch_intensity=intensity, stripe_period=p, patch_length=l)
            for p in (16, 32, 64)
            for l in (48, 64, 96)
        ]
    if family == "grating":
        return [
            GratingSpec(test_bar_intensity=intensity, cycles_per_degree=c,
                        degrees_per_image=1.0, test_bar_height=h)
            for c in (6.0, 8.0, 12.0)
            for h in (24, 32, 48)
        ]
    if family == "grid":
        return [
            GridSpec(variant=v, patch_intensity=intensity, cell_size=c, line_width=w)
            for v in ("upper", "lower")
            for c, w in ((32, 6), (40, 8), (48, 10))
        ]
    if family == "hermann":
        raise ProtocolError("hermann illusions cannot be validated with 2AFC")
    raise ParameterError(f"no comparator pool for family {family!r}")


# ---------------------------------------------------------------------------
# standard strip rendering
# ---------------------------------------------------------------------------

STRIP_WIDTH = 80
SEGMENT_HEIGHT = 20
STRIP_BACKGROUND = 32


def standard_strip_layout(canvas=(256, 256)):
    """Row bands [(y0, y1)] of the 11 display slots, and the strip's
    column span (x0, x1). The center slot straddles the canvas midline,
    which is where the marker lines sit."""
    width, height = canvas
    total = N_SEGMENTS * SEGMENT_HEIGHT
    y0 = height // 2 - total // 2
    x0 = width // 2 - STRIP_WIDTH // 2
    bands = [(y0 + s * SEGMENT_HEIGHT, y0 + (s + 1) * SEGMENT_HEIGHT)
             for s in range(N_SEGMENTS)]
    return bands, (x0, x0 + STRIP_WIDTH)


def render_standard_strip(standard: StandardTarget, canvas=(256, 256)) -> np.ndarray:
    """Raster of the standard: 11 stacked segments in display order."""
    width, height = canvas
    img = np.full((height, width), STRIP_BACKGROUND, dtype=np.uint8)
    bands, (x0, x1) = standard_strip_layout(canvas)
    for (band_y0, band_y1), intensity in zip(bands, standard.segment_intensities):
        img[band_y0:band_y1, x0:x1] = intensity
    return img


def marker_rows(standard: StandardTarget, canvas=(256, 256)) -> tuple[int, int]:
    """Row band of the comparison segment (where the red marker lines go)."""
    bands, _ = standard_strip_layout(canvas)
    return bands[standard.comparison_segment_index]


# ---------------------------------------------------------------------------
# simulated observer
# ---------------------------------------------------------------------------

def simulate_observer(true_reduction: float, noise_sigma: float,
                      schedule, seed: int = 0) -> list[TrialResult]:
    """Gaussian observer: perceives the comparator dimmed by
    ``true_reduction`` plus noise, and reports whichever target looks
    brighter. Validation oracle for the whole fitting pipeline."""
    if noise_sigma <= 0:
        raise ParameterError("noise_sigma must be > 0")
    results = []
    for i, trial in enumerate(schedule):
        rng = substream(seed, "sim", i)
        perceived = trial.comparator_intensity - true_reduction + rng.normal(0.0, noise_sigma)
        standard_level = trial.standard.comparison_level
        response = "standard_brighter" if standard_level > perceived else "comparator_brighter"
        reaction = float(np.clip(rng.normal(650.0, 120.0), 150.0, 3000.0))
        results.append(TrialResult(trial.trial_id, response, reaction, trial.d))
    return results


# ---------------------------------------------------------------------------
# aggregation and fitting
# ---------------------------------------------------------------------------

def aggregate(results) -> list[PsychometricPoint]:
    """Group results by luminance difference d, sorted ascending."""
    results = list(results)
    if not results:
        raise ParameterError("no results to aggregate")
    counts: dict[float, list[int]] = {}
    for r in results:
        n, k = counts.setdefault(r.d, [0, 0])
        counts[r.d][0] = n + 1
        counts[r.d][1] = k + (r.response == "standard_brighter")
    return [PsychometricPoint(d, n, k) for d, (n, k) in sorted(counts.items())]


def _psychometric_p(d, pse, sigma, family):
    from scipy.special import erf, expit

    z = (np.asarray(d, dtype=np.float64) - pse) / sigma
    if family == "cumulative_gaussian":
        p = 0.5 * (1.0 + erf(z / np.sqrt(2.0)))
    elif family == "logistic":
        p = expit(z)
    else:
        raise ParameterError(f"unknown psychometric family {family!r}")
    return np.clip(p, 1e-12, 1.0 - 1e-12)


def log_likelihood(points, pse: float, sigma: float,
                   family: str = "cumulative_gaussian") -> float:
    """Binomial log-likelihood of P(standard brighter | d) = F((d - pse)/sigma)."""
    d = np.array([p.d for p in points], dtype=np.float64)
    n = np.array([p.n_trials for p in points], dtype=np.float64)
    k = np.array([p.n_standard_brighter for p in points], dtype=np.float64)
    prob = _psychometric_p(d, pse, sigma, family)
    return float(np.sum(k * np.log(prob) + (n - k) * np.log(1.0 - prob)))


GRID_POINTS = 41
GRID_ITERATIONS = 9


def fit_psychometric(points, family: str = "cumulative_gaussian") -> PsychometricFit:
    """Maximum-likelihood fit by deterministic grid refinement.

    A fixed budget of shrinking (pse, sigma) grids makes fits
    bit-reproducible and, on these smooth unimodal likelihoods,
    converges well past 1e-6 log-likelihood accuracy.
    """
    points = sorted(points, key=lambda p: p.d)
    informative = [p for p in points if p.n_trials > 0]
    if len({p.d for p in informative}) < 3:
        raise FitError("need >= 3 distinct d values with trials")

    d_vals = np.array([p.d for p in informative], dtype=np.float64)
    n = np.array([p.n_trials for p in informative], dtype=np.float64)
    k = np.array([p.n_standard_brighter for p in informative], dtype=np.float64)
    n_total = int(n.sum())
    d_min, d_max = float(d_vals.min()), float(d_vals.max())
    spacing = float(np.diff(np.unique(d_vals)).min())

    # saturated data carries no PSE information: flag and pin to a boundary
    if np.all(k == n) or np.all(k == 0):
        boundary = d_min - spacing if np.all(k == n) else d_max + spacing
        ll = log_likelihood(informative, boundary, spacing, family)
        return PsychometricFit(family, boundary, spacing, ll, n_total,
                               warning="saturated: all responses identical")

    pse_lo, pse_hi = d_min - spacing, d_max + spacing
    sig_lo, sig_hi = 0.05, 2.0 * (d_max - d_min + spacing)

    def grid_max(p_lo, p_hi, s_lo, s_hi):
        from scipy.special import erf, expit

        pse_grid = np.linspace(p_lo, p_hi, GRID_POINTS)
        sig_grid = np.linspace(s_lo, s_hi, GRID_POINTS)
        z = (d_vals[None, None, :] - pse_grid[:, None, None]) / sig_grid[None, :, None]
        if family == "cumulative_gaussian":
            prob = 0.5 * (1.0 + erf(z / np.sqrt(2.0)))
        else:
            prob = expit(z)
        prob = np.clip(prob, 1e-12, 1.0 - 1e-12)
        ll = np.sum(k * np.log(prob) + (n - k) * np.log(1.0 - prob), axis=2)
        i, j = np.unravel_index(int(np.argmax(ll)), ll.shape)
        return float(pse_grid[i]), float(sig_grid[j]), float(ll[i, j])

    p_lo, p_hi, s_lo, s_hi = pse_lo, pse_hi, sig_lo, sig_hi
    best_pse, best_sig, best_ll = grid_max(p_lo, p_hi, s_lo, s_hi)
    for _ in range(GRID_ITERATIONS - 1):
        p_step = (p_hi - p_lo) / (GRID_POINTS - 1)
        s_step = (s_hi - s_lo) / (GRID_POINTS - 1)
        p_lo = max(pse_lo, best_pse - 1.5 * p_step)
        p_hi = min(pse_hi, best_pse + 1.5 * p_step)
        s_lo = max(sig_lo, best_sig - 1.5 * s_step)
        s_hi = min(sig_hi, best_sig + 1.5 * s_step)
        best_pse, best_sig, best_ll = grid_max(p_lo, p_hi, s_lo, s_hi)

    warning = None
    if np.all(k * 2 == n):
        warning = "flat: responses balanced at every level, PSE undefined"
    elif best_sig >= 0.999 * sig_hi and best_sig >= 0.999 * (2.0 * (d_max - d_min + spacing)):
        warning = "flat: slope at bound, PSE poorly constrained"
    return PsychometricFit(family, best_pse, best_sig, best_ll, n_total, warning=warning)


def illusory_reduction(fit: PsychometricFit, comparator_intensity: int) -> IllusoryReduction:
    """Reduction read off the PSE: the standard matches the comparator
    when dimmed by the reduction, so reduction = -PSE."""
    if fit.warning is not None:
        raise FitError(f"cannot derive a reduction from a degenerate fit ({fit.warning})")
    return IllusoryReduction(comparator_intensity, reduction=-fit.pse)


# ---------------------------------------------------------------------------
# reduction tables
# ---------------------------------------------------------------------------

TABLE_FAMILIES = ("sbc", "white", "grating", "grid")
TABLE_HEADERS = ("SBC Illusion", "White Illusion", "Grating Illusion", "Grid Illusion")


def reduction_table(cells: dict) -> dict:
    """Per-subject reductions plus a per-family average row.

    ``cells`` maps (subject, family) to a reduction (float or
    IllusoryReduction). Families are the four 2AFC-eligible ones, in
    fixed column order; missing cells stay absent and averages run over
    the present cells only.
    """
    subjects = sorted({s for s, _ in cells})
    rows = []
    for subject in subjects:
        row = {"subject": subject}
        for fam in TABLE_FAMILIES:
            value = cells.get((subject, fam))
            if value is not None:
                row[fam] = float(getattr(value, "reduction", value))
        rows.append(row)
    averages = {}
    for fam in TABLE_FAMILIES:
        vals = [row[fam] for row in rows if fam in row]
        if vals:
            averages[fam] = float(np.mean(vals))
    return {"families": list(TABLE_FAMILIES), "headers": list(TABLE_HEADERS),
            "rows": rows, "average": averages}


def reduction_table_csv(table: dict) -> str:
    lines = ["subject," + ",".join(table["headers"])]
    for row in table["rows"]:
        cells = [str(row["subject"])]
        cells += [f"{row[f]:.2f}" if f in row else "" for f in table["families"]]
        lines.append(",".join(cells))
    avg = table["average"]
    lines.append("average," + ",".join(
        f"{avg[f]:.2f}" if f in avg else "" for f in table["families"]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# session log serialization (append-only JSONL)
# ---------------------------------------------------------------------------

def trial_to_dict(trial: TrialSpec) -> dict:
    return {
        "trial_id": trial.trial_id,
        "comparator_spec": spec_to_dict(trial.comparator_spec),
        "comparator_intensity": trial.comparator_intensity,
        "permutation": list(trial.standard.permutation),
        "comparison_segment_index": trial.standard.comparison_segment_index,
        "comparator_side": trial.comparator_side,
        "fixation_ms": trial.fixation_ms,
        "exposure_ms": trial.exposure_ms,
    }


def trial_from_dict(record: dict) -> TrialSpec:
    return TrialSpec(
        trial_id=record["trial_id"],
        comparator_spec=spec_from_dict(record["comparator_spec"]),
        comparator_intensity=record["comparator_intensity"],
        standard=StandardTarget(
            permutation=tuple(record["permutation"]),
            comparison_segment_index=record["comparison_segment_index"],
        ),
        comparator_side=record["comparator_side"],
        fixation_ms=record["fixation_ms"],
        exposure_ms=record["exposure_ms"],
    )


def result_to_dict(result: TrialResult) -> dict:
    return {
        "trial_id": result.trial_id,
        "response": result.response,
        "reaction_ms": result.reaction_ms,
        "d": result.d,
    }


def result_from_dict(record: dict) -> TrialResult:
    return TrialResult(record["trial_id"], record["response"],
                       record["reaction_ms"], record["d"])


def write_session_log(path, header: dict, pairs) -> None:
    """Write a full session log: one header line, then one
    trial/result pair per line."""
    with open(path, "w") as fh:
        fh.write(json.dumps({"type": "session", "version": SESSION_LOG_VERSION,
                             **header}) + "\n")
        for trial, result in pairs:
            fh.write(json.dumps({
                "type": "trial", "version": SESSION_LOG_VERSION,
                "trial": trial_to_dict(trial), "result": result_to_dict(result),
            }) + "\n")


def read_session_log(path):
    """-> (header dict, list of (TrialSpec, TrialResult))."""
    header = None
    pairs = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            if record.get("type") == "session":
                header = record
            elif record.get("type") == "trial":
                pairs.append((trial_from_dict(record["trial"]),
                              result_from_dict(record["result"])))
    if header is None:
        raise ParameterError(f"{path} has no session header line")
    return header, pairs
