"""Localization losses, segmentation/classification metrics, and the
threshold baseline.

Response maps are (H, W) float arrays in [0, 1]; masks are (H, W) bool.
The combined localization loss is ``alpha * MSE + beta * (1 - SSIM)``
with the weights defaulting to 0.4 / 0.6.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import convolve2d

from .errors import DimensionError, ParameterError
from .raster import check_same_shape, load_response_map

DEFAULT_BINARIZE_THRESHOLD = 0.22


@dataclass(frozen=True)
class LossConfig:
    """Weights and SSIM window parameters for the combined loss."""

    alpha: float = 0.4
    beta: float = 0.6
    ssim_window: int = 11
    ssim_sigma: float = 1.5
    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: float = 1.0

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ParameterError("loss weights must be >= 0")
        if abs(self.alpha + self.beta - 1.0) > 1e-12:
            raise ParameterError(f"alpha + beta must equal 1, got {self.alpha + self.beta}")
        if self.ssim_window % 2 == 0 or self.ssim_window < 3:
            raise ParameterError("ssim_window must be odd and >= 3")

    @property
    def c1(self) -> float:
        return (self.k1 * self.dynamic_range) ** 2

    @property
    def c2(self) -> float:
        return (self.k2 * self.dynamic_range) ** 2


def _as_response(a) -> np.ndarray:
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionError(f"response map must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or arr.min() < 0 or arr.max() > 1:
        raise ParameterError("response values must be finite and in [0, 1]")
    return arr


def mse(a, b) -> float:
    """Mean squared per-pixel difference."""
    a, b = _as_response(a), _as_response(b)
    check_same_shape(a, b)
    return float(np.mean((a - b) ** 2))


def gaussian_window(size: int, sigma: float) -> np.ndarray:
    """Normalized 2-D Gaussian kernel."""
    half = (size - 1) / 2.0
    coords = np.arange(size) - half
    g = np.exp(-(coords ** 2) / (2.0 * sigma ** 2))
    kernel = np.outer(g, g)
    return kernel / kernel.sum()


def ssim(a, b, cfg: LossConfig | None = None) -> float:
    """Mean structural similarity over a Gaussian-weighted sliding window.

    Border handling is valid-region convolution (no padding), matching
    the canonical reference implementation. Result lies in [-1, 1] and
    is symmetric in its arguments.
    """
    cfg = cfg or LossConfig()
    a, b = _as_response(a), _as_response(b)
    check_same_shape(a, b)
    if min(a.shape) < cfg.ssim_window:
        raise DimensionError(
            f"image {a.shape} smaller than SSIM window {cfg.ssim_window}"
        )
    win = gaussian_window(cfg.ssim_window, cfg.ssim_sigma)

    mu_a = convolve2d(a, win, mode="valid")
    mu_b = convolve2d(b, win, mode="valid")
    mu_aa = mu_a * mu_a
    mu_bb = mu_b * mu_b
    mu_ab = mu_a * mu_b
    var_a = convolve2d(a * a, win, mode="valid") - mu_aa
    var_b = convolve2d(b * b, win, mode="valid") - mu_bb
    cov = convolve2d(a * b, win, mode="valid") - mu_ab

    c1, c2 = cfg.c1, cfg.c2
    ssim_map = ((2 * mu_ab + c1) * (2 * cov + c2)) / (
        (mu_aa + mu_bb + c1) * (var_a + var_b + c2)
    )
    return float(ssim_map.mean())


def combined_loss(pred, target, cfg: LossConfig | None = None) -> float:
    """alpha * MSE + beta * (1 - SSIM); zero when pred equals target."""
    cfg = cfg or LossConfig()
    return cfg.alpha * mse(pred, target) + cfg.beta * (1.0 - ssim(pred, target, cfg))


def binarize(response, threshold: float = DEFAULT_BINARIZE_THRESHOLD) -> np.ndarray:
    """Threshold a response map to a mask; ties resolve to 1 (>=)."""
    if not 0.0 <= threshold <= 1.0:
        raise ParameterError(f"threshold must be in [0, 1], got {threshold}")
    return _as_response(response) >= threshold


@dataclass
class MetricsReport:
    pixel_accuracy: float
    precision: float
    recall: float
    f1: float
    miou: float
    per_item: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "pixel_accuracy": self.pixel_accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "miou": self.miou,
        }


def _safe_div(num: float, den: float, empty_value: float) -> float:
    return num / den if den > 0 else empty_value


def segmentation_metrics(pred, gt) -> MetricsReport:
    """Pixel metrics over the positive class plus two-class mean IoU.

    Conventions (pinned by tests): empty pred vs empty gt counts as
    vacuous agreement (precision = recall = f1 = 1); an empty gt with a
    nonempty pred gives precision 0; per-class IoU of an empty/empty
    class is 1.
    """
    pred = np.asarray(pred, dtype=bool)
    gt = np.asarray(gt, dtype=bool)
    check_same_shape(pred, gt)

    tp = float(np.sum(pred & gt))
    fp = float(np.sum(pred & ~gt))
    fn = float(np.sum(~pred & gt))
    tn = float(np.sum(~pred & ~gt))
    total = tp + fp + fn + tn

    precision = _safe_div(tp, tp + fp, 1.0 if fn == 0 else 0.0)
    recall = _safe_div(tp, tp + fn, 1.0 if fp == 0 else 0.0)
    if precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        f1 = 0.0
    iou_fg = _safe_div(tp, tp + fp + fn, 1.0)
    iou_bg = _safe_div(tn, tn + fp + fn, 1.0)
    return MetricsReport(
        pixel_accuracy=(tp + tn) / total,
        precision=precision,
        recall=recall,
        f1=f1,
        miou=(iou_fg + iou_bg) / 2.0,
    )


def mask_iou(pred, gt) -> float:
    """Foreground intersection-over-union (1.0 for empty vs empty)."""
    pred = np.asarray(pred, dtype=bool)
    gt = np.asarray(gt, dtype=bool)
    check_same_shape(pred, gt)
    inter = float(np.sum(pred & gt))
    union = float(np.sum(pred | gt))
    return inter / union if union > 0 else 1.0


def classification_metrics(gt_labels, pred_labels, positive: str = "illusion",
                           labels=None) -> MetricsReport:
    """Binary metrics with `positive` as the positive class; label sets
    with more than two classes are macro-averaged. ``labels`` optionally
    declares the legal label set; anything outside it is an error."""
    if len(gt_labels) != len(pred_labels):
        raise DimensionError("label lists must have equal length")
    if len(gt_labels) == 0:
        raise ParameterError("empty label lists")
    classes = sorted(set(gt_labels) | set(pred_labels))
    if labels is not None:
        unknown = set(classes) - set(labels)
        if unknown:
            raise ParameterError(f"unknown labels: {sorted(unknown)}")
        classes = sorted(labels)

    gt = np.asarray(gt_labels)
    pred = np.asarray(pred_labels)
    accuracy = float(np.mean(gt == pred))

    def binary(cls):
        tp = float(np.sum((pred == cls) & (gt == cls)))
        fp = float(np.sum((pred == cls) & (gt != cls)))
        fn = float(np.sum((pred != cls) & (gt == cls)))
        p = _safe_div(tp, tp + fp, 1.0 if fn == 0 else 0.0)
        r = _safe_div(tp, tp + fn, 1.0 if fp == 0 else 0.0)
        f = 2 * p * r / (p + r) if p + r > 0 else 0.0
        return p, r, f

    if len(classes) <= 2 and positive in classes:
        precision, recall, f1 = binary(positive)
    else:
        scores = [binary(c) for c in classes]
        precision = float(np.mean([s[0] for s in scores]))
        recall = float(np.mean([s[1] for s in scores]))
        f1 = float(np.mean([s[2] for s in scores]))
    # two-class mIoU degenerates to accuracy-like IoU; report macro IoU
    ious = []
    for c in classes:
        inter = float(np.sum((pred == c) & (gt == c)))
        union = float(np.sum((pred == c) | (gt == c)))
        ious.append(inter / union if union > 0 else 1.0)
    return MetricsReport(
        pixel_accuracy=accuracy,
        precision=precision,
        recall=recall,
        f1=f1,
        miou=float(np.mean(ious)),
    )


def otsu_threshold(image) -> int:
    """Threshold maximizing between-class variance over a 0-255 scan.

    Pixels <= threshold form the dark class. When the variance is flat
    over a plateau of thresholds (e.g. two-level images), the plateau
    midpoint is returned, so the cut falls strictly between the levels.
    """
    img = np.asarray(image)
    if img.dtype != np.uint8:
        raise ParameterError("otsu expects an 8-bit grayscale image")
    hist = np.bincount(img.ravel(), minlength=256).astype(np.float64)
    total = hist.sum()
    if np.count_nonzero(hist) < 2:
        raise ParameterError("otsu needs at least 2 distinct intensities")

    levels = np.arange(256, dtype=np.float64)
    weight_dark = np.cumsum(hist)
    sum_dark = np.cumsum(hist * levels)
    grand_sum = sum_dark[-1]

    variance = np.full(256, -1.0)
    valid = (weight_dark > 0) & (weight_dark < total)
    wd = weight_dark[valid]
    wb = total - wd
    mean_dark = sum_dark[valid] / wd
    mean_bright = (grand_sum - sum_dark[valid]) / wb
    variance[valid] = wd * wb * (mean_dark - mean_bright) ** 2

    plateau = np.flatnonzero(variance == variance.max())
    return int(plateau.mean())


def otsu_localize(image) -> np.ndarray:
    """Baseline localizer: the darker of Otsu's two classes.

    Because both test patches of an SBC stimulus share one intensity,
    this baseline always assigns them to the same class and cannot
    separate the illusory patch from its twin.
    """
    img = np.asarray(image)
    return img <= otsu_threshold(img)


def evaluate_directory(pred_dir, entries, threshold: float = DEFAULT_BINARIZE_THRESHOLD,
                       cfg: LossConfig | None = None, out_prefix=None) -> MetricsReport:
    """Score a directory of prediction PNGs against ground-truth masks.

    ``entries`` is an iterable of manifest entries (or any objects with
    ``id`` and ``mask_path``). Predictions are looked up as
    ``<pred_dir>/<id>.png``, read as [0, 1] response maps, binarized at
    ``threshold`` and compared to the ground truth. Per-item rows plus
    the aggregate are returned; with ``out_prefix`` the report is also
    written as ``<prefix>.csv`` and ``<prefix>.json``.
    """
    from .raster import load_mask

    cfg = cfg or LossConfig()
    pred_dir = Path(pred_dir)
    rows = []
    for entry in entries:
        entry_id = entry["id"] if isinstance(entry, dict) else entry.id
        mask_path = entry["mask_path"] if isinstance(entry, dict) else entry.mask_path
        pred_path = pred_dir / f"{entry_id}.png"
        if not pred_path.exists():
            raise FileNotFoundError(f"missing prediction for id {entry_id}: {pred_path}")
        response = load_response_map(pred_path)
        gt = load_mask(mask_path)
        if response.shape != gt.shape:
            raise DimensionError(
                f"prediction for id {entry_id} has shape {response.shape}, "
                f"ground truth {gt.shape}"
            )
        item = segmentation_metrics(binarize(response, threshold), gt)
        loss = combined_loss(response, gt.astype(np.float64), cfg)
        rows.append({"id": entry_id, "loss": loss, **item.as_dict()})

    if not rows:
        raise ParameterError("no entries to evaluate")
    agg = {
        key: float(np.mean([r[key] for r in rows]))
        for key in ("pixel_accuracy", "precision", "recall", "f1", "miou")
    }
    report = MetricsReport(per_item=rows, **agg)

    if out_prefix is not None:
        out_prefix = Path(out_prefix)
        out_prefix.parent.mkdir(parents=True, exist_ok=True)
        with open(out_prefix.with_suffix(".csv"), "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
        with open(out_prefix.with_suffix(".json"), "w") as fh:
            json.dump({"aggregate": report.as_dict(), "items": rows}, fh, indent=2)
    return report
