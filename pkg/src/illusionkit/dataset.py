"""Sweep enumeration, corpus building, augmentation, and splits.

The published corpus shape is the contract: per-family target counts
are hit exactly by subsampling configurable parameter grids with a
seeded choice. The grids themselves are a reconstruction; only the
totals are fixed.
"""

from __future__ import annotations

import csv
import hashlib
import itertools
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, ParameterError
from .raster import load_image, save_png
from .rng import substream
from .stimuli import (
    DotInsertionParams,
    NonIllusionSpec,
    OrientationParams,
    SPEC_CLASSES,
    WarpParams,
    differs_enough,
    render_stimulus,
    spec_from_dict,
    spec_id,
    spec_to_dict,
)

log = logging.getLogger(__name__)

MANIFEST_SCHEMA_VERSION = 1

# published per-family corpus sizes
DEFAULT_TARGET_COUNTS = {
    "sbc": 4160,
    "white": 637,
    "hermann": 1024,
    "grating": 6350,
    "grid": 10195,
    "non_illusion": 1149,
}

SWEEP_FAMILY_ORDER = ("sbc", "white", "hermann", "grating", "grid", "non_illusion")


def _default_grids() -> dict:
    """Parameter grids whose valid-combination counts exceed every
    published family total, so exact subsampling is always possible."""
    return {
        "sbc": {
            "patch_intensity": [100, 150, 200, 250],
            "dark_bg": [0, 30, 60, 90],
            "bright_bg": [130, 160, 190, 220, 255],
            "patch_aspect": [0.2, 0.4, 0.8],
            "patch_width": list(range(24, 121, 3)),
        },
        "white": {
            "stripe_period": [8, 16, 24, 32, 48, 64],
            "stripe_dark": [0, 40],
            "stripe_bright": [215, 255],
            "patch_intensity": [100, 150, 200],
            "patch_length": [32, 48, 64, 80, 96, 112, 128],
            "patch_count_per_side": [1, 2, 3],
        },
        "hermann": {
            "square_size": list(range(20, 65, 4)),
            "street_width": [3, 4, 6, 8, 10, 12, 14, 16],
            "square_intensity": [0, 25, 50, 75],
            "street_intensity": [205, 230, 255],
        },
        "grating": {
            "cycles_per_degree": [round(c, 3) for c in np.arange(4.0, 16.001, 0.125)],
            "degrees_per_image": [8.0],
            "waveform": ["square", "sine"],
            "test_bar_intensity": [100, 128, 150, 200],
            "test_bar_height": [16, 24, 32, 48],
            "carrier_amplitude": [60, 90, 127],
        },
        "grid": {
            "variant": ["upper", "lower"],
            "cell_size": list(range(16, 69, 4)),
            "line_width": [2, 4, 6, 8, 10, 12],
            "patch_intensity": [100, 125, 150, 175, 200],
            "bg_intensity": [0, 20, 40, 60, 80],
            "line_intensity": [215, 235, 255],
        },
        "non_illusion": {
            "dot_radii": [4, 6, 8],
            "angles": [15.0, 30.0, 45.0, 60.0, 75.0],
            "warps": [[3.0, 32.0], [3.0, 64.0], [6.0, 32.0], [6.0, 64.0]],
            "base_grids": {
                "hermann": {
                    "square_size": [28, 36, 44, 52],
                    "street_width": [6, 8, 10, 12],
                    "square_intensity": [0, 40],
                    "street_intensity": [215, 255],
                },
                "white": {
                    "stripe_period": [16, 32, 64],
                    "patch_intensity": [100, 150],
                    "patch_length": [64, 96],
                },
                "grid": {
                    "variant": ["upper", "lower"],
                    "cell_size": [32, 40, 48],
                    "line_width": [6, 8],
                },
                "sbc": {
                    "patch_intensity": [100, 150, 200],
                    "patch_aspect": [0.2, 0.4, 0.8],
                    "patch_width": [48, 64, 96],
                },
                "grating": {
                    "cycles_per_degree": [6.0, 8.0, 12.0],
                    "test_bar_intensity": [128, 150],
                    "test_bar_height": [24, 32],
                },
            },
        },
    }


def _tiny_grids() -> dict:
    return {
        "sbc": {
            "patch_intensity": [150],
            "dark_bg": [0, 30],
            "bright_bg": [220, 255],
            "patch_aspect": [0.2, 0.4, 0.8],
            "patch_width": [32, 48, 64, 96],
        },
        "white": {
            "stripe_period": [16, 32, 64],
            "stripe_dark": [0],
            "stripe_bright": [255],
            "patch_intensity": [100, 150],
            "patch_length": [48, 64, 96],
            "patch_count_per_side": [1, 2],
        },
        "hermann": {
            "square_size": [32, 40, 48, 56],
            "street_width": [6, 8, 10],
            "square_intensity": [0, 40],
            "street_intensity": [215, 255],
        },
        "grating": {
            "cycles_per_degree": [4.0, 6.0, 8.0, 10.0, 12.0],
            "degrees_per_image": [8.0],
            "waveform": ["square", "sine"],
            "test_bar_intensity": [128, 150],
            "test_bar_height": [24, 32],
            "carrier_amplitude": [127],
        },
        "grid": {
            "variant": ["upper", "lower"],
            "cell_size": [32, 40, 48],
            "line_width": [6, 8],
            "patch_intensity": [125, 150],
            "bg_intensity": [0, 30],
            "line_intensity": [235, 255],
        },
        "non_illusion": {
            "dot_radii": [5, 7],
            "angles": [30.0, 60.0],
            "warps": [[4.0, 48.0]],
            "base_grids": {
                "hermann": {
                    "square_size": [36, 48],
                    "street_width": [8, 10],
                },
                "white": {"stripe_period": [32], "patch_length": [64]},
                "grid": {"cell_size": [40], "line_width": [8]},
                "sbc": {"patch_width": [64], "patch_aspect": [0.4]},
                "grating": {"cycles_per_degree": [8.0], "test_bar_height": [32]},
            },
        },
    }


@dataclass
class SweepConfig:
    """Per-family parameter grids plus exact target counts and a seed."""

    target_counts: dict = field(default_factory=lambda: dict(DEFAULT_TARGET_COUNTS))
    grids: dict = field(default_factory=_default_grids)
    seed: int = 0

    @classmethod
    def default(cls, seed: int = 0) -> "SweepConfig":
        return cls(seed=seed)

    @classmethod
    def tiny(cls, seed: int = 0) -> "SweepConfig":
        """Desk-scale corpus (<= 200 images) for quick runs and tests."""
        targets = {"sbc": 40, "white": 30, "hermann": 30,
                   "grating": 40, "grid": 40, "non_illusion": 20}
        return cls(target_counts=targets, grids=_tiny_grids(), seed=seed)

    @classmethod
    def from_dict(cls, record: dict) -> "SweepConfig":
        known = {"target_counts", "grids", "seed"}
        unknown = set(record) - known
        if unknown:
            raise ConfigurationError(f"unknown sweep config keys: {sorted(unknown)}")
        base = cls.default()
        targets = dict(base.target_counts)
        targets.update(record.get("target_counts", {}))
        grids = base.grids
        for fam, grid in record.get("grids", {}).items():
            grids[fam] = grid
        return cls(target_counts=targets, grids=grids, seed=record.get("seed", 0))

    def as_dict(self) -> dict:
        return {"target_counts": self.target_counts, "grids": self.grids,
                "seed": self.seed}


def _product_specs(family: str, grid: dict):
    """All valid specs from the cartesian product of a family grid.

    Combinations violating spec invariants (e.g. dark_bg >= patch) are
    expected at grid corners and silently skipped.
    """
    from .errors import IllusionKitError

    cls = SPEC_CLASSES[family]
    keys = list(grid.keys())
    specs = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        try:
            specs.append(cls(**dict(zip(keys, combo))))
        except IllusionKitError:
            continue
    return specs


def _non_illusion_specs(grid: dict):
    """Non-illusion pool: transform x base-spec combinations."""
    base_grids = grid.get("base_grids", {})
    pools = {fam: _product_specs(fam, g) for fam, g in base_grids.items()}
    specs = []
    for base in pools.get("hermann", []):
        for radius in grid.get("dot_radii", []):
            specs.append(NonIllusionSpec(
                base=base, transform="dot_insertion",
                transform_params=DotInsertionParams(dot_radius=radius)))
    for fam in ("hermann", "white", "grid", "sbc", "grating"):
        for base in pools.get(fam, []):
            for angle in grid.get("angles", []):
                specs.append(NonIllusionSpec(
                    base=base, transform="orientation_change",
                    transform_params=OrientationParams(angle_deg=angle)))
    for fam in ("hermann", "white", "grid", "grating"):
        for base in pools.get(fam, []):
            for amp, wavelength in grid.get("warps", []):
                specs.append(NonIllusionSpec(
                    base=base, transform="nonlinear_warp",
                    transform_params=WarpParams(amplitude=amp, wavelength=wavelength)))
    return specs


def enumerate_sweep(config: SweepConfig):
    """Deterministic duplicate-free spec list hitting every target count.

    Oversized grids are subsampled by a seeded uniform choice; a grid
    smaller than its target is a configuration error naming the family.
    """
    all_specs = []
    for fam_index, family in enumerate(SWEEP_FAMILY_ORDER):
        target = config.target_counts.get(family, 0)
        if target == 0:
            continue
        grid = config.grids.get(family)
        if grid is None:
            raise ConfigurationError(f"no parameter grid for family {family!r}")
        pool = (_non_illusion_specs(grid) if family == "non_illusion"
                else _product_specs(family, grid))
        if len(pool) < target:
            raise ConfigurationError(
                f"family {family!r}: grid yields {len(pool)} valid specs, "
                f"target is {target}"
            )
        if len(pool) > target:
            rng = substream(config.seed, "sweep", fam_index)
            keep = np.sort(rng.choice(len(pool), size=target, replace=False))
            pool = [pool[i] for i in keep]
        all_specs.extend(pool)

    ids = [spec_id(s) for s in all_specs]
    if len(set(ids)) != len(ids):
        raise ConfigurationError("sweep produced duplicate spec ids")
    return all_specs


# ---------------------------------------------------------------------------
# manifest
# ---------------------------------------------------------------------------

@dataclass
class ManifestEntry:
    id: str
    family: str
    label: str                      # 'illusion' or 'non_illusion'
    spec: object
    image_path: str = ""
    mask_path: str = ""
    provenance: str = "rendered"    # 'rendered' or 'augmented'
    parent_id: str | None = None
    transform: dict | None = None

    def as_dict(self) -> dict:
        record = {
            "id": self.id,
            "family": self.family,
            "label": self.label,
            "spec": spec_to_dict(self.spec) if self.spec is not None else None,
            "image_path": self.image_path,
            "mask_path": self.mask_path,
            "provenance": self.provenance,
        }
        if self.parent_id is not None:
            record["parent_id"] = self.parent_id
        if self.transform is not None:
            record["transform"] = self.transform
        return record

    @classmethod
    def from_dict(cls, record: dict) -> "ManifestEntry":
        return cls(
            id=record["id"],
            family=record["family"],
            label=record["label"],
            spec=spec_from_dict(record["spec"]) if record.get("spec") else None,
            image_path=record.get("image_path", ""),
            mask_path=record.get("mask_path", ""),
            provenance=record.get("provenance", "rendered"),
            parent_id=record.get("parent_id"),
            transform=record.get("transform"),
        )


def entry_for_spec(spec) -> ManifestEntry:
    label = "non_illusion" if spec.family == "non_illusion" else "illusion"
    return ManifestEntry(id=spec_id(spec), family=spec.family, label=label, spec=spec)


def write_manifest(path, entries, meta: dict | None = None) -> None:
    path = Path(path)
    with open(path, "w") as fh:
        header = {"type": "manifest", "version": MANIFEST_SCHEMA_VERSION}
        header.update(meta or {})
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for entry in entries:
            fh.write(json.dumps(entry.as_dict(), sort_keys=True) + "\n")


def read_manifest(path):
    """-> (header dict, list of ManifestEntry)."""
    header = None
    entries = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            if record.get("type") == "manifest":
                header = record
            else:
                entries.append(ManifestEntry.from_dict(record))
    if header is None:
        raise ConfigurationError(f"{path} has no manifest header line")
    return header, entries


def manifest_to_csv(entries, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "family", "label", "provenance",
                         "image_path", "mask_path", "parent_id"])
        for e in entries:
            writer.writerow([e.id, e.family, e.label, e.provenance,
                             e.image_path, e.mask_path, e.parent_id or ""])


def build_dataset(config: SweepConfig, out_dir, families=None):
    """Render every sweep spec to PNGs plus a JSONL manifest.

    Deterministic end to end: re-running with the same config produces
    byte-identical files. ``families`` optionally restricts the build.
    """
    out_dir = Path(out_dir)
    images_dir = out_dir / "images"
    masks_dir = out_dir / "masks"
    images_dir.mkdir(parents=True, exist_ok=True)
    masks_dir.mkdir(parents=True, exist_ok=True)

    specs = enumerate_sweep(config)
    if families is not None:
        families = set(families)
        specs = [s for s in specs if s.family in families]

    entries = []
    for spec in specs:
        entry = entry_for_spec(spec)
        try:
            img, mask = render_stimulus(spec)
            image_path = images_dir / f"{entry.id}.png"
            mask_path = masks_dir / f"{entry.id}.png"
            save_png(img, image_path)
            save_png(mask, mask_path)
        except Exception as exc:
            raise type(exc)(f"while rendering id {entry.id}: {exc}") from exc
        entry.image_path = str(image_path.relative_to(out_dir))
        entry.mask_path = str(mask_path.relative_to(out_dir))
        entries.append(entry)

    write_manifest(out_dir / "manifest.jsonl", entries,
                   meta={"seed": config.seed,
                         "target_counts": config.target_counts})
    return entries


def load_entry_image(entry: ManifestEntry, root=None) -> np.ndarray:
    """Entry pixels: from disk when built, else rendered from the spec."""
    if entry.image_path and root is not None:
        return load_image(Path(root) / entry.image_path)
    if entry.spec is not None:
        return render_stimulus(entry.spec)[0]
    raise ConfigurationError(f"entry {entry.id} has neither files nor a spec")


# ---------------------------------------------------------------------------
# non-illusion augmentation
# ---------------------------------------------------------------------------

def _resize_nearest(img: np.ndarray, shape) -> np.ndarray:
    """Nearest-neighbor resize keeps values on the 8-bit intensity lattice."""
    h, w = img.shape
    out_h, out_w = shape
    rows = (np.arange(out_h) * h) // out_h
    cols = (np.arange(out_w) * w) // out_w
    return img[np.ix_(rows, cols)]


def apply_augmentation(img: np.ndarray, transform: dict) -> np.ndarray:
    """Replay a recorded augmentation transform on a base image."""
    kind = transform["kind"]
    if kind == "hflip":
        return np.fliplr(img).copy()
    if kind == "vflip":
        return np.flipud(img).copy()
    if kind == "center_crop":
        frac = transform["fraction"]
        h, w = img.shape
        ch, cw = max(1, int(round(h * frac))), max(1, int(round(w * frac)))
        y0, x0 = (h - ch) // 2, (w - cw) // 2
        return _resize_nearest(img[y0:y0 + ch, x0:x0 + cw], img.shape)
    if kind == "random_resized_crop":
        y0, x0 = transform["y0"], transform["x0"]
        ch, cw = transform["height"], transform["width"]
        return _resize_nearest(img[y0:y0 + ch, x0:x0 + cw], img.shape)
    raise ParameterError(f"unknown augmentation kind {kind!r}")


_AUG_KINDS = ("hflip", "vflip", "center_crop", "random_resized_crop")


def _draw_augmentation(rng, shape) -> dict:
    kind = _AUG_KINDS[int(rng.integers(len(_AUG_KINDS)))]
    if kind == "center_crop":
        return {"kind": kind, "fraction": round(float(rng.uniform(0.5, 0.92)), 4)}
    if kind == "random_resized_crop":
        h, w = shape
        scale = float(rng.uniform(0.4, 0.9))
        ch, cw = max(1, int(round(h * scale))), max(1, int(round(w * scale)))
        y0 = int(rng.integers(h - ch + 1))
        x0 = int(rng.integers(w - cw + 1))
        return {"kind": kind, "y0": y0, "x0": x0, "height": ch, "width": cw}
    return {"kind": kind}


def augment_non_illusions(entries, target_count: int = 3000, seed: int = 0,
                          root=None, out_dir=None):
    """Top up the non-illusion pool to ``target_count`` with seeded
    flips and crops, deduplicated by content hash.

    Augmented entries keep the non_illusion label and all-zero masks,
    and record (parent id, transform) so any of them can be replayed.
    Returns the entries list with the augmented ones appended.
    """
    entries = list(entries)
    bases = [e for e in entries if e.label == "non_illusion" and e.provenance == "rendered"]
    if not bases:
        raise ConfigurationError("manifest contains no non-illusion entries to augment")
    current = sum(1 for e in entries if e.label == "non_illusion")
    if target_count <= current:
        log.warning("augmentation target %d <= current count %d: no-op",
                    target_count, current)
        return entries

    base_images = {e.id: load_entry_image(e, root) for e in bases}
    seen_hashes = {hashlib.sha1(img.tobytes()).hexdigest() for img in base_images.values()}

    images_dir = masks_dir = None
    if out_dir is not None:
        out_dir = Path(out_dir)
        images_dir = out_dir / "images"
        masks_dir = out_dir / "masks"
        images_dir.mkdir(parents=True, exist_ok=True)
        masks_dir.mkdir(parents=True, exist_ok=True)

    needed = target_count - current
    made = 0
    attempt = 0
    max_attempts = 50 * needed
    while made < needed:
        if attempt >= max_attempts:
            raise ConfigurationError(
                f"could not reach {target_count} unique non-illusions "
                f"after {attempt} attempts"
            )
        rng = substream(seed, "augment", attempt)
        attempt += 1
        base = bases[int(rng.integers(len(bases)))]
        transform = _draw_augmentation(rng, base_images[base.id].shape)
        img = apply_augmentation(base_images[base.id], transform)
        digest = hashlib.sha1(img.tobytes()).hexdigest()
        if digest in seen_hashes:
            continue
        seen_hashes.add(digest)
        aug_id = hashlib.sha1(
            f"aug|{base.id}|{json.dumps(transform, sort_keys=True)}".encode()
        ).hexdigest()[:16]
        entry = ManifestEntry(
            id=aug_id, family=base.family, label="non_illusion", spec=base.spec,
            provenance="augmented", parent_id=base.id, transform=transform,
        )
        if images_dir is not None:
            save_png(img, images_dir / f"{aug_id}.png")
            save_png(np.zeros(img.shape, dtype=bool), masks_dir / f"{aug_id}.png")
            entry.image_path = str((images_dir / f"{aug_id}.png").relative_to(out_dir))
            entry.mask_path = str((masks_dir / f"{aug_id}.png").relative_to(out_dir))
        entries.append(entry)
        made += 1
    return entries


def validate_non_illusion(entry: ManifestEntry, root=None) -> bool:
    """A rendered non-illusion must differ from its base in >= 1% of pixels."""
    if entry.label != "non_illusion" or entry.spec is None:
        return True
    if entry.provenance == "augmented":
        return True
    img = load_entry_image(entry, root)
    base_img, _ = render_stimulus(entry.spec.base)
    return differs_enough(img, base_img)


# ---------------------------------------------------------------------------
# splits
# ---------------------------------------------------------------------------

LOCALIZATION_TRAIN_FRACTION = 0.6

IDENTIFICATION_TRAIN_ILLUSIONS = 1000
IDENTIFICATION_TRAIN_NON = 2000
IDENTIFICATION_TEST_NON = 1000
CLASSIFICATION_TRAIN_PER_CLASS = 500


@dataclass
class SplitSpec:
    task: str
    train_ids: list
    test_ids: list
    seed: int

    def as_dict(self) -> dict:
        return {"task": self.task, "seed": self.seed,
                "train_ids": self.train_ids, "test_ids": self.test_ids}


def _sample(ids, count, rng):
    idx = np.sort(rng.choice(len(ids), size=count, replace=False))
    return [ids[i] for i in idx]


def make_splits(entries, task: str, seed: int = 0) -> SplitSpec:
    """Seed-deterministic train/test splits for the three tasks.

    identification: 1000 illusions + 2000 non-illusions train; 1000
    non-illusions + every remaining illusion test. classification: 500
    per illusion family train, rest test. localization: illusions only,
    train fraction 0.6 (13419/8947 on the full corpus).
    """
    ill_ids = [e.id for e in entries if e.label == "illusion"]
    non_ids = [e.id for e in entries if e.label == "non_illusion"]
    rng = substream(seed, "split", {"identification": 0, "classification": 1,
                                    "localization": 2}[task])

    if task == "identification":
        need_non = IDENTIFICATION_TRAIN_NON + IDENTIFICATION_TEST_NON
        if len(ill_ids) < IDENTIFICATION_TRAIN_ILLUSIONS:
            raise ConfigurationError(
                f"identification needs {IDENTIFICATION_TRAIN_ILLUSIONS} illusions, "
                f"manifest has {len(ill_ids)}"
            )
        if len(non_ids) < need_non:
            raise ConfigurationError(
                f"identification needs {need_non} non-illusions, "
                f"manifest has {len(non_ids)}"
            )
        train_ill = set(_sample(ill_ids, IDENTIFICATION_TRAIN_ILLUSIONS, rng))
        non_perm = [non_ids[i] for i in rng.permutation(len(non_ids))]
        train_non = non_perm[:IDENTIFICATION_TRAIN_NON]
        test_non = non_perm[IDENTIFICATION_TRAIN_NON:need_non]
        train = sorted(train_ill) + sorted(train_non)
        test = sorted(set(ill_ids) - train_ill) + sorted(test_non)
        return SplitSpec(task, train, test, seed)

    if task == "classification":
        train, test = [], []
        by_family: dict[str, list] = {}
        for e in entries:
            if e.label == "illusion":
                by_family.setdefault(e.family, []).append(e.id)
        for family, ids in sorted(by_family.items()):
            if len(ids) < CLASSIFICATION_TRAIN_PER_CLASS:
                raise ConfigurationError(
                    f"classification needs {CLASSIFICATION_TRAIN_PER_CLASS} "
                    f"{family} illusions, manifest has {len(ids)}"
                )
            chosen = set(_sample(ids, CLASSIFICATION_TRAIN_PER_CLASS, rng))
            train.extend(sorted(chosen))
            test.extend(sorted(set(ids) - chosen))
        return SplitSpec(task, train, test, seed)

    if task == "localization":
        if len(ill_ids) < 5:
            raise ConfigurationError(
                f"localization needs at least 5 illusions, manifest has {len(ill_ids)}"
            )
        n_train = int(LOCALIZATION_TRAIN_FRACTION * len(ill_ids))
        train = set(_sample(ill_ids, n_train, rng))
        return SplitSpec(task, sorted(train), sorted(set(ill_ids) - train), seed)

    raise ParameterError(f"unknown task {task!r}")
