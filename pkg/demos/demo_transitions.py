"""
Assimilation-to-contrast transitions
====================================

Two sweeps in which the perceived-darker patch switches sides:

* the White-to-SBC transition: vertical bands widen around each test
  patch until the carrier degenerates into a plain SBC display;
* the shifted-White-to-checkerboard transition: shrinking the patch
  aspect ratio turns offset dashes into a checkerboard, inverting the
  percept.

Run:  python3 demos/demo_transitions.py
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from illusionkit import WhiteSpec, render_stimulus
from illusionkit.stimuli import howe_sweep, shifted_white_sweep

base = WhiteSpec(stripe_period=32, patch_length=64)

# --- White -> SBC ---------------------------------------------------------
sweep = howe_sweep(base, 6)
fig, axes = plt.subplots(2, len(sweep), figsize=(3 * len(sweep), 6.4))
for col, spec in enumerate(sweep):
    img, mask = render_stimulus(spec)
    axes[0, col].imshow(img, cmap="gray", vmin=0, vmax=255)
    axes[0, col].set_title(f"crossing width {spec.crossing_line_width}px", fontsize=9)
    axes[1, col].imshow(mask, cmap="gray", vmin=0, vmax=1)
    for row in (0, 1):
        axes[row, col].set_xticks([])
        axes[row, col].set_yticks([])
fig.suptitle("White-to-SBC sweep: the masked patch flips sides exactly once")
fig.tight_layout()
fig.savefig("demo_howe_sweep.png", dpi=110)
print("wrote demo_howe_sweep.png")

sides = ["left" if render_stimulus(s)[1][:, :128].any() else "right" for s in sweep]
print("mask side along the sweep:", " -> ".join(sides))

# --- shifted White -> checkerboard ---------------------------------------
aspects = [4.0, 2.5, 1.5, 1.0]
sweep = shifted_white_sweep(base, aspects)
fig, axes = plt.subplots(2, len(sweep), figsize=(3 * len(sweep), 6.4))
for col, spec in enumerate(sweep):
    img, mask = render_stimulus(spec)
    axes[0, col].imshow(img, cmap="gray", vmin=0, vmax=255)
    axes[0, col].set_title(f"aspect {spec.patch_aspect}", fontsize=9)
    axes[1, col].imshow(mask, cmap="gray", vmin=0, vmax=1)
    for row in (0, 1):
        axes[row, col].set_xticks([])
        axes[row, col].set_yticks([])
fig.suptitle("Shifted White: percept inverts at the checkerboard limit")
fig.tight_layout()
fig.savefig("demo_shifted_white.png", dpi=110)
print("wrote demo_shifted_white.png")

# at the limit the carrier itself is a pure two-intensity checkerboard
img, _ = render_stimulus(sweep[-1])
print("intensities at the checkerboard limit:", sorted(np.unique(img)))
