"""
Gallery of every stimulus family
================================

Renders one representative of each illusion family, the non-illusion
variants, and the edge-profile stimuli, and saves a gallery image with
each stimulus above its ground-truth mask.

Run:  python3 demos/demo_stimuli.py
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from illusionkit import (
    CornsweetSpec,
    GratingSpec,
    GridSpec,
    HermannSpec,
    MachBandSpec,
    NonIllusionSpec,
    SbcSpec,
    WhiteSpec,
    render_stimulus,
)

# one spec per family; defaults already follow the usual presentations
specs = {
    "SBC": SbcSpec(),
    "White": WhiteSpec(patch_count_per_side=2),
    "Hermann": HermannSpec(),
    "Grid (upper)": GridSpec(variant="upper"),
    "Grating": GratingSpec(cycles_per_degree=8.0, degrees_per_image=1.0),
    "Mach band": MachBandSpec(),
    "Cornsweet": CornsweetSpec(),
    "Non-illusion\n(dots)": NonIllusionSpec(base=HermannSpec(), transform="dot_insertion"),
}

fig, axes = plt.subplots(2, len(specs), figsize=(3 * len(specs), 6.4))
for col, (name, spec) in enumerate(specs.items()):
    img, mask = render_stimulus(spec)
    axes[0, col].imshow(img, cmap="gray", vmin=0, vmax=255)
    axes[0, col].set_title(name, fontsize=10)
    axes[1, col].imshow(mask, cmap="gray", vmin=0, vmax=1)
    for row in (0, 1):
        axes[row, col].set_xticks([])
        axes[row, col].set_yticks([])
axes[0, 0].set_ylabel("stimulus")
axes[1, 0].set_ylabel("mask")
fig.suptitle("Brightness illusions and their darker-region masks")
fig.tight_layout()
fig.savefig("demo_stimuli.png", dpi=110)
print("wrote demo_stimuli.png")

# The key property behind the masks: the masked target and its
# counterpart are physically identical.
from illusionkit import check_equal_intensity

for name in ("SBC", "White", "Grid (upper)", "Cornsweet"):
    print(f"equal-intensity check, {name}: {check_equal_intensity(specs[name])}")
