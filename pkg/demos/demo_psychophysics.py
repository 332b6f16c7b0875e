"""
2AFC sessions, psychometric fitting, and illusory reduction
===========================================================

Simulates an observer who perceives the target dimmed by a known
amount, runs the full schedule -> aggregate -> fit -> reduction
pipeline, and plots the psychometric curve with its point of subjective
equality.

Run:  python3 demos/demo_psychophysics.py
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from scipy.stats import norm

from illusionkit import (
    aggregate,
    default_comparator_specs,
    fit_psychometric,
    illusory_reduction,
    schedule_session,
    simulate_observer,
)
from illusionkit.psychophysics import reduction_table, reduction_table_csv

# a 1000-trial session against SBC comparators with target intensity 150
pool = default_comparator_specs("sbc")
schedule = schedule_session(pool, n_trials=1000, seed=42)
sides = [t.comparator_side for t in schedule]
print(f"schedule: {len(schedule)} trials, sides {sides.count('left')}/{sides.count('right')}")

injected = 35.03
results = simulate_observer(injected, noise_sigma=10.0, schedule=schedule, seed=1)
points = aggregate(results)
fit = fit_psychometric(points)
red = illusory_reduction(fit, comparator_intensity=150)
print(f"injected reduction {injected}, recovered {red.reduction:.2f} "
      f"(PSE {fit.pse:.2f}, sigma {fit.slope_sigma:.2f})")
print(f"perceived intensity of the 150-level target: {red.perceived_intensity:.2f}")

# psychometric curve: P(standard looks brighter) vs luminance difference
fig, ax = plt.subplots(figsize=(6.5, 4.5))
d = np.array([p.d for p in points])
ax.plot(d, [p.proportion for p in points], "o", label="responses")
xs = np.linspace(d.min(), d.max(), 400)
ax.plot(xs, norm.cdf((xs - fit.pse) / fit.slope_sigma), "-", label="fit")
ax.axhline(0.5, color="gray", lw=0.8)
ax.axvline(fit.pse, color="red", lw=0.8, label=f"PSE = {fit.pse:.1f}")
ax.set_xlabel("standard - comparator luminance difference d")
ax.set_ylabel("P(standard judged brighter)")
ax.legend()
fig.tight_layout()
fig.savefig("demo_psychometric_curve.png", dpi=110)
print("wrote demo_psychometric_curve.png")

# a small reduction table: two simulated subjects across two families
cells = {}
seed = 100
for subject, strength in (("subject A", 1.0), ("subject B", 1.3)):
    for family, base_reduction in (("sbc", 35.0), ("white", 49.0)):
        seed += 1
        sched = schedule_session(default_comparator_specs(family), 800, seed=seed)
        res = simulate_observer(strength * base_reduction, 10.0, sched, seed=7)
        cells[(subject, family)] = illusory_reduction(
            fit_psychometric(aggregate(res)), 150)
print()
print(reduction_table_csv(reduction_table(cells)))
