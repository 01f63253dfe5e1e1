"""
From foot height to IK targets
==============================

Tabulate the forward depth of both avatar feet against the tracked foot
height, for the first step out of stance and for a consecutive step.
"""

import numpy as np

from wipanim.gait import GaitPhase
from wipanim.mapping import consecutive_depths, first_step_depths, pelvis_drop

hs = np.linspace(0.0, 0.3, 7)

print("first step, swing foot starts beside the other")
print(f"{'branch':>11} {'h':>5} {'z_swing':>8} {'z_other':>8} {'pelvis':>7}")
for phase in (GaitPhase.ASCENDING, GaitPhase.DESCENDING):
    for h in hs if phase is GaitPhase.ASCENDING else hs[::-1]:
        zs, zo = first_step_depths(h, phase)
        print(f"{phase.value:>11} {h:5.2f} {zs:8.4f} {zo:8.4f} {pelvis_drop(min(zs, zo)):7.4f}")

print("\nconsecutive step, swing foot starts behind")
for phase in (GaitPhase.ASCENDING, GaitPhase.DESCENDING):
    for h in hs if phase is GaitPhase.ASCENDING else hs[::-1]:
        zs, zo = consecutive_depths(h, phase)
        print(f"{phase.value:>11} {h:5.2f} {zs:8.4f} {zo:8.4f} {pelvis_drop(min(zs, zo)):7.4f}")

# the descending swing overshoots its landing point a little before settling
peak = max(consecutive_depths(h, GaitPhase.DESCENDING)[0] for h in np.linspace(0, 0.3, 301))
print(f"\nlargest forward reach on the way down: {peak:.4f} m")
