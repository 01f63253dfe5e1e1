"""
Low-pass filter on foot heights
===============================

Design the default 4 Hz filter, push sinusoids through it one sample at a
time and compare the settled amplitude with the closed-form magnitude.
"""

import numpy as np

from wipanim.signals import LowPassFilter, butterworth_magnitude, design_lowpass

fs = 30.0
sections = design_lowpass(cutoff_hz=4.0, sample_hz=fs, order=2)
for s in sections:
    print("biquad b =", (s.b0, s.b1, s.b2), "a =", (1.0, s.a1, s.a2))

t = np.arange(1800) / fs
print(f"\n{'f (Hz)':>7} {'measured':>9} {'analytic':>9}")
for f in (0.5, 1.0, 2.0, 4.0, 8.0, 12.0):
    y = np.array(LowPassFilter(sections).filter(np.sin(2 * np.pi * f * t)))
    settled = y[-900:]
    # amplitude of the steady-state sinusoid
    basis = np.column_stack([np.sin(2 * np.pi * f * t[-900:]), np.cos(2 * np.pi * f * t[-900:])])
    coef = np.linalg.lstsq(basis, settled, rcond=None)[0]
    print(f"{f:7.1f} {np.hypot(*coef):9.4f} {butterworth_magnitude(f, 4.0, fs):9.4f}")

# the state is primed from the first sample, so a constant passes straight through
print("\nfirst outputs for a constant 0.08 m:", LowPassFilter(sections).filter([0.08] * 3))
