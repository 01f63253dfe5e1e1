"""Synthetic in-place stepping with analytic ground truth, and event scoring.

Each foot follows ``amplitude * max(0, sin(2*pi*f*t + phi))`` where the
per-foot frequency ``f`` is half the cadence, so the two feet together take
``cadence`` steps per second. Only swings that complete inside the active
window are kept; the rest of the time the foot rests on the floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidSpec
from .gait import EventKind, Foot, GaitEvent
from .signals import SAMPLE_HZ, TrackingFrame

SWING_EVENTS = (EventKind.INITIAL_SWING, EventKind.MID_SWING, EventKind.TERMINAL_SWING)


@dataclass(frozen=True)
class SynthGaitSpec:
    cadence_hz: float = 1.0
    amplitude: float = 0.25
    duration: float = 10.0
    noise_sigma: float = 0.0
    phase_offset: float = 0.5
    seed: int = 0
    floor_y: float = 0.08
    standing_prefix: float = 3.0
    tail: float = 0.0
    sample_hz: float = SAMPLE_HZ

    def validate(self) -> None:
        if not (0.0 <= self.amplitude <= 0.35):
            raise InvalidSpec(f"amplitude {self.amplitude} m outside [0, 0.35]")
        if not (0.5 <= self.cadence_hz <= 3.0):
            raise InvalidSpec(f"cadence {self.cadence_hz} Hz outside [0.5, 3]")
        if self.duration < 0.0 or self.tail < 0.0 or self.standing_prefix < 0.0:
            raise InvalidSpec("durations must be nonnegative")
        if self.noise_sigma < 0.0:
            raise InvalidSpec("noise_sigma must be nonnegative")
        if not (0.0 <= self.phase_offset < 1.0):
            raise InvalidSpec("phase_offset is a fraction of the foot cycle in [0, 1)")

    @classmethod
    def from_dict(cls, d: dict) -> "SynthGaitSpec":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise InvalidSpec(f"unknown spec keys: {sorted(unknown)}")
        return cls(**d)


def swing_intervals(spec: SynthGaitSpec, foot: Foot) -> list[tuple[float, float]]:
    """(lift-off, touchdown) times, relative to walk start, of complete swings."""
    if spec.amplitude == 0.0:
        return []
    period = 2.0 / spec.cadence_hz
    offset = 0.0 if foot is Foot.LEFT else spec.phase_offset * period
    out = []
    k = 0
    while True:
        lift = offset + k * period
        land = lift + period / 2.0
        if land > spec.duration + 1e-9:
            break
        out.append((lift, land))
        k += 1
    return out


def _heights(spec: SynthGaitSpec, foot: Foot, k_rel: np.ndarray) -> np.ndarray:
    # work in ticks so every swing sees bit-identical sample offsets
    fs = spec.sample_hz
    h = np.zeros(k_rel.shape)
    omega = math.pi * spec.cadence_hz  # 2*pi * (cadence / 2)
    for lift, land in swing_intervals(spec, foot):
        m = (k_rel >= lift * fs - 1e-9) & (k_rel <= land * fs + 1e-9)
        h[m] = spec.amplitude * np.maximum(0.0, np.sin(omega * ((k_rel[m] - lift * fs) / fs)))
    return h


def generate(spec: SynthGaitSpec) -> tuple[list[TrackingFrame], list[GaitEvent]]:
    spec.validate()
    fs = spec.sample_hz
    n_pre = round(spec.standing_prefix * fs)
    n_act = round(spec.duration * fs) + 1
    n_tail = round(spec.tail * fs)
    n = n_pre + n_act + n_tail
    k = np.arange(n)
    t = k / fs
    t0 = n_pre / fs
    active = (k >= n_pre) & (k < n_pre + n_act)
    rng = np.random.default_rng(spec.seed)
    noise = rng.normal(0.0, spec.noise_sigma, size=(2, n)) if spec.noise_sigma > 0 else np.zeros((2, n))
    ys = []
    for i, foot in enumerate((Foot.LEFT, Foot.RIGHT)):
        h = np.where(active, _heights(spec, foot, (k - n_pre).astype(float)), 0.0)
        ys.append(spec.floor_y + h + noise[i])
    frames = [TrackingFrame(float(t[j]), float(ys[0][j]), float(ys[1][j])) for j in range(n)]

    truth = []
    for foot in (Foot.LEFT, Foot.RIGHT):
        for lift, land in swing_intervals(spec, foot):
            truth.append(GaitEvent(EventKind.INITIAL_SWING, foot, t0 + lift))
            truth.append(GaitEvent(EventKind.MID_SWING, foot, t0 + 0.5 * (lift + land)))
            truth.append(GaitEvent(EventKind.TERMINAL_SWING, foot, t0 + land))
    truth.sort(key=lambda e: (e.t, e.foot.value, e.kind.value))
    return frames, truth


def step_count(truth: Iterable[GaitEvent]) -> int:
    return sum(1 for e in truth if e.kind is EventKind.TERMINAL_SWING)


def score_detection(
    truth: Sequence[GaitEvent],
    detected: Sequence[GaitEvent],
    tolerance: float = 0.15,
    kinds: Sequence[EventKind] = SWING_EVENTS,
) -> tuple[float, float]:
    """Greedy one-to-one matching of same-kind, same-foot events.

    Each truth event, in time order, takes the closest unmatched detection
    within ``tolerance``. With nothing detected, precision is 1 by convention.
    """
    truth = [e for e in truth if e.kind in kinds]
    detected = [e for e in detected if e.kind in kinds]
    pools: dict = {}
    for e in detected:
        pools.setdefault((e.kind, e.foot), []).append([e.t, False])
    matched = 0
    for e in sorted(truth, key=lambda e: e.t):
        best = None
        for cand in pools.get((e.kind, e.foot), ()):
            if cand[1]:
                continue
            d = abs(cand[0] - e.t)
            if d <= tolerance and (best is None or d < abs(best[0] - e.t)):
                best = cand
        if best is not None:
            best[1] = True
            matched += 1
    precision = matched / len(detected) if detected else 1.0
    recall = matched / len(truth) if truth else 1.0
    return precision, recall
