"""Forward walking speed from vertical foot speed.

Speed is only re-estimated when a mid-swing or terminal-swing event
arrives. The estimate itself and the speed-stop timeout are pluggable: the
defaults here (gain times the mean vertical speed of the swing foot over the
last ``pool`` inter-event windows, and a timeout of
``max(1.5 * step period, 0.8 s)``) are engineering stand-ins, not a
published formula. Pooling two windows spans one whole swing, which evens
out the ascent and descent halves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Protocol

from .gait import EventKind
from .mapping import smooth_toward

SPEED_CAP = 3.5


class SpeedModel(Protocol):
    def estimate(self, window: list[float], previous: list[list[float]]) -> float: ...

    def timeout(self, last_step_period: Optional[float]) -> float: ...


@dataclass(frozen=True)
class MeanVerticalSpeed:
    gain_k: float = 1.0
    period_factor: float = 1.5
    min_timeout: float = 0.8
    pool: int = 2

    def estimate(self, window, previous=()):
        samples = list(window)
        for w in list(previous)[-(self.pool - 1):] if self.pool > 1 else ():
            samples.extend(w)
        return self.gain_k * mean(samples)

    def timeout(self, last_step_period):
        if last_step_period is None:
            return self.min_timeout
        return max(self.period_factor * last_step_period, self.min_timeout)


def mean(xs) -> float:
    return math.fsum(xs) / len(xs) if xs else 0.0


@dataclass
class SpeedState:
    current_speed: float = 0.0
    last_event_t: Optional[float] = None
    window_speeds: list[float] = field(default_factory=list)
    past_windows: list[list[float]] = field(default_factory=list)
    speed_cap: float = SPEED_CAP
    last_step_period: Optional[float] = None
    last_terminal_t: Optional[float] = None
    decay_alpha: float = 0.3
    distance: float = 0.0


def accumulate(s_foot: float, state: SpeedState) -> SpeedState:
    state.window_speeds.append(s_foot)
    return state


def adapt_on_event(kind: EventKind, t: float, state: SpeedState, model: SpeedModel = MeanVerticalSpeed()) -> SpeedState:
    if kind not in (EventKind.MID_SWING, EventKind.TERMINAL_SWING):
        return state
    estimate = model.estimate(state.window_speeds, state.past_windows)
    state.current_speed = min(max(estimate, 0.0), state.speed_cap)
    state.past_windows = (state.past_windows + [state.window_speeds])[-8:]
    state.window_speeds = []
    state.last_event_t = t
    if kind is EventKind.TERMINAL_SWING:
        if state.last_terminal_t is not None:
            state.last_step_period = t - state.last_terminal_t
        state.last_terminal_t = t
    return state


def decay_check(t: float, state: SpeedState, stopped: bool = False, model: SpeedModel = MeanVerticalSpeed()) -> SpeedState:
    """Bleed speed off when steps stop arriving; zero it on a detected stop."""
    if stopped:
        state.current_speed = 0.0
        state.window_speeds = []
        state.past_windows = []
        state.last_step_period = None
        state.last_terminal_t = None
        return state
    if state.last_event_t is None or state.current_speed == 0.0:
        return state
    if t - state.last_event_t > model.timeout(state.last_step_period):
        v = smooth_toward(state.current_speed, 0.0, state.decay_alpha)
        state.current_speed = v if v > 1e-6 else 0.0
    return state


def integrate(dt: float, state: SpeedState) -> float:
    step = state.current_speed * dt
    state.distance += step
    return step
