"""Ankle-height conditioning: floor calibration, sample buffers, a causal
Butterworth low-pass and per-foot velocity/speed at a fixed tick rate.

Heights are meters in the sensor frame; velocities are meters per second.
"""

from __future__ import annotations

import cmath
import logging
import math
import statistics
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import (
    ExcessiveMotion,
    InsufficientData,
    InvalidCutoff,
    NonMonotonicTime,
    NotCalibrated,
)

log = logging.getLogger(__name__)

SAMPLE_HZ = 30.0
BUFFER_LEN = 30
CALIBRATION_SECONDS = 3.0
CALIBRATION_MAX_STD = 0.02


@dataclass(frozen=True)
class TrackingFrame:
    t: float
    left_y_raw: float
    right_y_raw: float


@dataclass(frozen=True)
class FloorCalibration:
    floor_y: float
    n_samples: int
    duration: float


@dataclass(frozen=True)
class FootSignal:
    h: float  # filtered height above floor
    v: float  # signed vertical velocity (unsmoothed)
    s: float  # vertical speed, |v|


def calibrate_floor(
    frames: Sequence[TrackingFrame],
    sample_hz: float = SAMPLE_HZ,
    min_seconds: float = CALIBRATION_SECONDS,
    max_std: float = CALIBRATION_MAX_STD,
) -> FloorCalibration:
    """Average both ankles over a standing window to get the floor height.

    The window duration counts one tick per frame, so 90 frames at 30 Hz
    make exactly 3 s.
    """
    n = len(frames)
    duration = (frames[-1].t - frames[0].t + 1.0 / sample_hz) if n else 0.0
    if n == 0 or duration < min_seconds - 1e-9:
        raise InsufficientData(
            f"calibration needs {min_seconds:g} s of standing data, got {duration:.3f} s"
        )
    ys = [f.left_y_raw for f in frames] + [f.right_y_raw for f in frames]
    floor_y = math.fsum(ys) / len(ys)
    std = statistics.stdev(ys) if len(ys) > 1 else 0.0
    if std > max_std:
        raise ExcessiveMotion(
            f"ankle height std {std:.4f} m exceeds {max_std:g} m during calibration"
        )
    return FloorCalibration(floor_y=floor_y, n_samples=n, duration=duration)


class SampleBuffer:
    """FIFO of the most recent raw heights (one second at 30 Hz)."""

    def __init__(self, capacity: int = BUFFER_LEN):
        self.capacity = capacity
        self._q: deque[float] = deque(maxlen=capacity)

    def push(self, y: float) -> None:
        self._q.append(y)

    def __len__(self) -> int:
        return len(self._q)

    def __getitem__(self, i):
        return self._q[i]

    def values(self) -> list[float]:
        return list(self._q)


@dataclass(frozen=True)
class Biquad:
    """One normalized second-order (or first-order, b2 = a2 = 0) section."""

    b0: float
    b1: float
    b2: float
    a1: float
    a2: float


def design_lowpass(
    cutoff_hz: float = 4.0, sample_hz: float = SAMPLE_HZ, order: int = 2
) -> list[Biquad]:
    """Digital Butterworth low-pass as cascaded sections.

    Analog prototype poles are prewarped to the cutoff and mapped through the
    bilinear transform, so the -3 dB point lands exactly on ``cutoff_hz``.
    """
    if not (0.0 < cutoff_hz < sample_hz / 2.0):
        raise InvalidCutoff(
            f"cutoff {cutoff_hz} Hz must lie in (0, {sample_hz / 2.0}) Hz"
        )
    if order < 1:
        raise InvalidCutoff(f"filter order must be >= 1, got {order}")
    k = math.tan(math.pi * cutoff_hz / sample_hz)
    k2 = k * k
    sections = []
    for i in range(order // 2):
        pole = cmath.exp(1j * math.pi * (2 * i + order + 1) / (2 * order))
        damp = -2.0 * pole.real
        norm = 1.0 + damp * k + k2
        b0 = k2 / norm
        sections.append(
            Biquad(
                b0=b0,
                b1=2.0 * b0,
                b2=b0,
                a1=2.0 * (k2 - 1.0) / norm,
                a2=(1.0 - damp * k + k2) / norm,
            )
        )
    if order % 2:
        b0 = k / (1.0 + k)
        sections.append(Biquad(b0=b0, b1=b0, b2=0.0, a1=(k - 1.0) / (k + 1.0), a2=0.0))
    return sections


def butterworth_magnitude(freq_hz, cutoff_hz=4.0, sample_hz=SAMPLE_HZ, order=2):
    """Closed-form magnitude of the prewarped bilinear Butterworth."""
    ratio = math.tan(math.pi * freq_hz / sample_hz) / math.tan(math.pi * cutoff_hz / sample_hz)
    return 1.0 / math.sqrt(1.0 + ratio ** (2 * order))


def frequency_response(sections: Sequence[Biquad], freq_hz: float, sample_hz=SAMPLE_HZ) -> complex:
    """Evaluate the cascade's transfer function on the unit circle."""
    z1 = cmath.exp(-2j * math.pi * freq_hz / sample_hz)
    z2 = z1 * z1
    h = 1.0 + 0j
    for s in sections:
        h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2)
    return h


class LowPassFilter:
    """Streaming cascade in transposed direct form II.

    The delay line is primed from the first sample as if the input had been
    constant forever, which avoids a start-up transient from zero.
    """

    def __init__(self, sections: Sequence[Biquad]):
        self.sections = list(sections)
        self._state: list[list[float]] | None = None

    def reset(self) -> None:
        self._state = None

    def _prime(self, x: float) -> None:
        state = []
        for s in self.sections:
            # Each section has unity DC gain, so its steady output equals x.
            z2 = (s.b2 - s.a2) * x
            z1 = (s.b1 - s.a1) * x + z2
            state.append([z1, z2])
        self._state = state

    def __call__(self, x: float) -> float:
        if self._state is None:
            self._prime(x)
        y = x
        for s, st in zip(self.sections, self._state):
            out = s.b0 * y + st[0]
            st[0] = s.b1 * y - s.a1 * out + st[1]
            st[1] = s.b2 * y - s.a2 * out
            y = out
        return y

    def filter(self, xs) -> list[float]:
        return [self(x) for x in xs]


def first_difference(buf: SampleBuffer, sample_hz: float) -> float:
    if len(buf) < 2:
        return 0.0
    return (buf[-1] - buf[-2]) * sample_hz


def central_difference(buf: SampleBuffer, sample_hz: float) -> float:
    """Three-point difference over the last two intervals (lags one tick)."""
    if len(buf) < 3:
        return first_difference(buf, sample_hz)
    return (buf[-1] - buf[-3]) * sample_hz / 2.0


VELOCITY_ESTIMATORS: dict[str, Callable[[SampleBuffer, float], float]] = {
    "first_difference": first_difference,
    "central_difference": central_difference,
}


@dataclass
class _FootChannel:
    buffer: SampleBuffer
    lowpass: LowPassFilter


@dataclass
class SignalPipeline:
    """Per-session conditioning state for both feet."""

    calibration: FloorCalibration | None = None
    sample_hz: float = SAMPLE_HZ
    cutoff_hz: float = 4.0
    order: int = 2
    velocity: str = "first_difference"
    spacing_flags: list[int] = field(default_factory=list)

    def __post_init__(self):
        sections = design_lowpass(self.cutoff_hz, self.sample_hz, self.order)
        self._feet = [
            _FootChannel(SampleBuffer(), LowPassFilter(sections)) for _ in range(2)
        ]
        try:
            self._velocity = VELOCITY_ESTIMATORS[self.velocity]
        except KeyError:
            raise ValueError(f"unknown velocity estimator {self.velocity!r}") from None
        self._last_t: float | None = None
        self._n = 0

    @property
    def buffers(self) -> tuple[SampleBuffer, SampleBuffer]:
        return self._feet[0].buffer, self._feet[1].buffer

    def push_frame(self, frame: TrackingFrame) -> tuple[FootSignal, FootSignal]:
        if self.calibration is None:
            raise NotCalibrated("push_frame called before floor calibration")
        if self._last_t is not None:
            dt = frame.t - self._last_t
            if dt <= 0.0:
                raise NonMonotonicTime(
                    f"frame t={frame.t!r} does not follow t={self._last_t!r}"
                )
            nominal = 1.0 / self.sample_hz
            if abs(dt - nominal) > 0.5 * nominal:
                self.spacing_flags.append(self._n)
                log.warning("frame %d: spacing %.4f s off nominal %.4f s", self._n, dt, nominal)
        self._last_t = frame.t
        self._n += 1
        floor_y = self.calibration.floor_y
        out = []
        for ch, y in zip(self._feet, (frame.left_y_raw, frame.right_y_raw)):
            ch.buffer.push(y)
            h = ch.lowpass(y) - floor_y
            v = self._velocity(ch.buffer, self.sample_hz)
            out.append(FootSignal(h=h, v=v, s=abs(v)))
        return out[0], out[1]
