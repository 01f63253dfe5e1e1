"""The per-session tick loop tying signals, gait phases, targets and speed together."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .config import EngineConfig
from .errors import ExcessiveMotion, InsufficientData, NonMonotonicTime, NotCalibrated, SessionError, WipError
from .gait import (
    EventKind,
    Foot,
    GaitEvent,
    GaitPhase,
    StepKind,
    WalkContext,
    coordinator_update,
    fsm_step,
    stop_timer_update,
)
from .mapping import IkMapper
from .signals import FloorCalibration, SignalPipeline, TrackingFrame, calibrate_floor
from .speed import SpeedState, accumulate, adapt_on_event, decay_check, integrate

RECORD_KEYS = (
    "t", "zl", "zr", "yl", "yr", "dh", "ycurr", "speed", "dist",
    "phase_l", "phase_r", "hl", "hr", "sl", "sr", "events",
)


class Engine:
    """One walking session. Feed frames in time order with :meth:`step`.

    Without a calibration the first ``calib_seconds`` of frames are taken
    as the standing window: they are answered with neutral records and the
    gait machine starts on the frame after.
    """

    def __init__(self, config: EngineConfig = EngineConfig(), calibration: Optional[FloorCalibration] = None):
        self.config = config
        self.thresholds = config.thresholds()
        self.model = config.speed_model()
        self.dt = 1.0 / config.sample_hz
        self.pipeline = SignalPipeline(
            calibration=calibration,
            sample_hz=config.sample_hz,
            cutoff_hz=config.cutoff_hz,
            order=config.filter_order,
            velocity=config.velocity,
        )
        self.mapper = IkMapper(config.mapper())
        self.speed = SpeedState(speed_cap=config.speed_cap, decay_alpha=config.decay_alpha)
        self.context = WalkContext()
        self.phases = [GaitPhase.INITIAL_DOUBLE_SUPPORT, GaitPhase.INITIAL_DOUBLE_SUPPORT]
        self.prev_v = [0.0, 0.0]
        self.events: list[GaitEvent] = []
        self.tick = 0
        self._pending: list[TrackingFrame] = []
        self._n_cal = math.ceil(config.calib_seconds * config.sample_hz - 1e-9)

    @property
    def calibrated(self) -> bool:
        return self.pipeline.calibration is not None

    def _neutral_record(self, t: float) -> dict:
        y = self.config.y_init
        phase = GaitPhase.INITIAL_DOUBLE_SUPPORT.value
        return {
            "t": t, "zl": 0.0, "zr": 0.0, "yl": 0.0, "yr": 0.0, "dh": 0.0, "ycurr": y,
            "speed": 0.0, "dist": 0.0, "phase_l": phase, "phase_r": phase,
            "hl": 0.0, "hr": 0.0, "sl": 0.0, "sr": 0.0, "events": [],
        }

    def step(self, frame: TrackingFrame) -> dict:
        """Process one frame and return its output record."""
        try:
            if not self.calibrated:
                return self._calibration_tick(frame)
            return self._tick(frame)
        except SessionError:
            raise
        except WipError as e:
            raise SessionError(self.tick, e) from e
        finally:
            self.tick += 1

    def _calibration_tick(self, frame: TrackingFrame) -> dict:
        if self._pending and frame.t <= self._pending[-1].t:
            raise NonMonotonicTime(f"frame t={frame.t!r} does not follow t={self._pending[-1].t!r}")
        self._pending.append(frame)
        if len(self._pending) >= self._n_cal:
            try:
                cal = calibrate_floor(
                    self._pending, self.config.sample_hz, self.config.calib_seconds, self.config.calib_max_std
                )
            except (InsufficientData, ExcessiveMotion) as e:
                self._pending = []
                raise SessionError(0, NotCalibrated(f"no usable standing prefix: {e}")) from e
            self.pipeline.calibration = cal
            # warm the filters and velocity history on the standing window
            for f in self._pending:
                sig_l, sig_r = self.pipeline.push_frame(f)
            self.prev_v = [sig_l.v, sig_r.v]
            self._pending = []
        return self._neutral_record(frame.t)

    def finish(self) -> None:
        """Raise if the stream ended before calibration could complete."""
        if not self.calibrated:
            raise SessionError(0, NotCalibrated(
                f"stream ended after {len(self._pending)} frames, {self._n_cal} needed for calibration"
            ))

    def _tick(self, frame: TrackingFrame) -> dict:
        t = frame.t
        sig = self.pipeline.push_frame(frame)
        raw_events = ([], [])
        new_phases = list(self.phases)
        for i in (0, 1):
            phase, ev = fsm_step(sig[i], self.phases[i], self.thresholds, self.prev_v[i])
            new_phases[i] = phase
            if ev is not None:
                raw_events[i].append(ev)
        before = self.context
        res = coordinator_update(raw_events[0], raw_events[1], before, t, phases=new_phases)
        for foot in res.rejected:
            i = 0 if foot is Foot.LEFT else 1
            new_phases[i] = self.phases[i]
        ctx, stop = stop_timer_update(res.context, t, self.thresholds.t_stop)
        events = list(res.events)
        if stop is not None:
            events.append(stop)
            self.mapper.begin_stop()
            new_phases = [GaitPhase.INITIAL_DOUBLE_SUPPORT, GaitPhase.INITIAL_DOUBLE_SUPPORT]
        self.phases = new_phases
        self.context = ctx
        self.prev_v = [sig[0].v, sig[1].v]

        swing = ctx.swing_foot
        if swing is not None:
            i = 0 if swing is Foot.LEFT else 1
            targets = self.mapper.update(
                swing is Foot.LEFT, ctx.step_kind is StepKind.FIRST, new_phases[i], sig[i].h
            )
        else:
            targets = self.mapper.update(None, False, None, 0.0)

        owner = swing or before.swing_foot
        if owner is not None:
            accumulate(sig[0 if owner is Foot.LEFT else 1].s, self.speed)
        for ev in events:
            adapt_on_event(ev.kind, t, self.speed, self.model)
        decay_check(t, self.speed, stopped=stop is not None, model=self.model)
        integrate(self.dt, self.speed)
        self.events.extend(events)

        return {
            "t": t,
            "zl": targets.z_left,
            "zr": targets.z_right,
            "yl": targets.y_left,
            "yr": targets.y_right,
            "dh": targets.pelvis_dh,
            "ycurr": targets.y_curr,
            "speed": self.speed.current_speed,
            "dist": self.speed.distance,
            "phase_l": new_phases[0].value,
            "phase_r": new_phases[1].value,
            "hl": sig[0].h,
            "hr": sig[1].h,
            "sl": sig[0].s,
            "sr": sig[1].s,
            "events": [{"foot": e.foot.value if e.foot else None, "event": e.kind.value} for e in events],
        }


@dataclass
class SessionRecord:
    config: EngineConfig
    records: list[dict] = field(default_factory=list)
    events: list[GaitEvent] = field(default_factory=list)
    calibration: Optional[FloorCalibration] = None
    spacing_flags: list[int] = field(default_factory=list)

    def metrics(self, goal_m: Optional[float] = None):
        from .metrics import compute_metrics

        return compute_metrics(self.records, self.events, goal_m=self.config.goal_m if goal_m is None else goal_m)


def run_session(
    config: EngineConfig,
    frames: Iterable[TrackingFrame],
    calibration: Optional[FloorCalibration] = None,
) -> SessionRecord:
    engine = Engine(config, calibration)
    records = [engine.step(f) for f in frames]
    engine.finish()
    return SessionRecord(
        config=config,
        records=records,
        events=engine.events,
        calibration=engine.pipeline.calibration,
        spacing_flags=list(engine.pipeline.spacing_flags),
    )


def events_of(kind: EventKind, events: Iterable[GaitEvent]) -> list[GaitEvent]:
    return [e for e in events if e.kind is kind]
