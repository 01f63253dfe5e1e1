"""Per-foot gait-phase machine and the two-foot step coordinator.

Each foot cycles double support -> ascending -> descending -> double support.
The three swing events (initial, mid, terminal) are the arrows between
those phases; the coordinator decides which foot owns the current swing,
classifies it as a first or consecutive step and runs the stop timer.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from .signals import FootSignal

log = logging.getLogger(__name__)


class GaitPhase(enum.Enum):
    INITIAL_DOUBLE_SUPPORT = "initial_double_support"
    ASCENDING = "ascending"
    DESCENDING = "descending"
    DOUBLE_SUPPORT = "double_support"

    @property
    def supporting(self) -> bool:
        return self in (GaitPhase.INITIAL_DOUBLE_SUPPORT, GaitPhase.DOUBLE_SUPPORT)

    @property
    def swinging(self) -> bool:
        return not self.supporting


class EventKind(enum.Enum):
    INITIAL_SWING = "initial_swing"
    MID_SWING = "mid_swing"
    TERMINAL_SWING = "terminal_swing"
    STOP = "stop"


class Foot(enum.Enum):
    LEFT = "L"
    RIGHT = "R"

    @property
    def other(self) -> "Foot":
        return Foot.RIGHT if self is Foot.LEFT else Foot.LEFT


class StepKind(enum.Enum):
    IDLE = "idle"
    FIRST = "first"
    CONSECUTIVE = "consecutive"


@dataclass(frozen=True)
class GaitEvent:
    kind: EventKind
    foot: Optional[Foot]
    t: float

    def to_dict(self) -> dict:
        return {"t": self.t, "foot": self.foot.value if self.foot else None, "event": self.kind.value}

    @classmethod
    def from_dict(cls, d: dict) -> "GaitEvent":
        foot = d.get("foot")
        return cls(EventKind(d["event"]), Foot(foot) if foot else None, float(d["t"]))


@dataclass(frozen=True)
class FsmThresholds:
    p1: float = 0.1
    v1: float = 0.2
    v2: float = 0.6
    t_stop: float = 1.5
    spike_guard: bool = True

    def __post_init__(self):
        if not (0.0 < self.v1 < self.v2):
            raise ValueError(f"need 0 < v1 < v2, got v1={self.v1}, v2={self.v2}")
        if self.p1 <= 0.0 or self.t_stop <= 0.0:
            raise ValueError("p1 and t_stop must be positive")


def fsm_step(
    signal: FootSignal,
    phase: GaitPhase,
    thresholds: FsmThresholds = FsmThresholds(),
    prev_v: float = 0.0,
) -> tuple[GaitPhase, Optional[EventKind]]:
    """Advance one foot's phase by one tick.

    ``prev_v`` is the foot's velocity on the previous tick. With the spike
    guard on, a jump from rest straight above ``v2`` while the foot is still
    below ``p1`` is not trusted until the next tick confirms motion.
    """
    h, v = signal.h, signal.v
    th = thresholds
    if phase.supporting:
        if v > th.v1:
            spike = th.spike_guard and abs(v) > th.v2 and h < th.p1 and prev_v <= th.v1
            if not spike:
                return GaitPhase.ASCENDING, EventKind.INITIAL_SWING
        return phase, None
    settled = h < th.p1 and abs(v) < th.v1
    if phase is GaitPhase.ASCENDING:
        if v < -th.v1 and h > th.p1:
            return GaitPhase.DESCENDING, EventKind.MID_SWING
        if settled:
            return GaitPhase.DOUBLE_SUPPORT, None
        return phase, None
    # descending
    if settled:
        return GaitPhase.DOUBLE_SUPPORT, EventKind.TERMINAL_SWING
    return phase, None


@dataclass
class WalkContext:
    step_kind: StepKind = StepKind.IDLE
    swing_foot: Optional[Foot] = None
    double_support_since: Optional[float] = None
    steps_completed: int = 0
    rejected_lifts: int = 0
    last_swing: Optional[Foot] = None
    ds_before_lift: Optional[float] = None


@dataclass(frozen=True)
class CoordinatorResult:
    context: WalkContext
    events: tuple[GaitEvent, ...]
    rejected: tuple[Foot, ...] = ()
    aborted: Optional[Foot] = None


def coordinator_update(
    events_left: Iterable[EventKind],
    events_right: Iterable[EventKind],
    context: WalkContext,
    t: float,
    phases: Optional[Sequence[GaitPhase]] = None,
) -> CoordinatorResult:
    """Merge both feet's raw events into one accepted event stream.

    Terminal swings are handled before lifts so a foot landing and the
    other foot lifting on the same tick hand over cleanly. When both feet
    lift on one tick the foot that did not swing last wins. A lift while
    another foot owns the swing is rejected; the caller must put the
    rejected foot back into double support. ``phases`` (post-transition,
    left then right) lets the coordinator notice aborted lifts.
    """
    ctx = replace(context)
    raw = {Foot.LEFT: list(events_left), Foot.RIGHT: list(events_right)}
    accepted: list[GaitEvent] = []
    rejected: list[Foot] = []
    aborted = None

    for foot in (Foot.LEFT, Foot.RIGHT):
        for kind in raw[foot]:
            if kind is EventKind.TERMINAL_SWING and ctx.swing_foot is foot:
                ctx.steps_completed += 1
                ctx.swing_foot = None
                accepted.append(GaitEvent(kind, foot, t))
            elif kind is EventKind.MID_SWING and ctx.swing_foot is foot:
                accepted.append(GaitEvent(kind, foot, t))

    if phases is not None and ctx.swing_foot is not None:
        idx = 0 if ctx.swing_foot is Foot.LEFT else 1
        if phases[idx].supporting and not any(
            e.kind is EventKind.TERMINAL_SWING and e.foot is ctx.swing_foot for e in accepted
        ):
            aborted = ctx.swing_foot
            ctx.swing_foot = None
            # a blip never left double support, so its timer keeps running
            ctx.double_support_since = ctx.ds_before_lift
            if ctx.steps_completed == 0:
                ctx.step_kind = StepKind.IDLE

    order = (Foot.LEFT, Foot.RIGHT)
    if ctx.last_swing is Foot.LEFT:
        order = (Foot.RIGHT, Foot.LEFT)
    for foot in order:
        if EventKind.INITIAL_SWING not in raw[foot]:
            continue
        if ctx.swing_foot is None:
            ctx.swing_foot = foot
            ctx.last_swing = foot
            ctx.step_kind = StepKind.FIRST if ctx.steps_completed == 0 else StepKind.CONSECUTIVE
            ctx.ds_before_lift = ctx.double_support_since
            ctx.double_support_since = None
            accepted.append(GaitEvent(EventKind.INITIAL_SWING, foot, t))
        else:
            ctx.rejected_lifts += 1
            rejected.append(foot)
            log.info("t=%.3f: lift of %s discarded, %s owns the swing", t, foot.value, ctx.swing_foot.value)

    if ctx.swing_foot is None and ctx.double_support_since is None:
        feet = (Foot.LEFT, Foot.RIGHT)
        if phases is None or all(p.supporting or f in rejected for f, p in zip(feet, phases)):
            ctx.double_support_since = t
    return CoordinatorResult(ctx, tuple(accepted), tuple(rejected), aborted)


def stop_timer_update(
    context: WalkContext, t: float, t_stop: float = 1.5
) -> tuple[WalkContext, Optional[GaitEvent]]:
    """Fire a single stop event once double support outlasts ``t_stop``.

    Only a walk that completed at least one step can stop; afterwards the
    context is idle, so the next lift is a first step again.
    """
    since = context.double_support_since
    if since is None or context.swing_foot is not None or context.steps_completed == 0:
        return context, None
    if t - since > t_stop:
        ctx = replace(context, step_kind=StepKind.IDLE, steps_completed=0)
        return ctx, GaitEvent(EventKind.STOP, None, t)
    return context, None
