import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wipanim.gait import (
    EventKind,
    Foot,
    FsmThresholds,
    GaitPhase,
    StepKind,
    WalkContext,
    coordinator_update,
    fsm_step,
    stop_timer_update,
)
from wipanim.signals import FootSignal

DS = GaitPhase.DOUBLE_SUPPORT
ASC = GaitPhase.ASCENDING
DESC = GaitPhase.DESCENDING


def sig(h, v):
    return FootSignal(h, v, abs(v))


@pytest.mark.parametrize(
    "phase, h, v, expected, event",
    [
        (DS, 0.02, 0.35, ASC, EventKind.INITIAL_SWING),
        (GaitPhase.INITIAL_DOUBLE_SUPPORT, 0.02, 0.35, ASC, EventKind.INITIAL_SWING),
        (ASC, 0.25, -0.3, DESC, EventKind.MID_SWING),
        (DS, 0.0, 0.0, DS, None),
        (ASC, 0.05, 0.1, DS, None),  # aborted lift
        (DESC, 0.05, -0.1, DS, EventKind.TERMINAL_SWING),
        (DESC, 0.05, -0.5, DESC, None),
        (ASC, 0.05, -0.3, ASC, None),  # below p1, no mid-swing
        (ASC, 0.2, 0.5, ASC, None),
        (DS, 0.2, -0.5, DS, None),
    ],
)
def test_transitions(phase, h, v, expected, event):
    assert fsm_step(sig(h, v), phase) == (expected, event)


def test_spike_guard_holds_one_tick():
    spike = sig(0.01, 0.9)
    assert fsm_step(spike, DS, prev_v=0.0) == (DS, None)
    assert fsm_step(spike, DS, prev_v=0.9) == (ASC, EventKind.INITIAL_SWING)
    assert fsm_step(spike, DS, FsmThresholds(spike_guard=False)) == (ASC, EventKind.INITIAL_SWING)
    # above p1 the guard does not apply
    assert fsm_step(sig(0.2, 0.9), DS) == (ASC, EventKind.INITIAL_SWING)


def test_thresholds_validated():
    with pytest.raises(ValueError):
        FsmThresholds(v1=0.7, v2=0.6)


CODE = {GaitPhase.INITIAL_DOUBLE_SUPPORT: "I", DS: "S", ASC: "A", DESC: "D"}


@given(st.lists(st.tuples(st.floats(-0.05, 0.4), st.floats(-2, 2)), max_size=200))
def test_phase_sequences_follow_the_diagram(samples):
    phase, prev = GaitPhase.INITIAL_DOUBLE_SUPPORT, 0.0
    seq = [CODE[phase]]
    events = []
    for h, v in samples:
        phase, ev = fsm_step(sig(h, v), phase, prev_v=prev)
        prev = v
        seq.append(CODE[phase])
        if ev:
            events.append(ev)
    s = "".join(seq)
    collapsed = re.sub(r"(.)\1+", r"\1", s)
    assert re.fullmatch(r"I?S?(A(D)?S)*(AD?)?", collapsed), collapsed
    # every mid-swing sits between an initial swing and the next terminal swing
    open_swing = False
    mid_seen = False
    for ev in events:
        if ev is EventKind.INITIAL_SWING:
            open_swing, mid_seen = True, False
        elif ev is EventKind.MID_SWING:
            assert open_swing and not mid_seen
            mid_seen = True
        elif ev is EventKind.TERMINAL_SWING:
            assert open_swing and mid_seen
            open_swing = False


class TestCoordinator:
    def test_first_step(self):
        res = coordinator_update([EventKind.INITIAL_SWING], [], WalkContext(), 1.0)
        assert res.context.step_kind is StepKind.FIRST
        assert res.context.swing_foot is Foot.LEFT
        assert [e.kind for e in res.events] == [EventKind.INITIAL_SWING]

    def test_consecutive_after_first(self):
        ctx = coordinator_update([EventKind.INITIAL_SWING], [], WalkContext(), 1.0).context
        ctx = coordinator_update([EventKind.MID_SWING], [], ctx, 1.3).context
        ctx = coordinator_update([EventKind.TERMINAL_SWING], [], ctx, 1.6).context
        assert ctx.steps_completed == 1 and ctx.swing_foot is None
        ctx = coordinator_update([], [EventKind.INITIAL_SWING], ctx, 1.7).context
        assert ctx.step_kind is StepKind.CONSECUTIVE
        assert ctx.swing_foot is Foot.RIGHT

    def test_same_tick_handover(self):
        ctx = WalkContext(step_kind=StepKind.FIRST, swing_foot=Foot.LEFT, last_swing=Foot.LEFT)
        res = coordinator_update([EventKind.TERMINAL_SWING], [EventKind.INITIAL_SWING], ctx, 2.0)
        assert res.context.swing_foot is Foot.RIGHT
        assert res.context.step_kind is StepKind.CONSECUTIVE
        assert res.rejected == ()

    def test_concurrent_lift_keeps_first_foot(self):
        res = coordinator_update([EventKind.INITIAL_SWING], [EventKind.INITIAL_SWING], WalkContext(), 0.5)
        assert res.context.swing_foot is Foot.LEFT
        assert res.rejected == (Foot.RIGHT,)
        assert res.context.rejected_lifts == 1
        assert len(res.events) == 1

    def test_concurrent_lift_prefers_alternation(self):
        ctx = WalkContext(step_kind=StepKind.FIRST, steps_completed=1, last_swing=Foot.LEFT, double_support_since=1.0)
        res = coordinator_update([EventKind.INITIAL_SWING], [EventKind.INITIAL_SWING], ctx, 1.1)
        assert res.context.swing_foot is Foot.RIGHT
        assert res.rejected == (Foot.LEFT,)

    def test_lift_while_other_swings_is_rejected(self):
        ctx = WalkContext(step_kind=StepKind.CONSECUTIVE, swing_foot=Foot.RIGHT, steps_completed=2)
        res = coordinator_update([EventKind.INITIAL_SWING], [], ctx, 3.0)
        assert res.context.swing_foot is Foot.RIGHT
        assert res.rejected == (Foot.LEFT,)
        assert res.events == ()

    def test_double_support_timestamp(self):
        res = coordinator_update([], [], WalkContext(), 4.0, phases=(DS, DS))
        assert res.context.double_support_since == 4.0
        res = coordinator_update([], [], res.context, 4.5, phases=(DS, DS))
        assert res.context.double_support_since == 4.0

    def test_aborted_lift_restores_timer(self):
        ctx = WalkContext(step_kind=StepKind.CONSECUTIVE, steps_completed=3, double_support_since=10.0, last_swing=Foot.RIGHT)
        ctx = coordinator_update([EventKind.INITIAL_SWING], [], ctx, 10.5, phases=(ASC, DS)).context
        assert ctx.double_support_since is None
        res = coordinator_update([], [], ctx, 10.6, phases=(DS, DS))
        assert res.aborted is Foot.LEFT
        assert res.context.double_support_since == 10.0
        assert res.context.steps_completed == 3


class TestStopTimer:
    def walking(self, since):
        return WalkContext(step_kind=StepKind.CONSECUTIVE, steps_completed=4, double_support_since=since)

    def test_fires_after_threshold(self):
        ctx, ev = stop_timer_update(self.walking(10.0), 11.6, 1.5)
        assert ev is not None and ev.kind is EventKind.STOP and ev.t == 11.6
        assert ctx.step_kind is StepKind.IDLE and ctx.steps_completed == 0

    def test_quiet_before_threshold(self):
        _, ev = stop_timer_update(self.walking(10.0), 11.0, 1.5)
        assert ev is None

    def test_quiet_during_swing(self):
        ctx = WalkContext(step_kind=StepKind.CONSECUTIVE, swing_foot=Foot.LEFT, steps_completed=4)
        assert stop_timer_update(ctx, 100.0)[1] is None

    def test_fires_once(self):
        ctx = self.walking(0.0)
        fired = 0
        for k in range(200):
            ctx, ev = stop_timer_update(ctx, k / 30, 1.5)
            fired += ev is not None
        assert fired == 1

    def test_idle_never_stops(self):
        assert stop_timer_update(WalkContext(double_support_since=0.0), 50.0)[1] is None
