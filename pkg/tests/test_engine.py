import math

import pytest

from wipanim.config import EngineConfig
from wipanim.engine import RECORD_KEYS, Engine, run_session
from wipanim.errors import NotCalibrated, SessionError
from wipanim.gait import EventKind
from wipanim.signals import FloorCalibration, TrackingFrame
from wipanim.synth import SynthGaitSpec, generate, step_count


def standing(seconds, y=0.08):
    return [TrackingFrame(k / 30, y, y) for k in range(round(seconds * 30))]


def test_standing_only_is_idle():
    session = run_session(EngineConfig(), standing(3))
    assert len(session.records) == 90
    for r in session.records:
        assert (r["zl"], r["zr"], r["yl"], r["yr"], r["dh"], r["speed"], r["dist"]) == (0.0,) * 7
    session = run_session(EngineConfig(), standing(8))
    assert all(r["zl"] == 0.0 and r["speed"] == 0.0 for r in session.records)
    assert session.events == []


def test_record_shape():
    r = run_session(EngineConfig(), standing(4)).records[-1]
    assert tuple(r) == RECORD_KEYS


def test_missing_prefix():
    frames, _ = generate(SynthGaitSpec(standing_prefix=0.0, duration=10))
    with pytest.raises(SessionError) as info:
        run_session(EngineConfig(), frames)
    assert info.value.tick == 0
    assert isinstance(info.value.cause, NotCalibrated)


def test_short_stream_not_calibrated():
    with pytest.raises(SessionError) as info:
        run_session(EngineConfig(), standing(1))
    assert isinstance(info.value.cause, NotCalibrated)


def test_calibration_file_skips_prefix():
    frames, _ = generate(SynthGaitSpec(standing_prefix=0.0, duration=10))
    session = run_session(EngineConfig(), frames, FloorCalibration(0.08, 90, 3.0))
    assert len(session.records) == len(frames)
    assert session.metrics().n_steps >= 9


@pytest.fixture(scope="module")
def twenty_seconds():
    frames, truth = generate(SynthGaitSpec(duration=20.0, tail=2.5))
    return frames, truth, run_session(EngineConfig(), frames)


def test_twenty_steps(twenty_seconds):
    frames, truth, session = twenty_seconds
    assert step_count(truth) == 20
    assert session.metrics().n_steps == 20
    assert len(session.records) == len(frames)


def test_trajectories_are_continuous(twenty_seconds):
    _, _, session = twenty_seconds
    recs = session.records
    # smoothing caps per-tick jumps well below a full stride
    for a, b in zip(recs, recs[1:]):
        assert abs(b["zl"] - a["zl"]) < 0.15 and abs(b["zr"] - a["zr"]) < 0.15
    zl = [r["zl"] for r in recs]
    assert max(zl) > 0.25 and min(zl) < -0.25


def test_event_order(twenty_seconds):
    _, _, session = twenty_seconds
    kinds = [e.kind for e in session.events if e.kind is not EventKind.STOP]
    for i in range(0, len(kinds) - 2, 3):
        assert kinds[i : i + 3] == [EventKind.INITIAL_SWING, EventKind.MID_SWING, EventKind.TERMINAL_SWING]
    assert [e.kind for e in session.events].count(EventKind.STOP) == 1


def test_deterministic(twenty_seconds):
    frames, _, session = twenty_seconds
    assert run_session(EngineConfig(), frames).records == session.records


def test_time_shift_invariance(twenty_seconds):
    frames, _, session = twenty_seconds
    shifted = [TrackingFrame(f.t + 100.0, f.left_y_raw, f.right_y_raw) for f in frames]
    other = run_session(EngineConfig(), shifted)
    for a, b in zip(session.records, other.records):
        assert b["t"] == pytest.approx(a["t"] + 100.0)
        for key in ("zl", "zr", "yl", "yr", "speed"):
            assert b[key] == pytest.approx(a[key], abs=1e-9)


def test_non_monotonic_names_tick():
    frames = standing(4)
    frames[100] = TrackingFrame(0.5, 0.08, 0.08)
    with pytest.raises(SessionError) as info:
        run_session(EngineConfig(), frames)
    assert info.value.tick == 100


def test_stop_resets_phases(twenty_seconds):
    _, _, session = twenty_seconds
    stop_t = next(e.t for e in session.events if e.kind is EventKind.STOP)
    rec = next(r for r in session.records if r["t"] == stop_t)
    assert rec["phase_l"] == rec["phase_r"] == "initial_double_support"


def test_engine_incremental_equals_batch(twenty_seconds):
    frames, _, session = twenty_seconds
    eng = Engine(EngineConfig())
    assert [eng.step(f) for f in frames] == session.records
