"""JSON-lines readers and writers for frames, output records, events and
calibration files.

Floats are written with ``repr`` precision (shortest round-trip form), so
re-reading a file reproduces the exact values.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Iterator

from .errors import FrameFormatError
from .gait import GaitEvent
from .signals import FloorCalibration, TrackingFrame


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def parse_frame(line: str, lineno: int | None = None) -> TrackingFrame:
    try:
        d = json.loads(line)
    except json.JSONDecodeError as e:
        raise FrameFormatError(f"line {lineno}: invalid JSON ({e.msg})", lineno) from None
    if not isinstance(d, dict):
        raise FrameFormatError(f"line {lineno}: expected an object", lineno)
    try:
        vals = [float(d[k]) for k in ("t", "ly", "ry")]
    except KeyError as e:
        raise FrameFormatError(f"line {lineno}: missing field {e.args[0]!r}", lineno) from None
    except (TypeError, ValueError):
        raise FrameFormatError(f"line {lineno}: t, ly and ry must be numbers", lineno) from None
    if not all(math.isfinite(v) for v in vals):
        raise FrameFormatError(f"line {lineno}: non-finite value", lineno)
    return TrackingFrame(*vals)


def frame_to_dict(frame: TrackingFrame) -> dict:
    return {"t": frame.t, "ly": frame.left_y_raw, "ry": frame.right_y_raw}


def iter_frames(lines: Iterable[str]) -> Iterator[TrackingFrame]:
    for lineno, line in enumerate(lines, 1):
        if line.strip():
            yield parse_frame(line, lineno)


def read_frames(path) -> list[TrackingFrame]:
    with open(path) as fh:
        return list(iter_frames(fh))


def write_lines(path, objs: Iterable[dict]) -> None:
    with open(path, "w") as fh:
        for obj in objs:
            fh.write(dumps(obj) + "\n")


def write_frames(path, frames: Iterable[TrackingFrame]) -> None:
    write_lines(path, (frame_to_dict(f) for f in frames))


def read_records(path) -> list[dict]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError as e:
                raise FrameFormatError(f"line {lineno}: invalid JSON ({e.msg})", lineno) from None
    return out


def write_events(path, events: Iterable[GaitEvent]) -> None:
    write_lines(path, (e.to_dict() for e in events))


def read_events(path) -> list[GaitEvent]:
    return [GaitEvent.from_dict(d) for d in read_records(path)]


def write_calibration(path, cal: FloorCalibration) -> None:
    Path(path).write_text(dumps({"floor_y": cal.floor_y, "n": cal.n_samples}) + "\n")


def read_calibration(path, sample_hz: float = 30.0) -> FloorCalibration:
    try:
        d = json.loads(Path(path).read_text())
        n = int(d["n"])
        return FloorCalibration(floor_y=float(d["floor_y"]), n_samples=n, duration=n / sample_hz)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise FrameFormatError(f"bad calibration file {path}: {e}", 1) from None
