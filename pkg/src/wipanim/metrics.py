"""Objective session metrics computed from per-tick output records."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Optional, Sequence

from .errors import IncompleteSession
from .gait import EventKind, Foot, GaitEvent


@dataclass(frozen=True)
class SessionMetrics:
    t_c: Optional[float]  # None when the goal distance was never reached
    avg_foot_speed: float
    avg_walk_speed: float
    avg_step_height: Optional[float]  # None without any mid-swing
    n_steps: int

    def to_dict(self) -> dict:
        return asdict(self)


def events_from_records(records: Iterable[dict]) -> list[GaitEvent]:
    out = []
    for r in records:
        for e in r.get("events", ()):
            foot = e.get("foot")
            out.append(GaitEvent(EventKind(e["event"]), Foot(foot) if foot else None, float(r["t"])))
    return out


def compute_metrics(
    records: Sequence[dict],
    events: Optional[Sequence[GaitEvent]] = None,
    goal_m: float = 50.0,
    strict: bool = False,
) -> SessionMetrics:
    """Metrics over the walking span.

    Walking starts at the first initial swing (or the first moving tick if no
    events are known) and ends when the goal is reached, else at the last
    terminal swing. Foot speed per tick is the mean of both feet. With
    ``strict`` an unreached goal raises :class:`IncompleteSession`.
    """
    if events is None:
        events = events_from_records(records)
    lifts = [e.t for e in events if e.kind is EventKind.INITIAL_SWING]
    landings = [e.t for e in events if e.kind is EventKind.TERMINAL_SWING]
    mids = [e for e in events if e.kind is EventKind.MID_SWING]

    if lifts:
        start = lifts[0]
    else:
        moving = [r["t"] for r in records if r.get("speed", 0.0) > 0.0]
        start = moving[0] if moving else (records[0]["t"] if records else 0.0)

    t_goal = next((r["t"] for r in records if r["dist"] >= goal_m - 1e-9), None)
    t_c = None if t_goal is None else t_goal - start
    if t_c is None and strict:
        raise IncompleteSession(f"goal of {goal_m} m never reached")

    end = t_goal if t_goal is not None else (landings[-1] if landings else start)
    span = [r for r in records if start <= r["t"] <= end]
    if span:
        foot = math.fsum(0.5 * (r.get("sl", 0.0) + r.get("sr", 0.0)) for r in span) / len(span)
        walk = math.fsum(r["speed"] for r in span) / len(span)
    else:
        foot = walk = 0.0

    by_t = {r["t"]: r for r in records}
    heights = []
    for e in mids:
        r = by_t.get(e.t)
        if r is not None:
            heights.append(r["hl"] if e.foot is Foot.LEFT else r["hr"])
    step_h = math.fsum(heights) / len(heights) if heights else None
    return SessionMetrics(
        t_c=t_c,
        avg_foot_speed=foot,
        avg_walk_speed=walk,
        avg_step_height=step_h,
        n_steps=len(landings),
    )
