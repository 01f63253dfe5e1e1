"""Foot height to IK-target mapping.

Depths ``z`` are in the avatar's local frame, positive forward and
symmetric about the trunk. Every depth curve is a cosine of the swing
foot's height scaled so that ``h = y_max`` is a quarter gait cycle:
mid-swing sits at the peak and ``h = 0`` at the ends.

The formulas are written in terms of the swing foot and the other foot,
which covers both the left-first and the mirrored right-first cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import LegOverextension
from .gait import GaitPhase


@dataclass(frozen=True)
class MapperConstants:
    z_max: float = 0.6  # max avatar step length
    y_max: float = 0.3  # max avatar step height
    l_leg: float = 0.8
    vertical_scale: float = 0.5
    alpha: float = 0.3  # lerp factor per tick
    y_init: float = 0.0
    stop_eps: float = 1e-3
    ik_hint_forward: float = 0.29  # metadata only; IK is not solved here

    def __post_init__(self):
        if not (0.0 < 0.5 * self.z_max < self.l_leg):
            raise ValueError("need 0 < z_max/2 < l_leg")
        if self.y_max <= 0.0:
            raise ValueError("y_max must be positive")
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError("alpha must lie in (0, 1]")

    @property
    def H(self) -> float:
        return 4.0 * self.y_max

    @property
    def max_pelvis_drop(self) -> float:
        half = 0.5 * self.z_max
        return self.l_leg - math.sqrt(self.l_leg ** 2 - half * half)


DEFAULT_CONSTANTS = MapperConstants()


def clamp_height(h: float, c: MapperConstants = DEFAULT_CONSTANTS) -> float:
    return min(max(h, 0.0), c.y_max)


def first_step_depths(h: float, phase: GaitPhase, c: MapperConstants = DEFAULT_CONSTANTS):
    """(z_swing, z_support) for the step that starts from neutral stance."""
    q = 0.25 * c.z_max
    w = q * math.cos(2.0 * math.pi * h / c.H)
    if phase is GaitPhase.ASCENDING:
        z_swing = -w + q
    else:
        z_swing = w + q
    return z_swing, -z_swing


def consecutive_depths(h: float, phase: GaitPhase, c: MapperConstants = DEFAULT_CONSTANTS):
    """(z_swing, z_trail) for every step after the first.

    The swing foot starts behind the trunk; on the way down a
    ``sin(4*pi*h/H)`` term pushes it slightly past its landing point.
    """
    half = 0.5 * c.z_max
    x = 2.0 * math.pi * h / c.H
    w = half * math.cos(x)
    if phase is GaitPhase.ASCENDING:
        return -w, w
    return w + 0.25 * c.z_max * math.sin(2.0 * x), -w


def pelvis_drop(z_trail: float, c: MapperConstants = DEFAULT_CONSTANTS) -> float:
    """How far the pelvis sinks when the trailing foot sits ``z_trail`` off the trunk."""
    if abs(z_trail) >= c.l_leg:
        raise LegOverextension(f"|z|={abs(z_trail):.4f} m reaches leg length {c.l_leg} m")
    return c.l_leg - math.sqrt(c.l_leg * c.l_leg - z_trail * z_trail)


def vertical_targets(h: float, dh: float, c: MapperConstants = DEFAULT_CONSTANTS):
    """(y_swing, y_support); the same in both swing phases."""
    return c.vertical_scale * h + dh, dh


def smooth_toward(current: float, desired: float, alpha: float) -> float:
    return current + alpha * (desired - current)


@dataclass(frozen=True)
class IkTargets:
    z_left: float = 0.0
    z_right: float = 0.0
    y_left: float = 0.0
    y_right: float = 0.0
    pelvis_dh: float = 0.0
    y_curr: float = 0.0

    def channels(self):
        return (self.z_left, self.z_right, self.y_left, self.y_right, self.pelvis_dh)


def stop_retract(current: IkTargets, c: MapperConstants = DEFAULT_CONSTANTS) -> tuple[IkTargets, bool]:
    """One retraction tick toward neutral stance; returns (targets, converged)."""
    zl, zr, yl, yr, dh = (smooth_toward(v, 0.0, c.alpha) for v in current.channels())
    if all(abs(v) < c.stop_eps for v in (zl, zr, yl, yr, dh)):
        return IkTargets(y_curr=c.y_init), True
    return IkTargets(zl, zr, yl, yr, dh, c.y_init - dh), False


def step_depths(kind_first: bool, h: float, phase: GaitPhase, c: MapperConstants = DEFAULT_CONSTANTS):
    if kind_first:
        return first_step_depths(h, phase, c)
    return consecutive_depths(h, phase, c)


class IkMapper:
    """Per-session target state: desired pose from the equations, then lerp.

    Between swings the desired pose is the last swing's curve evaluated at
    ``h = 0`` on the branch it ended on, so a completed step holds its
    landing pose and an aborted lift falls back to where it started.
    """

    def __init__(self, c: MapperConstants = DEFAULT_CONSTANTS):
        self.c = c
        self.current = IkTargets(y_curr=c.y_init)
        self.retracting = False
        self._last = None  # (first_step, swing_is_left, phase) of the latest swing tick

    def begin_stop(self) -> None:
        self.retracting = True
        self._last = None

    def neutral(self) -> bool:
        return all(v == 0.0 for v in self.current.channels())

    def update(self, swing_is_left, first_step: bool, phase: GaitPhase | None, h_swing: float) -> IkTargets:
        """Advance one tick.

        ``swing_is_left`` is None when no foot owns a swing; ``phase`` is the
        swing foot's phase after this tick's transition.
        """
        c = self.c
        if swing_is_left is not None and phase is not None and phase.swinging:
            self.retracting = False
            h = clamp_height(h_swing, c)
            self._last = (first_step, swing_is_left, phase)
        elif self.retracting:
            self.current, done = stop_retract(self.current, c)
            if done:
                self.retracting = False
            return self.current
        elif self._last is not None:
            first_step, swing_is_left, phase = self._last
            h = 0.0
        else:
            return self._settle(0.0, 0.0, 0.0, 0.0, 0.0)

        z_swing, z_other = step_depths(first_step, h, phase, c)
        dh = pelvis_drop(min(z_swing, z_other), c)
        y_swing, y_other = vertical_targets(h, dh, c)
        if swing_is_left:
            return self._settle(z_swing, z_other, y_swing, y_other, dh)
        return self._settle(z_other, z_swing, y_other, y_swing, dh)

    def _settle(self, zl, zr, yl, yr, dh) -> IkTargets:
        a = self.c.alpha
        cur = self.current
        zl = smooth_toward(cur.z_left, zl, a)
        zr = smooth_toward(cur.z_right, zr, a)
        yl = smooth_toward(cur.y_left, yl, a)
        yr = smooth_toward(cur.y_right, yr, a)
        dh = smooth_toward(cur.pelvis_dh, dh, a)
        self.current = IkTargets(zl, zr, yl, yr, dh, self.c.y_init - dh)
        return self.current
