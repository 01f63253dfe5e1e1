"""Engine configuration and its flat ``key = value`` text format.

Lines starting with ``#`` are comments. Unknown keys are rejected. An empty
file yields the default setup::

    # lengths in m, speeds in m/s, times in s, frequencies in Hz
    z_max = 0.6
    y_max = 0.3
    gain_k = 1.0
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError
from .gait import FsmThresholds
from .mapping import MapperConstants
from .signals import VELOCITY_ESTIMATORS
from .speed import MeanVerticalSpeed

UNITS = {
    "z_max": "m", "y_max": "m", "l_leg": "m", "vertical_scale": "1", "alpha": "1",
    "y_init": "m", "stop_eps": "m", "ik_hint_forward": "m",
    "p1": "m", "v1": "m/s", "v2": "m/s", "t_stop": "s", "spike_guard": "bool",
    "filter_order": "1", "cutoff_hz": "Hz", "sample_hz": "Hz", "velocity": "name",
    "calib_seconds": "s", "calib_max_std": "m",
    "gain_k": "1", "speed_cap": "m/s", "decay_alpha": "1", "decay_period_factor": "1",
    "decay_min_timeout": "s", "speed_pool": "windows", "goal_m": "m",
}


@dataclass(frozen=True)
class EngineConfig:
    z_max: float = 0.6
    y_max: float = 0.3
    l_leg: float = 0.8
    vertical_scale: float = 0.5
    alpha: float = 0.3
    y_init: float = 0.0
    stop_eps: float = 1e-3
    ik_hint_forward: float = 0.29
    p1: float = 0.1
    v1: float = 0.2
    v2: float = 0.6
    t_stop: float = 1.5
    spike_guard: bool = True
    filter_order: int = 2
    cutoff_hz: float = 4.0
    sample_hz: float = 30.0
    velocity: str = "first_difference"
    calib_seconds: float = 3.0
    calib_max_std: float = 0.02
    gain_k: float = 1.0
    speed_cap: float = 3.5
    decay_alpha: float = 0.3
    decay_period_factor: float = 1.5
    decay_min_timeout: float = 0.8
    speed_pool: int = 2
    goal_m: float = 50.0

    def __post_init__(self):
        if not (0.0 < self.cutoff_hz < self.sample_hz / 2.0):
            raise ConfigError(f"cutoff_hz={self.cutoff_hz} must be below Nyquist ({self.sample_hz / 2.0} Hz)")
        if self.filter_order < 1:
            raise ConfigError("filter_order must be >= 1")
        if self.velocity not in VELOCITY_ESTIMATORS:
            raise ConfigError(f"velocity must be one of {sorted(VELOCITY_ESTIMATORS)}")
        if self.speed_cap <= 0.0 or self.gain_k < 0.0:
            raise ConfigError("speed_cap must be positive and gain_k nonnegative")
        if self.speed_pool < 1:
            raise ConfigError("speed_pool must be >= 1")
        if not (0.0 < self.decay_alpha <= 1.0):
            raise ConfigError("decay_alpha must lie in (0, 1]")
        try:
            self.mapper()
            self.thresholds()
        except ValueError as e:
            raise ConfigError(str(e)) from None

    @property
    def H(self) -> float:
        return 4.0 * self.y_max

    def mapper(self) -> MapperConstants:
        return MapperConstants(
            z_max=self.z_max, y_max=self.y_max, l_leg=self.l_leg,
            vertical_scale=self.vertical_scale, alpha=self.alpha, y_init=self.y_init,
            stop_eps=self.stop_eps, ik_hint_forward=self.ik_hint_forward,
        )

    def thresholds(self) -> FsmThresholds:
        return FsmThresholds(p1=self.p1, v1=self.v1, v2=self.v2, t_stop=self.t_stop, spike_guard=self.spike_guard)

    def speed_model(self) -> MeanVerticalSpeed:
        return MeanVerticalSpeed(
            gain_k=self.gain_k, period_factor=self.decay_period_factor,
            min_timeout=self.decay_min_timeout, pool=self.speed_pool,
        )

    def replace(self, **changes) -> "EngineConfig":
        return dataclasses.replace(self, **changes)

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool):
                value = "true" if value else "false"
            lines.append(f"{f.name} = {value}  # {UNITS[f.name]}")
        return "\n".join(lines) + "\n"


def _coerce(name: str, typ, raw: str):
    if typ in (bool, "bool"):
        low = raw.lower()
        if low in ("true", "1", "yes", "on"):
            return True
        if low in ("false", "0", "no", "off"):
            return False
        raise ConfigError(f"{name}: expected a boolean, got {raw!r}")
    if typ in (int, "int"):
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{name}: expected an integer, got {raw!r}") from None
    if typ in (str, "str"):
        return raw
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{name}: expected a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{name}: value must be finite")
    return value


def parse_config(text: str) -> EngineConfig:
    types = {f.name: f.type for f in fields(EngineConfig)}
    values = {}
    H = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = (p.strip() for p in line.split("=", 1))
        if key == "H":
            H = _coerce(key, float, raw)
            continue
        if key not in types:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _coerce(key, types[key], raw)
    cfg = EngineConfig(**values)
    if H is not None and abs(H - cfg.H) > 1e-12:
        raise ConfigError(f"H={H} contradicts H = 4*y_max = {cfg.H}")
    return cfg


def load_config(path) -> EngineConfig:
    if path is None:
        return EngineConfig()
    return parse_config(Path(path).read_text())
