"""Real-time leg-animation targets for walking-in-place locomotion.

Raw ankle heights go in at 30 Hz; IK-target depths and heights for both
feet, a pelvis offset and a forward walking speed come out, one record per
frame.
"""

from .config import EngineConfig, load_config, parse_config
from .engine import Engine, SessionRecord, run_session
from .errors import WipError
from .gait import EventKind, Foot, FsmThresholds, GaitEvent, GaitPhase, StepKind, WalkContext
from .mapping import IkTargets, MapperConstants
from .metrics import SessionMetrics, compute_metrics
from .signals import FloorCalibration, FootSignal, TrackingFrame, calibrate_floor, design_lowpass
from .synth import SynthGaitSpec, generate, score_detection

__all__ = [
    "Engine", "EngineConfig", "EventKind", "FloorCalibration", "Foot", "FootSignal",
    "FsmThresholds", "GaitEvent", "GaitPhase", "IkTargets", "MapperConstants",
    "SessionMetrics", "SessionRecord", "StepKind", "SynthGaitSpec", "TrackingFrame",
    "WalkContext", "WipError", "calibrate_floor", "compute_metrics", "design_lowpass",
    "generate", "load_config", "parse_config", "run_session", "score_detection",
]

__version__ = "0.1.0"
