"""
A synthetic walking session
===========================

Generate in-place stepping with known event times, run it through the
engine and compare detections, speed and the session metrics.
"""

from wipanim import EngineConfig, SynthGaitSpec, generate, run_session, score_detection
from wipanim.gait import EventKind

spec = SynthGaitSpec(cadence_hz=1.0, amplitude=0.25, duration=30.0, noise_sigma=0.005, seed=1, tail=2.5)
frames, truth = generate(spec)
print(len(frames), "frames,", sum(e.kind is EventKind.TERMINAL_SWING for e in truth), "true steps")

session = run_session(EngineConfig(), frames)

for kind in (EventKind.INITIAL_SWING, EventKind.MID_SWING, EventKind.TERMINAL_SWING):
    p, r = score_detection(truth, session.events, kinds=(kind,))
    print(f"{kind.value:>15}: precision {p:.3f} recall {r:.3f}")

# every tenth record of the first few seconds of walking
print(f"\n{'t':>6} {'zl':>7} {'zr':>7} {'dh':>6} {'speed':>6} {'dist':>6}")
for r in session.records[90:240:10]:
    print(f"{r['t']:6.2f} {r['zl']:7.3f} {r['zr']:7.3f} {r['dh']:6.3f} {r['speed']:6.3f} {r['dist']:6.2f}")

stops = [e for e in session.events if e.kind is EventKind.STOP]
print("\nstop detected at", [round(e.t, 2) for e in stops])
print("final record z:", session.records[-1]["zl"], session.records[-1]["zr"])

m = session.metrics(goal_m=10.0)
print("metrics with a 10 m goal:", m.to_dict())
