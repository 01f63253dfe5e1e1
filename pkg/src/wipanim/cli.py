"""Command line: ``wipanim {calibrate,run,synth,metrics,serve}``.

Data errors exit 1 with one JSON error line on stderr; usage errors exit 2.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import jsonl
from .config import load_config
from .engine import run_session
from .errors import FrameFormatError, SessionError, WipError
from .metrics import compute_metrics
from .signals import calibrate_floor
from .synth import SynthGaitSpec, generate


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wipanim", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("calibrate", help="floor height from a standing recording")
    c.add_argument("frames")
    c.add_argument("-o", "--output", required=True)
    c.add_argument("-c", "--config")

    r = sub.add_parser("run", help="process a frame file into output records")
    r.add_argument("-i", "--input", required=True)
    r.add_argument("-o", "--output", required=True)
    r.add_argument("-c", "--config")
    r.add_argument("--calibration", help="calibration file; otherwise the first 3 s are used")
    r.add_argument("--events", help="also write the event log here")

    s = sub.add_parser("synth", help="generate synthetic stepping frames")
    s.add_argument("spec", help="JSON file with generator fields")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--truth", help="write ground-truth events here")

    m = sub.add_parser("metrics", help="session metrics from an output file")
    m.add_argument("-i", "--input", required=True)
    m.add_argument("--goal", type=float, default=50.0, help="goal distance in m")

    v = sub.add_parser("serve", help="NDJSON session server over TCP")
    v.add_argument("--port", type=int, required=True)
    v.add_argument("--host", default="127.0.0.1")
    v.add_argument("-c", "--config")
    v.add_argument("--calibration")
    v.add_argument("--idle-timeout", type=float, default=None)
    return p


def _calibrate(args):
    cfg = load_config(args.config)
    frames = jsonl.read_frames(args.frames)
    n = round(cfg.calib_seconds * cfg.sample_hz)
    cal = calibrate_floor(frames[:n], cfg.sample_hz, cfg.calib_seconds, cfg.calib_max_std)
    jsonl.write_calibration(args.output, cal)


def _run(args):
    cfg = load_config(args.config)
    cal = jsonl.read_calibration(args.calibration, cfg.sample_hz) if args.calibration else None
    session = run_session(cfg, jsonl.read_frames(args.input), cal)
    jsonl.write_lines(args.output, session.records)
    if args.events:
        jsonl.write_events(args.events, session.events)


def _synth(args):
    with open(args.spec) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as e:
            raise FrameFormatError(f"spec: invalid JSON ({e.msg})", e.lineno) from None
    frames, truth = generate(SynthGaitSpec.from_dict(d))
    jsonl.write_frames(args.output, frames)
    if args.truth:
        jsonl.write_events(args.truth, truth)


def _metrics(args):
    records = jsonl.read_records(args.input)
    m = compute_metrics(records, goal_m=args.goal)
    print(jsonl.dumps(m.to_dict()))


def _serve(args):
    from .server import serve_stream

    cfg = load_config(args.config)
    cal = jsonl.read_calibration(args.calibration, cfg.sample_hz) if args.calibration else None
    serve_stream(args.port, cfg, host=args.host, calibration=cal, idle_timeout=args.idle_timeout)


COMMANDS = {"calibrate": _calibrate, "run": _run, "synth": _synth, "metrics": _metrics, "serve": _serve}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        COMMANDS[args.cmd](args)
    except FrameFormatError as e:
        print(jsonl.dumps({"error": str(e), "line": e.line}), file=sys.stderr)
        return 1
    except SessionError as e:
        print(jsonl.dumps({"error": str(e), "tick": e.tick}), file=sys.stderr)
        return 1
    except (WipError, OSError, TypeError) as e:
        print(jsonl.dumps({"error": f"{type(e).__name__}: {e}"}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
