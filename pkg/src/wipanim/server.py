"""NDJSON-over-TCP session server.

Every connection is its own session: the client streams frame lines and
gets one output-record line back per frame. When the client closes its
write side (or goes idle past the timeout) the server sends a final
``{"metrics": ...}`` line and closes.
"""

from __future__ import annotations

import logging
import signal
import socket
import socketserver
from typing import Optional

from .config import EngineConfig
from .engine import Engine
from .errors import FrameFormatError, SessionError
from .jsonl import dumps, parse_frame
from .metrics import compute_metrics
from .signals import FloorCalibration

log = logging.getLogger(__name__)


class SessionHandler(socketserver.StreamRequestHandler):
    def handle(self):
        srv = self.server
        if srv.idle_timeout:
            self.connection.settimeout(srv.idle_timeout)
        engine = Engine(srv.config, srv.calibration)
        records = []
        lineno = 0
        try:
            for raw in self.rfile:
                lineno += 1
                line = raw.decode("utf-8", errors="replace")
                if not line.strip():
                    continue
                try:
                    rec = engine.step(parse_frame(line, lineno))
                except FrameFormatError as e:
                    self._send({"error": str(e), "line": e.line})
                    continue
                except SessionError as e:
                    self._send({"error": str(e), "line": lineno, "tick": e.tick})
                    continue
                records.append(rec)
                self._send(rec)
        except socket.timeout:
            log.info("session from %s idle, closing", self.client_address)
        except (ConnectionError, OSError):
            return
        self._finish(engine, records)

    def _finish(self, engine, records):
        try:
            engine.finish()
        except SessionError as e:
            self._send({"error": str(e)})
            return
        m = compute_metrics(records, engine.events, goal_m=engine.config.goal_m)
        self._send({"metrics": m.to_dict()})

    def _send(self, obj):
        try:
            self.wfile.write((dumps(obj) + "\n").encode())
            self.wfile.flush()
        except OSError:
            pass


class SessionServer(socketserver.ThreadingTCPServer):
    daemon_threads = True

    def __init__(self, address, config: EngineConfig, calibration: Optional[FloorCalibration] = None,
                 idle_timeout: Optional[float] = None):
        self.config = config
        self.calibration = calibration
        self.idle_timeout = idle_timeout
        super().__init__(address, SessionHandler)


def make_server(port: int, config: EngineConfig = EngineConfig(), host: str = "127.0.0.1",
                calibration: Optional[FloorCalibration] = None, idle_timeout: Optional[float] = None) -> SessionServer:
    """Bind (raises ``OSError`` if the port is taken) without serving yet."""
    return SessionServer((host, port), config, calibration, idle_timeout)


def serve_stream(port: int, config: EngineConfig = EngineConfig(), host: str = "127.0.0.1",
                 calibration: Optional[FloorCalibration] = None, idle_timeout: Optional[float] = None) -> None:
    server = make_server(port, config, host, calibration, idle_timeout)

    def _stop(signum, frame):
        raise KeyboardInterrupt

    signal.signal(signal.SIGTERM, _stop)
    log.info("serving on %s:%d", host, server.server_address[1])
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
