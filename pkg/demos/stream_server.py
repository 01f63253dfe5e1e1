"""
Streaming frames over TCP
=========================

Start the NDJSON session server on a free port, stream a recorded session
through it and check the replies against an offline run.
"""

import json
import socket
import threading

from wipanim import EngineConfig, SynthGaitSpec, generate, run_session
from wipanim.jsonl import dumps, frame_to_dict
from wipanim.server import make_server

server = make_server(0)  # port 0: let the OS pick
port = server.server_address[1]
threading.Thread(target=server.serve_forever, daemon=True).start()
print("serving on port", port)

frames, _ = generate(SynthGaitSpec(duration=8.0, tail=2.0))
payload = "".join(dumps(frame_to_dict(f)) + "\n" for f in frames)

with socket.create_connection(("127.0.0.1", port)) as conn:
    conn.sendall(payload.encode())
    conn.shutdown(socket.SHUT_WR)  # end of session
    reply = b""
    while chunk := conn.recv(65536):
        reply += chunk

lines = reply.decode().splitlines()
print(len(lines) - 1, "records for", len(frames), "frames")
print("last line:", lines[-1])

offline = [dumps(r) for r in run_session(EngineConfig(), frames).records]
print("identical to an offline run:", lines[:-1] == offline)

server.shutdown()
server.server_close()
