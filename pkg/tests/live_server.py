"""Start a real uvicorn server around a teleop session for integration tests."""

import contextlib
import socket
import threading
import time

import uvicorn

from wrenchguard.teleop import build_app


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


@contextlib.contextmanager
def live_server(session, turbo=False, record_dir=None, scenario_dict=None):
    app = build_app(session, turbo=turbo, record_dir=record_dir, scenario_dict=scenario_dict)
    port = free_port()
    server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=port, log_level="warning"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 15.0
    while not server.started:
        if time.time() > deadline or not thread.is_alive():
            raise RuntimeError("server did not start")
        time.sleep(0.01)
    try:
        yield f"127.0.0.1:{port}"
    finally:
        server.should_exit = True
        thread.join(timeout=15.0)
