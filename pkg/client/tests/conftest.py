"""Launches a real environment service subprocess for round-trip tests.

The client must consume the service purely over HTTP, so tests talk to
`logicgym serve` running in another process rather than importing the
server's internals.
"""

import socket
import subprocess
import sys
import time
from pathlib import Path

import httpx
import pytest

VECTOR_FILE = Path(__file__).resolve().parents[2] / "tests" / "vectors" / "reward_vectors.jsonl"


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture(scope="session")
def service_url():
    port = _free_port()
    proc = subprocess.Popen(
        [sys.executable, "-m", "logicgym.cli", "serve", "--trusted",
         "--port", str(port)],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    url = f"http://127.0.0.1:{port}"
    try:
        deadline = time.monotonic() + 30
        while True:
            try:
                if httpx.get(url + "/healthz", timeout=1.0).status_code == 200:
                    break
            except httpx.TransportError:
                pass
            if time.monotonic() > deadline:
                raise RuntimeError("service did not come up")
            time.sleep(0.2)
        yield url
    finally:
        proc.terminate()
        proc.wait(timeout=10)
