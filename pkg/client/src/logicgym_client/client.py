"""HTTP client for the environment service with retry and batching.

Transient failures (connection errors, 5xx) are retried with exponential
back-off and jitter; 4xx responses raise ValidationError immediately.  A
scoring call either returns the server's verdict or raises — a reward is
never silently defaulted.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

import httpx


class ClientError(Exception):
    pass


class ValidationError(ClientError):
    """The server rejected the request (4xx)."""

    def __init__(self, status_code: int, message: str):
        super().__init__(f"{status_code}: {message}")
        self.status_code = status_code
        self.message = message


class ServerError(ClientError):
    """The server kept failing (5xx) after all retries."""


class ConnectionFailed(ClientError):
    """The service was unreachable after all retries."""


@dataclass(frozen=True)
class Instance:
    instance_id: str
    prompt: str
    depth: int
    answer: str | None = None


@dataclass(frozen=True)
class ScoredResult:
    reward: int
    extracted: str | None
    failure_kind: str


class EnvClient:
    def __init__(
        self,
        base_url: str,
        timeout: float = 30.0,
        max_retries: int = 4,
        backoff: float = 0.25,
        transport: httpx.BaseTransport | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.max_retries = max_retries
        self.backoff = backoff
        self._http = httpx.Client(
            base_url=self.base_url, timeout=timeout, transport=transport
        )

    def close(self):
        self._http.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _request(self, method: str, path: str, **kw) -> dict:
        attempt = 0
        while True:
            try:
                resp = self._http.request(method, path, **kw)
            except (httpx.ConnectError, httpx.ReadTimeout, httpx.ConnectTimeout) as exc:
                if attempt >= self.max_retries:
                    raise ConnectionFailed(str(exc)) from exc
            else:
                if resp.status_code < 400:
                    return resp.json()
                if resp.status_code < 500:
                    try:
                        message = resp.json().get("message", resp.text)
                    except ValueError:
                        message = resp.text
                    raise ValidationError(resp.status_code, message)
                if attempt >= self.max_retries:
                    raise ServerError(f"{resp.status_code}: {resp.text}")
            delay = self.backoff * 2**attempt + random.random() * self.backoff
            time.sleep(delay)
            attempt += 1

    def healthz(self) -> dict:
        return self._request("GET", "/healthz")

    def generate(
        self,
        level: str | None = None,
        depth: int | None = None,
        flags: dict | None = None,
        count: int = 1,
        seed: int | None = None,
        candidates: int = 4,
        include_answers: bool = False,
        session_id: str | None = None,
        batch_size: int = 256,
    ) -> list[Instance]:
        """Fetch `count` instances, splitting large requests into batches.

        With a seed, each batch requests its window of the seeded sequence via
        seed_offset, so the result is identical for any batch_size.
        """
        out: list[Instance] = []
        for start in range(0, count, batch_size):
            n = min(batch_size, count - start)
            body: dict = {"count": n, "candidates": candidates,
                          "include_answers": include_answers}
            if session_id is not None:
                body["session_id"] = session_id
            else:
                body["level"] = level
                body["flags"] = flags
                body["depth"] = depth
            if seed is not None:
                body["seed"] = seed
                body["seed_offset"] = start
            data = self._request("POST", "/v1/generate", json=body)
            out.extend(
                Instance(
                    instance_id=e["instance_id"],
                    prompt=e["prompt"],
                    depth=e["depth"],
                    answer=e.get("answer"),
                )
                for e in data["instances"]
            )
        return out

    def score(self, instance_id: str, completion: str) -> ScoredResult:
        data = self._request(
            "POST", "/v1/score",
            json={"instance_id": instance_id, "completion": completion},
        )
        return ScoredResult(
            reward=data["reward"],
            extracted=data["extracted"],
            failure_kind=data["failure_kind"],
        )

    def session(
        self,
        strategy: str,
        d_max: int,
        level: str | None = None,
        d_cur: int | None = None,
        delta: int | None = None,
        threshold: float | None = None,
        window: int | None = None,
        candidates: int = 4,
        idempotency_key: str | None = None,
    ) -> "SessionHandle":
        body = {"strategy": strategy, "d_max": d_max, "level": level,
                "candidates": candidates}
        for key, val in (
            ("d_cur", d_cur), ("delta", delta), ("threshold", threshold),
            ("window", window), ("idempotency_key", idempotency_key),
        ):
            if val is not None:
                body[key] = val
        data = self._request("POST", "/v1/sessions", json=body)
        return SessionHandle(self, data["session_id"], data["state"])


class SessionHandle:
    def __init__(self, client: EnvClient, session_id: str, state: dict):
        self.client = client
        self.session_id = session_id
        self.initial_state = state

    def generate(self, count: int = 1, seed: int | None = None, **kw) -> list[Instance]:
        return self.client.generate(
            session_id=self.session_id, count=count, seed=seed, **kw
        )

    def state(self) -> dict:
        return self.client._request("GET", f"/v1/sessions/{self.session_id}")["state"]
