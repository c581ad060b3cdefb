"""HTTP environment server: generation, scoring, and curriculum sessions.

Gold answers stay on the server by default so a training loop can only learn
through the reward channel; a trusted-mode server may echo them for offline
dataset pulls.  Rewards reported for a curriculum session feed its rolling
accuracy once per instance, no matter how often a completion is re-scored.
"""

from __future__ import annotations

import hashlib
import json
import random
import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .core import ExpressivenessFlags, Level
from .curriculum import (
    DEFAULT_CURRICULUM,
    DEFAULT_THRESHOLD,
    DEFAULT_WINDOW,
    CurriculumState,
    Strategy,
    report_accuracy,
    sample_depth,
)
from .dataset import CorpusConfig, build_instance
from .reward import RewardOutcome, score


class GenerateRequest(BaseModel):
    level: str | None = None
    flags: dict | None = None
    depth: int | None = Field(default=None, ge=1)
    session_id: str | None = None
    count: int = Field(default=1, ge=1, le=4096)
    seed: int | None = None
    # Index of the first instance within the seeded sequence, so a batched
    # client can fetch any window of the same deterministic stream.
    seed_offset: int = Field(default=0, ge=0)
    candidates: int = Field(default=4, ge=2, le=8)
    max_distractors: int = Field(default=5, ge=0)
    include_answers: bool = False


class ScoreRequest(BaseModel):
    instance_id: str
    completion: str


class SessionRequest(BaseModel):
    strategy: Strategy
    d_max: int = Field(ge=1)
    level: str | None = None
    flags: dict | None = None
    d_cur: int | None = Field(default=None, ge=1)
    delta: int | None = Field(default=None, ge=1)
    threshold: float = Field(default=DEFAULT_THRESHOLD, ge=0.0, le=1.0)
    window: int = Field(default=DEFAULT_WINDOW, ge=1)
    candidates: int = Field(default=4, ge=2, le=8)
    max_distractors: int = Field(default=5, ge=0)
    idempotency_key: str | None = None


@dataclass
class InstanceRecord:
    prompt: str
    answer: str
    depth: int
    session_id: str | None = None
    batch_id: str | None = None
    outcome: RewardOutcome | None = None


@dataclass
class BatchRecord:
    instance_ids: list[str]
    rewards: dict[str, int] = field(default_factory=dict)
    reported: bool = False


@dataclass
class SessionRecord:
    session_id: str
    strategy: Strategy
    level: str
    state: CurriculumState
    candidates: int = 4
    max_distractors: int = 5
    instances_served: int = 0
    rewards_reported: int = 0
    batches: dict[str, BatchRecord] = field(default_factory=dict)

    def state_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "strategy": self.strategy.value,
            "level": self.level,
            "d_cur": self.state.d_cur,
            "delta": self.state.delta,
            "d_max": self.state.d_max,
            "threshold": self.state.threshold,
            "window": self.state.window,
            "history": list(self.state.history),
            "instances_served": self.instances_served,
            "rewards_reported": self.rewards_reported,
        }


def _resolve_flags(level: str | None, flags: dict | None) -> tuple[str, ExpressivenessFlags]:
    if flags is not None:
        try:
            f = ExpressivenessFlags(**flags)
        except (TypeError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return f.level.value, f
    if level is not None:
        try:
            return Level(level).value, ExpressivenessFlags.for_level(level)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
    raise HTTPException(status_code=400, detail="provide level or flags")


def create_app(
    trusted: bool = False,
    snapshot_path: str | None = None,
    snapshot_interval: float = 30.0,
) -> FastAPI:
    app = FastAPI(title="logicgym environment service", version=__version__)

    instances: dict[str, InstanceRecord] = {}
    sessions: dict[str, SessionRecord] = {}
    idempotency_keys: set[str] = set()
    lock = threading.Lock()
    last_snapshot = [0.0]

    def maybe_snapshot():
        if snapshot_path is None:
            return
        now = time.monotonic()
        if now - last_snapshot[0] < snapshot_interval:
            return
        last_snapshot[0] = now
        payload = {sid: rec.state_dict() for sid, rec in sessions.items()}
        with open(snapshot_path, "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)

    @app.exception_handler(HTTPException)
    async def http_error(request, exc: HTTPException):
        return JSONResponse(
            status_code=exc.status_code,
            content={"code": exc.status_code, "message": str(exc.detail)},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error(request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"code": 422, "message": str(exc.errors())},
        )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "version": __version__}

    @app.post("/v1/sessions")
    def create_session(req: SessionRequest):
        level, _ = _resolve_flags(req.level, req.flags)
        d_cur, delta = req.d_cur, req.delta
        default = DEFAULT_CURRICULUM.get(Level(level))
        if d_cur is None:
            if default is None:
                raise HTTPException(
                    status_code=400,
                    detail=f"no default curriculum for level {level}; pass d_cur and delta",
                )
            d_cur = min(default[0], req.d_max)
        if delta is None:
            delta = default[1] if default else 1
        try:
            state = CurriculumState(
                d_cur=d_cur, delta=delta, d_max=req.d_max,
                threshold=req.threshold, window=req.window,
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        with lock:
            if req.idempotency_key is not None:
                if req.idempotency_key in idempotency_keys:
                    raise HTTPException(status_code=409, detail="duplicate idempotency key")
                idempotency_keys.add(req.idempotency_key)
            sid = uuid.uuid4().hex[:16]
            sessions[sid] = SessionRecord(
                session_id=sid,
                strategy=req.strategy,
                level=level,
                state=state,
                candidates=req.candidates,
                max_distractors=req.max_distractors,
            )
            maybe_snapshot()
            return {"session_id": sid, "state": sessions[sid].state_dict()}

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        rec = sessions.get(session_id)
        if rec is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return {"session_id": session_id, "state": rec.state_dict()}

    @app.post("/v1/generate")
    def generate(req: GenerateRequest):
        session: SessionRecord | None = None
        if req.session_id is not None:
            session = sessions.get(req.session_id)
            if session is None:
                raise HTTPException(status_code=404, detail="unknown session")
            level = session.level
            candidates = session.candidates
            max_distractors = session.max_distractors
        else:
            level, _ = _resolve_flags(req.level, req.flags)
            if req.depth is None:
                raise HTTPException(status_code=400, detail="depth required without a session")
            candidates = req.candidates
            max_distractors = req.max_distractors

        if req.include_answers and not trusted:
            raise HTTPException(
                status_code=400,
                detail="answers are only released by a trusted-mode server",
            )

        seed = req.seed if req.seed is not None else random.SystemRandom().getrandbits(48)
        deterministic = req.seed is not None
        batch_id = uuid.uuid4().hex[:12]

        depth_rng = random.Random(seed ^ 0x5EED)
        with lock:
            if session is not None:
                for _ in range(req.seed_offset):  # align the stream with the window
                    sample_depth(session.strategy, session.state, depth_rng)
                depths = [
                    sample_depth(session.strategy, session.state, depth_rng)
                    for _ in range(req.count)
                ]
            else:
                depths = [req.depth] * req.count

        out = []
        records: dict[str, InstanceRecord] = {}
        for i, depth in enumerate(depths):
            index = req.seed_offset + i
            cfg = CorpusConfig(
                level=level,
                depth=depth,
                candidates=candidates,
                max_distractors=max_distractors,
                exact_depth=True,
            )
            inst = build_instance(cfg, index, master_seed=seed)
            if deterministic:
                key = f"{level}:{depth}:{candidates}:{seed}:{index}"
                iid = hashlib.sha256(key.encode()).hexdigest()[:16]
            else:
                iid = uuid.uuid4().hex[:16]
            records[iid] = InstanceRecord(
                prompt=inst.nl.prompt,
                answer=inst.nl.answer,
                depth=depth,
                session_id=session.session_id if session else None,
                batch_id=batch_id if session else None,
            )
            entry = {"instance_id": iid, "prompt": inst.nl.prompt, "depth": depth}
            if req.include_answers:
                entry["answer"] = inst.nl.answer
            out.append(entry)

        with lock:
            instances.update(records)
            if session is not None:
                session.instances_served += req.count
                session.batches[batch_id] = BatchRecord(instance_ids=list(records))
            maybe_snapshot()
        return {"instances": out, "batch_id": batch_id if session else None}

    @app.post("/v1/score")
    def score_completion(req: ScoreRequest):
        with lock:
            rec = instances.get(req.instance_id)
            if rec is None:
                raise HTTPException(status_code=404, detail="unknown instance")
            if rec.outcome is None:
                rec.outcome = score(req.completion, rec.answer)
                if rec.session_id is not None:
                    session = sessions[rec.session_id]
                    session.rewards_reported += 1
                    batch = session.batches.get(rec.batch_id)
                    if batch is not None and req.instance_id not in batch.rewards:
                        batch.rewards[req.instance_id] = rec.outcome.reward
                        if not batch.reported and len(batch.rewards) == len(batch.instance_ids):
                            acc = sum(batch.rewards.values()) / len(batch.instance_ids)
                            report_accuracy(session.state, acc)
                            batch.reported = True
            maybe_snapshot()
            return rec.outcome.to_dict()

    return app
