"""Offline mode: corpus loading and a local exact-match scorer.

The scorer mirrors the environment's reward semantics so offline runs score
identically to the service: reward 1 iff the content of the last well-formed
<answer>...</answer> span equals the gold statement after lowercasing,
whitespace collapsing, and stripping one terminal period.  Agreement is
pinned by a shared test-vector file rather than shared code.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

_ANSWER_SPAN = re.compile(r"<answer>(.*?)</answer>", re.DOTALL)


@dataclass(frozen=True)
class ScoredResult:
    reward: int
    extracted: str | None
    failure_kind: str


class OfflineScorer:
    def __init__(self, strict: bool = False):
        self.strict = strict

    @staticmethod
    def extract(completion: str) -> str | None:
        spans = _ANSWER_SPAN.findall(completion)
        return spans[-1].strip() if spans else None

    @staticmethod
    def normalize(text: str) -> str:
        collapsed = " ".join(text.lower().split())
        if collapsed.endswith("."):
            collapsed = collapsed[:-1].rstrip()
        return collapsed

    def score(self, completion: str, gold: str) -> ScoredResult:
        if not gold:
            raise ValueError("gold answer must be non-empty")
        extracted = self.extract(completion)
        if extracted is None:
            return ScoredResult(0, None, "no_tag")
        if self.strict:
            matched = extracted == gold
        else:
            matched = self.normalize(extracted) == self.normalize(gold)
        return ScoredResult(1 if matched else 0, extracted, "none" if matched else "mismatch")


@dataclass(frozen=True)
class CorpusRecord:
    record_id: str
    prompt: str
    depth: int
    options: tuple[str, ...]
    answer: str | None


def load_corpus(path: str | Path) -> list[CorpusRecord]:
    records = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            records.append(
                CorpusRecord(
                    record_id=rec["id"],
                    prompt=rec["prompt"],
                    depth=rec["depth"],
                    options=tuple(rec.get("options", ())),
                    answer=rec.get("answer"),
                )
            )
    return records


class OfflineEnv:
    """Serve a local corpus and score completions without a server."""

    def __init__(self, corpus_path: str | Path, strict: bool = False):
        self.records = load_corpus(corpus_path)
        self._by_id = {r.record_id: r for r in self.records}
        self.scorer = OfflineScorer(strict=strict)

    def __len__(self):
        return len(self.records)

    def prompts(self) -> list[tuple[str, str]]:
        return [(r.record_id, r.prompt) for r in self.records]

    def score(self, record_id: str, completion: str) -> ScoredResult:
        rec = self._by_id.get(record_id)
        if rec is None:
            raise KeyError(f"unknown record id {record_id!r}")
        if rec.answer is None:
            raise ValueError("corpus was exported blind; no gold answers to score against")
        return self.scorer.score(completion, rec.answer)
