"""Binary verifiable reward: extract the tagged answer span, exact-match the gold.

Reward is 1 iff the last well-formed <answer>...</answer> span matches the
gold statement after normalization (lowercase, collapsed whitespace, terminal
period stripped); 0 otherwise.  No partial credit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

_ANSWER_RE = re.compile(r"<answer>(.*?)</answer>", re.DOTALL)


class FailureKind(str, Enum):
    NONE = "none"
    NO_TAG = "no_tag"
    MISMATCH = "mismatch"


@dataclass(frozen=True)
class RewardOutcome:
    reward: int
    extracted: str | None
    failure_kind: FailureKind

    def to_dict(self) -> dict:
        return {
            "reward": self.reward,
            "extracted": self.extracted,
            "failure_kind": self.failure_kind.value,
        }


def extract_answer(completion: str) -> str | None:
    """Content of the last well-formed answer span, or None if there is none."""
    spans = _ANSWER_RE.findall(completion)
    if not spans:
        return None
    return spans[-1].strip()


def normalize(text: str) -> str:
    """Lowercase, collapse internal whitespace, strip one terminal period."""
    collapsed = " ".join(text.lower().split())
    if collapsed.endswith("."):
        collapsed = collapsed[:-1].rstrip()
    return collapsed


def score(completion: str, gold: str, strict: bool = False) -> RewardOutcome:
    """Binary reward for a completion against the gold statement."""
    if not gold:
        raise ValueError("gold answer must be non-empty")
    extracted = extract_answer(completion)
    if extracted is None:
        return RewardOutcome(0, None, FailureKind.NO_TAG)
    if strict:
        matched = extracted == gold
    else:
        matched = normalize(extracted) == normalize(gold)
    if matched:
        return RewardOutcome(1, extracted, FailureKind.NONE)
    return RewardOutcome(0, extracted, FailureKind.MISMATCH)
