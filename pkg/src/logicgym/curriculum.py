"""Training-distribution strategies: uniform, threshold-triggered curriculum, difficult-only.

The curriculum keeps a rolling window of batch accuracies; whenever the
windowed mean reaches the trigger threshold (default 70%), the depth ceiling
grows by a fixed step and the window resets, until the maximum depth.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import Enum

from .core import Level

# Default (initial depth ceiling, step size) per expressiveness level; only
# the levels actually run with a curriculum have published defaults.  Other
# levels need a caller-supplied initial ceiling from a saturation probe.
DEFAULT_CURRICULUM = {
    Level.CONJUNCTION: (8, 4),
    Level.QUANTIFICATION: (4, 2),
}

DEFAULT_THRESHOLD = 0.70
DEFAULT_WINDOW = 10


class Strategy(str, Enum):
    UNIFORM = "uniform"
    CURRICULUM = "curriculum"
    DIFFICULT_ONLY = "difficult_only"


@dataclass
class CurriculumState:
    d_cur: int
    delta: int
    d_max: int
    threshold: float = DEFAULT_THRESHOLD
    window: int = DEFAULT_WINDOW
    history: list[float] = field(default_factory=list)

    def __post_init__(self):
        if not 1 <= self.d_cur <= self.d_max:
            raise ValueError("need 1 <= d_cur <= d_max")
        if self.delta < 1:
            raise ValueError("delta must be positive")
        if self.window < 1:
            raise ValueError("window must be positive")

    def to_json(self) -> str:
        return json.dumps(
            {
                "d_cur": self.d_cur,
                "delta": self.delta,
                "d_max": self.d_max,
                "threshold": self.threshold,
                "window": self.window,
                "history": self.history,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "CurriculumState":
        d = json.loads(text)
        return cls(
            d_cur=d["d_cur"],
            delta=d["delta"],
            d_max=d["d_max"],
            threshold=d["threshold"],
            window=d["window"],
            history=list(d["history"]),
        )


def default_state(
    level: Level | str,
    d_max: int,
    threshold: float = DEFAULT_THRESHOLD,
    window: int = DEFAULT_WINDOW,
) -> CurriculumState:
    level = Level(level)
    if level not in DEFAULT_CURRICULUM:
        raise ValueError(
            f"no default curriculum for level {level.value}; "
            "supply d_cur and delta explicitly"
        )
    d_cur, delta = DEFAULT_CURRICULUM[level]
    return CurriculumState(
        d_cur=min(d_cur, d_max), delta=delta, d_max=d_max,
        threshold=threshold, window=window,
    )


def initial_depth_from_probe(
    probe_accuracies: dict[int, float], threshold: float = DEFAULT_THRESHOLD
) -> int:
    """Smallest probed depth the base model has not yet saturated.

    Shallower depths already at or above the trigger threshold would advance
    the curriculum immediately, so the ceiling starts at the first depth whose
    probe accuracy falls below it.
    """
    if not probe_accuracies:
        raise ValueError("need at least one probed depth")
    for depth in sorted(probe_accuracies):
        if probe_accuracies[depth] < threshold:
            return depth
    return max(probe_accuracies)


def sample_depth(strategy: Strategy, state: CurriculumState, rng: random.Random) -> int:
    if strategy is Strategy.UNIFORM:
        return rng.randint(1, state.d_max)
    if strategy is Strategy.CURRICULUM:
        return rng.randint(1, state.d_cur)
    return state.d_max


def report_accuracy(state: CurriculumState, batch_accuracy: float) -> CurriculumState:
    """Push a batch accuracy; advance the ceiling when the rolling mean triggers."""
    if not 0.0 <= batch_accuracy <= 1.0:
        raise ValueError("batch accuracy must be in [0, 1]")
    state.history.append(batch_accuracy)
    if len(state.history) > state.window:
        del state.history[: len(state.history) - state.window]
    mean = sum(state.history) / len(state.history)
    if mean >= state.threshold and state.d_cur < state.d_max:
        state.d_cur = min(state.d_cur + state.delta, state.d_max)
        state.history.clear()
    return state
