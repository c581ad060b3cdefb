import json
from pathlib import Path

import pytest

from logicgym.render import render_instance
from logicgym.reward import FailureKind, extract_answer, normalize, score

from conftest import make_instance

VECTORS = Path(__file__).parent / "vectors" / "reward_suite.json"


def test_extract_simple_span():
    assert extract_answer("... <answer> Alice is abcde </answer>") == "Alice is abcde"


def test_extract_absent():
    assert extract_answer("no tags here") is None


def test_extract_last_of_two_spans():
    text = "<answer> first </answer> then <answer> second </answer>"
    assert extract_answer(text) == "second"


def test_score_exact_match():
    out = score("<answer> Alice is abcde </answer>", "Alice is abcde")
    assert out.reward == 1
    assert out.failure_kind is FailureKind.NONE


def test_score_case_and_period_insensitive():
    out = score("<answer> alice is abcde. </answer>", "Alice is abcde")
    assert out.reward == 1


def test_score_mismatch():
    out = score("<answer> Alice is bcdef </answer>", "Alice is abcde")
    assert out.reward == 0
    assert out.failure_kind is FailureKind.MISMATCH


def test_score_no_tag():
    out = score("Alice is abcde", "Alice is abcde")
    assert out.reward == 0
    assert out.failure_kind is FailureKind.NO_TAG
    assert out.extracted is None


def test_reward_is_binary_and_consistent():
    out = score("<answer> x </answer>", "y")
    assert out.reward in (0, 1)
    assert (out.reward == 1) == (out.failure_kind is FailureKind.NONE)


def test_score_requires_gold():
    with pytest.raises(ValueError):
        score("<answer> x </answer>", "")


def test_strict_mode_is_byte_exact():
    assert score("<answer> Alice is abcde </answer>", "Alice is abcde", strict=True).reward == 1
    assert score("<answer> alice is abcde </answer>", "Alice is abcde", strict=True).reward == 0
    assert score("<answer>Alice is abcde</answer>", "Alice is abcde", strict=True).reward == 1


def test_normalize_rules():
    assert normalize("  Alice   IS  abcde . ") == "alice is abcde"
    assert normalize("Alice is abcde..") == "alice is abcde."
    assert normalize("") == ""


def test_score_deterministic():
    for _ in range(3):
        a = score("<answer> Alice is abcde </answer>", "Alice is abcde")
        b = score("<answer> Alice is abcde </answer>", "Alice is abcde")
        assert a == b


def test_committed_vector_suite():
    vectors = json.loads(VECTORS.read_text())
    assert len(vectors) == 50
    for vec in vectors:
        out = score(vec["completion"], vec["gold"])
        assert out.reward == vec["reward"], vec["id"]
        assert out.failure_kind.value == vec["failure"], vec["id"]


def test_renderer_verifier_self_consistency_sample():
    for seed in range(25):
        si = make_instance("negation", depth=2, seed=seed)
        nl = render_instance(si, render_seed=seed)
        completion = f"reasoning text... <answer> {nl.answer} </answer>"
        assert score(completion, nl.answer).reward == 1


def test_shared_cross_implementation_vectors():
    path = VECTORS.parent / "reward_vectors.jsonl"
    count = 0
    with open(path) as fh:
        for line in fh:
            vec = json.loads(line)
            out = score(vec["completion"], vec["gold"])
            assert out.reward == vec["reward"], vec["id"]
            assert out.failure_kind.value == vec["failure"], vec["id"]
            count += 1
    assert count >= 1000
