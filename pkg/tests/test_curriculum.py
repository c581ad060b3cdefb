import random
from collections import Counter

import pytest

from logicgym.curriculum import (
    CurriculumState,
    Strategy,
    default_state,
    initial_depth_from_probe,
    report_accuracy,
    sample_depth,
)


def test_difficult_only_always_max():
    state = CurriculumState(d_cur=4, delta=2, d_max=20)
    rng = random.Random(0)
    assert all(sample_depth(Strategy.DIFFICULT_ONLY, state, rng) == 20 for _ in range(100))


def test_uniform_monte_carlo():
    state = CurriculumState(d_cur=1, delta=1, d_max=4)
    rng = random.Random(1)
    n = 40_000
    counts = Counter(sample_depth(Strategy.UNIFORM, state, rng) for _ in range(n))
    assert set(counts) == {1, 2, 3, 4}
    for d in range(1, 5):
        assert abs(counts[d] / n - 0.25) < 0.01


def test_curriculum_never_exceeds_ceiling():
    state = CurriculumState(d_cur=8, delta=4, d_max=24)
    rng = random.Random(2)
    draws = [sample_depth(Strategy.CURRICULUM, state, rng) for _ in range(2000)]
    assert max(draws) <= 8
    assert min(draws) >= 1


def test_conjunction_defaults_advance():
    state = default_state("conjunction", d_max=24)
    assert (state.d_cur, state.delta) == (8, 4)
    report_accuracy(state, 0.75)
    assert state.d_cur == 12
    assert state.history == []  # window resets on advance


def test_quantification_defaults_advance():
    state = default_state("quantification", d_max=14)
    assert (state.d_cur, state.delta) == (4, 2)
    report_accuracy(state, 0.9)
    assert state.d_cur == 6


def test_no_default_for_other_levels():
    with pytest.raises(ValueError):
        default_state("implication", d_max=16)


def test_initial_depth_from_probe():
    probe = {2: 0.98, 4: 0.92, 6: 0.71, 8: 0.55, 12: 0.3}
    assert initial_depth_from_probe(probe) == 8
    assert initial_depth_from_probe(probe, threshold=0.72) == 6
    assert initial_depth_from_probe({2: 0.99, 4: 0.95}) == 4  # saturated everywhere
    with pytest.raises(ValueError):
        initial_depth_from_probe({})


def test_clamped_at_max():
    state = CurriculumState(d_cur=20, delta=4, d_max=20)
    report_accuracy(state, 1.0)
    assert state.d_cur == 20


def test_advancement_requires_windowed_mean():
    state = CurriculumState(d_cur=8, delta=4, d_max=24, window=4)
    for acc in (0.5, 0.6):
        report_accuracy(state, acc)
    assert state.d_cur == 8  # mean 0.55 below threshold
    report_accuracy(state, 0.9)
    assert state.d_cur == 8  # mean ~0.667 still below
    report_accuracy(state, 0.9)
    # window [0.5, 0.6, 0.9, 0.9] mean 0.725 >= 0.70
    assert state.d_cur == 12


def test_boundary_thresholds():
    state = CurriculumState(d_cur=8, delta=4, d_max=24, window=10)
    report_accuracy(state, 0.699999)
    assert state.d_cur == 8
    state2 = CurriculumState(d_cur=8, delta=4, d_max=24, window=10)
    report_accuracy(state2, 0.70)
    assert state2.d_cur == 12


def test_hand_computed_trajectory_conjunction():
    # window 3 for a compact hand-checkable script
    state = CurriculumState(d_cur=8, delta=4, d_max=20, window=3)
    script = [0.2, 0.5, 0.9, 0.9, 0.9, 0.4, 0.8, 0.95, 0.9, 0.9, 0.9]
    expected = []
    # hand-computed: means over trailing window of 3 with reset on advance
    # [0.2] .2 | [0.2,.5] .35 | [.2,.5,.9] .533 | [.5,.9,.9] .766 -> 12 reset
    # [.9] .9 -> 16 reset | [.4] .4 | [.4,.8] .6 | [.4,.8,.95] .716 -> 20 reset
    # [.9] .9 -> clamp stays 20 (d_cur == d_max, no advance)
    # [.9,.9] | [.9,.9,.9]
    expected = [8, 8, 8, 12, 16, 16, 16, 20, 20, 20, 20]
    got = []
    for acc in script:
        report_accuracy(state, acc)
        got.append(state.d_cur)
    assert got == expected


def test_hand_computed_trajectory_quantification():
    state = CurriculumState(d_cur=4, delta=2, d_max=8, window=2)
    script = [0.6, 0.85, 0.7, 0.9, 0.99, 0.99]
    # [.6] .6 | [.6,.85] .725 -> 6 reset | [.7] .7 -> 8 reset (clamped at max)
    # thereafter no change
    expected = [4, 6, 8, 8, 8, 8]
    got = []
    for acc in script:
        report_accuracy(state, acc)
        got.append(state.d_cur)
    assert got == expected


def test_monotone_nondecreasing():
    rng = random.Random(5)
    state = CurriculumState(d_cur=4, delta=2, d_max=30, window=5)
    prev = state.d_cur
    for _ in range(500):
        report_accuracy(state, rng.random())
        assert state.d_cur >= prev
        prev = state.d_cur


def test_degenerates_to_uniform_at_ceiling():
    state = CurriculumState(d_cur=12, delta=4, d_max=12, threshold=1.0)
    rng1, rng2 = random.Random(7), random.Random(7)
    a = [sample_depth(Strategy.CURRICULUM, state, rng1) for _ in range(500)]
    b = [sample_depth(Strategy.UNIFORM, state, rng2) for _ in range(500)]
    assert a == b


def test_checkpoint_round_trip():
    state = CurriculumState(d_cur=8, delta=4, d_max=24, window=6)
    report_accuracy(state, 0.4)
    report_accuracy(state, 0.6)
    restored = CurriculumState.from_json(state.to_json())
    assert restored == state
    report_accuracy(state, 0.95)
    report_accuracy(restored, 0.95)
    assert restored == state


def test_accuracy_validation():
    state = CurriculumState(d_cur=2, delta=1, d_max=4)
    with pytest.raises(ValueError):
        report_accuracy(state, 1.5)
    with pytest.raises(ValueError):
        CurriculumState(d_cur=5, delta=1, d_max=4)
