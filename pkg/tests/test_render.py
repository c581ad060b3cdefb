import random

import pytest

from logicgym.core import PLACEHOLDER, Literal, Rule
from logicgym.render import (
    NAME_POOL,
    RenderMaps,
    instance_predicates,
    invert_answer,
    make_render_maps,
    render_instance,
    render_literal,
    render_rule,
)

from conftest import make_instance


MAPS = RenderMaps(
    entity_names={0: "Alice", 1: "Bob"},
    predicate_words={0: "abcde", 1: "bcdef", 2: "cdefg", 3: "defgh"},
)


def test_render_positive_literal():
    assert render_literal(Literal(0, 0), MAPS) == "Alice is abcde"


def test_render_negative_literal():
    assert render_literal(Literal(0, 0, False), MAPS) == "Alice is not abcde"


def test_render_simple_rule():
    rule = Rule((Literal(0, 0),), (Literal(1, 0),))
    assert render_rule(rule, MAPS) == "If Alice is abcde, then Alice is bcdef."


def test_render_universal_rule():
    rule = Rule(
        (Literal(0, PLACEHOLDER),), (Literal(1, PLACEHOLDER),), universal=True
    )
    assert render_rule(rule, MAPS) == "If anyone is abcde, then they are bcdef."


def test_render_universal_rule_with_negations():
    rule = Rule(
        (Literal(0, PLACEHOLDER, False),),
        (Literal(1, PLACEHOLDER, False),),
        universal=True,
    )
    assert render_rule(rule, MAPS) == "If anyone is not abcde, then they are not bcdef."


def test_render_two_premise_two_conclusion_rule():
    rule = Rule(
        (Literal(0, 0), Literal(1, 0)),
        (Literal(2, 0), Literal(3, 0)),
    )
    text = render_rule(rule, MAPS)
    assert text == (
        "If Alice is abcde and Alice is bcdef, then Alice is cdefg or Alice is defgh."
    )
    assert text.count(" and ") == 1
    assert text.count(" or ") == 1


def test_render_cross_entity_rule():
    rule = Rule((Literal(0, 1),), (Literal(1, 0),))
    assert render_rule(rule, MAPS) == "If Bob is abcde, then Alice is bcdef."


def test_name_pool_is_the_fixed_26():
    assert len(NAME_POOL) == 26
    assert NAME_POOL[0] == "Alice"
    assert NAME_POOL[-1] == "Zach"


def test_maps_are_bijections():
    rng = random.Random(0)
    maps = make_render_maps(set(range(40)), (0, 1), rng)
    words = list(maps.predicate_words.values())
    assert len(set(words)) == len(words)
    assert all(len(w) == 5 and w.islower() for w in words)
    names = list(maps.entity_names.values())
    assert len(set(names)) == len(names)
    assert set(names) <= set(NAME_POOL)


def test_render_instance_answer_among_options():
    for seed in range(10):
        si = make_instance("negation", depth=3, seed=seed)
        nl = render_instance(si, render_seed=seed * 17)
        assert nl.answer in nl.options
        assert nl.options[nl.answer_position] == nl.answer
        assert len(nl.options) == 4


def test_render_instance_prompt_layout():
    si = make_instance("conjunction", depth=2, seed=3)
    nl = render_instance(si, render_seed=5)
    assert nl.prompt.startswith("Suppose we have the following facts:\n\n")
    assert "\n\nHere are some candidate statements:\n\n" in nl.prompt
    assert (
        "\n\nExactly one of the above statements can be logically derived "
        "from the given facts.\n\n" in nl.prompt
    )
    assert nl.prompt.endswith(
        "Identify that statement and return it within <answer> </answer> tags. "
        "Example: <answer> Alice is abcde </answer>."
    )
    for i in range(4):
        assert f"({chr(ord('A') + i)}) " in nl.prompt


def test_same_instance_two_render_seeds():
    si = make_instance("negation", depth=2, seed=8)
    nl1 = render_instance(si, render_seed=1)
    nl2 = render_instance(si, render_seed=2)
    assert nl1.prompt != nl2.prompt
    assert nl1.answer != nl2.answer or nl1.options != nl2.options
    # both stay self-consistent
    assert nl1.answer in nl1.options
    assert nl2.answer in nl2.options


def test_round_trip_answer_to_symbolic():
    for seed in range(10):
        si = make_instance("negation", depth=2, seed=seed)
        rng = random.Random(seed)
        maps = make_render_maps(instance_predicates(si), si.entities, rng)
        gold = si.candidates[si.answer_index]
        text = render_literal(gold, maps)
        assert invert_answer(text, maps) == gold


def test_distinct_predicates_render_distinct_words():
    si = make_instance("conjunction", depth=3, seed=2)
    rng = random.Random(0)
    maps = make_render_maps(instance_predicates(si), si.entities, rng)
    words = [maps.predicate_words[p] for p in instance_predicates(si)]
    assert len(set(words)) == len(words)


def test_quantified_instance_renders_universal_templates():
    for seed in range(20):
        si = make_instance("quantification", depth=4, seed=seed)
        nl = render_instance(si, render_seed=seed)
        if any(isinstance(a, Rule) and a.universal for a in si.axioms):
            assert "If anyone is " in nl.prompt
            assert " they are " in nl.prompt
            break
    else:
        pytest.fail("no universal rule in 20 seeds")
