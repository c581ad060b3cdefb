"""Natural-language conversion of symbolic instances.

Entity ids map to names from a fixed 26-name pool and predicate ids map to
random 5-letter strings, both resampled per instance so no lexical cue
survives across instances.  Facts and candidate statements are shuffled
independently before being placed into the fixed prompt template.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass

from .assemble import SymbolicInstance
from .core import Literal, Rule

NAME_POOL = (
    "Alice", "Bob", "Carol", "David", "Emma", "Frank", "Grace", "Henry",
    "Irene", "Jack", "Kate", "Leo", "Mona", "Nick", "Olivia", "Paul",
    "Quincy", "Rachel", "Sam", "Tina", "Ulysses", "Victoria", "Wendy",
    "Xavier", "Yvonne", "Zach",
)

PROMPT_TEMPLATE = (
    "Suppose we have the following facts:\n"
    "\n"
    "{facts}\n"
    "\n"
    "Here are some candidate statements:\n"
    "\n"
    "{options}\n"
    "\n"
    "Exactly one of the above statements can be logically derived from the given facts.\n"
    "\n"
    "Identify that statement and return it within <answer> </answer> tags. "
    "Example: <answer> Alice is abcde </answer>."
)


@dataclass(frozen=True)
class RenderMaps:
    entity_names: dict[int, str]
    predicate_words: dict[int, str]


@dataclass(frozen=True)
class NLInstance:
    prompt: str
    options: tuple[str, ...]
    answer: str
    answer_position: int
    render_seed: int


def make_render_maps(
    predicates: set[int], entities: tuple[int, ...], rng: random.Random
) -> RenderMaps:
    names = rng.sample(NAME_POOL, len(entities))
    entity_names = {e: names[i] for i, e in enumerate(entities)}
    words: dict[int, str] = {}
    seen: set[str] = set()
    for pred in sorted(predicates):
        while True:
            w = "".join(rng.choice(string.ascii_lowercase) for _ in range(5))
            if w not in seen:
                seen.add(w)
                words[pred] = w
                break
    return RenderMaps(entity_names, words)


def render_literal(lit: Literal, maps: RenderMaps) -> str:
    name = maps.entity_names[lit.entity]
    word = maps.predicate_words[lit.predicate]
    return f"{name} is {word}" if lit.positive else f"{name} is not {word}"


def _universal_phrase(lit: Literal, maps: RenderMaps, first: bool, premise: bool) -> str:
    word = maps.predicate_words[lit.predicate]
    if premise:
        head = "anyone is" if first else "is"
        return f"{head} not {word}" if not lit.positive else f"{head} {word}"
    head = "they are" if first else "are"
    return f"{head} not {word}" if not lit.positive else f"{head} {word}"


def render_rule(rule: Rule, maps: RenderMaps) -> str:
    if rule.universal:
        prem = " and ".join(
            _universal_phrase(l, maps, first=(i == 0), premise=True)
            for i, l in enumerate(rule.premises)
        )
        concl = " or ".join(
            _universal_phrase(l, maps, first=(i == 0), premise=False)
            for i, l in enumerate(rule.conclusions)
        )
    else:
        prem = " and ".join(render_literal(l, maps) for l in rule.premises)
        concl = " or ".join(render_literal(l, maps) for l in rule.conclusions)
    return f"If {prem}, then {concl}."


def render_axiom(axiom, maps: RenderMaps) -> str:
    if isinstance(axiom, Literal):
        return render_literal(axiom, maps) + "."
    return render_rule(axiom, maps)


def instance_predicates(si: SymbolicInstance) -> set[int]:
    preds: set[int] = set()
    for ax in si.axioms:
        lits = (ax,) if isinstance(ax, Literal) else ax.literals()
        preds.update(l.predicate for l in lits)
    preds.update(c.predicate for c in si.candidates)
    return preds


def render_instance(si: SymbolicInstance, render_seed: int) -> NLInstance:
    """Render one instance with freshly sampled name and word bijections."""
    rng = random.Random(render_seed)
    maps = make_render_maps(instance_predicates(si), si.entities, rng)

    facts = [render_axiom(ax, maps) for ax in si.axioms]
    rng.shuffle(facts)

    order = list(range(len(si.candidates)))
    rng.shuffle(order)
    options = tuple(render_literal(si.candidates[i], maps) for i in order)
    answer_position = order.index(si.answer_index)
    answer = options[answer_position]

    option_lines = [
        f"({chr(ord('A') + i)}) {text}." for i, text in enumerate(options)
    ]
    prompt = PROMPT_TEMPLATE.format(
        facts="\n".join(facts), options="\n".join(option_lines)
    )
    return NLInstance(
        prompt=prompt,
        options=options,
        answer=answer,
        answer_position=answer_position,
        render_seed=render_seed,
    )


def invert_answer(answer: str, maps: RenderMaps) -> Literal:
    """Recover the symbolic literal for a rendered statement."""
    names = {v: k for k, v in maps.entity_names.items()}
    words = {v: k for k, v in maps.predicate_words.items()}
    parts = answer.split()
    if len(parts) == 4 and parts[1] == "is" and parts[2] == "not":
        return Literal(words[parts[3]], names[parts[0]], False)
    if len(parts) == 3 and parts[1] == "is":
        return Literal(words[parts[2]], names[parts[0]], True)
    raise ValueError(f"unrecognized statement: {answer!r}")
