#!/usr/bin/env python3
"""Build the shared reward test-vector file.

Every vector's expected reward is assigned by construction (the perturbation
applied determines whether the normalized match must succeed), never by
running a scorer, so the file stays a neutral referee between the server-side
verifier and any client-side reimplementation.

Usage: python tools/make_reward_vectors.py > tests/vectors/reward_vectors.jsonl
"""

import json
import random
import string
import sys

NAMES = (
    "Alice", "Bob", "Carol", "David", "Emma", "Frank", "Grace", "Henry",
    "Irene", "Jack", "Kate", "Leo", "Mona", "Nick", "Olivia", "Paul",
    "Quincy", "Rachel", "Sam", "Tina", "Ulysses", "Victoria", "Wendy",
    "Xavier", "Yvonne", "Zach",
)


def fresh_word(rng):
    return "".join(rng.choice(string.ascii_lowercase) for _ in range(5))


def gold_statement(rng):
    name = rng.choice(NAMES)
    word = fresh_word(rng)
    negated = rng.random() < 0.4
    return f"{name} is not {word}" if negated else f"{name} is {word}"


def preserve_perturb(rng, gold):
    """A completion whose extracted span must normalize back to the gold."""
    text = gold
    kind = rng.randrange(5)
    if kind == 0:
        text = text.lower()
    elif kind == 1:
        text = text.upper()
    elif kind == 2:
        text = text + "."
    elif kind == 3:
        text = text.replace(" ", "  ")
    # kind 4: verbatim
    wrap = rng.randrange(4)
    if wrap == 0:
        return f"<answer> {text} </answer>"
    if wrap == 1:
        return f"Let me work through the rules first.\n<answer>{text}</answer>"
    if wrap == 2:
        return f"<answer> wrong guess </answer> on reflection: <answer> {text} </answer>"
    return f"<answer>\n {text} \n</answer>\ntrailing commentary"


def break_statement(rng, gold):
    """A statement guaranteed not to normalize to the gold."""
    kind = rng.randrange(4)
    if kind == 0:  # different predicate word
        return gold[:-5] + fresh_word(rng)
    if kind == 1:  # flipped polarity
        if " is not " in gold:
            return gold.replace(" is not ", " is ", 1)
        return gold.replace(" is ", " is not ", 1)
    if kind == 2:  # letter label instead of text
        return f"({rng.choice('ABCD')})"
    return f"The answer is {gold}"  # extra words


def mismatch_perturb(rng, gold):
    wrong = break_statement(rng, gold)
    wrap = rng.randrange(3)
    if wrap == 0:
        return f"<answer> {wrong} </answer>"
    if wrap == 1:
        return f"<answer> {gold} </answer> wait, no: <answer> {wrong} </answer>"
    return f"<answer> {wrong}. </answer>"


def no_tag_perturb(rng, gold):
    kind = rng.randrange(4)
    if kind == 0:
        return gold
    if kind == 1:
        return f"<answer> {gold}"
    if kind == 2:
        return f"{gold} </answer>"
    return f"<ANSWER> {gold} </ANSWER>"


def main():
    rng = random.Random(0xEC7095)
    vectors = []
    for i in range(1200):
        gold = gold_statement(rng)
        bucket = i % 3
        if bucket == 0:
            completion, reward, failure = preserve_perturb(rng, gold), 1, "none"
        elif bucket == 1:
            completion, reward, failure = mismatch_perturb(rng, gold), 0, "mismatch"
        else:
            completion, reward, failure = no_tag_perturb(rng, gold), 0, "no_tag"
        vectors.append(
            {"id": f"v{i:04d}", "completion": completion, "gold": gold,
             "reward": reward, "failure": failure}
        )
    for vec in vectors:
        sys.stdout.write(json.dumps(vec, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
