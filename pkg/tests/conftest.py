"""Shared test helpers, including an independent truth-table oracle.

The truth-table oracle deliberately shares no code with the DPLL solver: a
clause set over n variables is evaluated against all 2^n assignments packed
into big-integer bitmasks.
"""

from __future__ import annotations

import random
from functools import lru_cache

import pytest

from logicgym.core import ExpressivenessFlags, Level, signed
from logicgym.generate import GenConfig, PredicateAllocator, generate_proof_tree
from logicgym.assemble import AssemblyConfig, assemble


@lru_cache(maxsize=32)
def _var_masks(nvars: int) -> tuple[int, ...]:
    # Bit i of mask v is set iff assignment i sets variable v true: a periodic
    # pattern of 2^v zeros then 2^v ones, tiled across all 2^nvars positions.
    total = 1 << nvars
    masks = []
    for v in range(nvars):
        half = 1 << v
        period = half << 1
        unit = ((1 << half) - 1) << half
        tiles = ((1 << total) - 1) // ((1 << period) - 1)
        masks.append(unit * tiles)
    return tuple(masks)


def truth_table_models(clauses, nvars: int) -> int:
    """Bitmask of assignments (bit i = assignment i) satisfying all clauses."""
    assert nvars <= 22, "truth table restricted to desk scale"
    full = (1 << (1 << nvars)) - 1
    masks = _var_masks(nvars)
    fm = full
    for c in clauses:
        cm = 0
        for lit in c:
            cm |= masks[abs(lit) - 1] if lit > 0 else (full ^ masks[abs(lit) - 1])
        fm &= cm
        if fm == 0:
            break
    return fm


def truth_table_satisfiable(clauses, nvars: int) -> bool:
    return truth_table_models(clauses, nvars) != 0


def truth_table_entails(clauses, nvars: int, goal_token: int) -> bool:
    """Entailment by enumeration: no model of the clauses falsifies the goal."""
    masks = _var_masks(nvars)
    full = (1 << (1 << nvars)) - 1
    goal_mask = (
        masks[abs(goal_token) - 1]
        if goal_token > 0
        else (full ^ masks[abs(goal_token) - 1])
    )
    return truth_table_models(clauses, nvars) & (full ^ goal_mask) == 0


def goal_token(cs, goal) -> int:
    return signed(goal, cs.table)


def make_trees(level, depth, seed, candidates=4, num_entities=None, **kw):
    flags = ExpressivenessFlags.for_level(level)
    if num_entities is None:
        num_entities = 2 if flags.quantification else 1
    rng = random.Random(seed)
    cfg = GenConfig(depth=depth, flags=flags, num_entities=num_entities, **kw)
    alloc = PredicateAllocator()
    trees = [generate_proof_tree(cfg, rng, alloc) for _ in range(candidates)]
    return trees, rng


def make_instance(level, depth, seed, candidates=4, **kw):
    trees, rng = make_trees(level, depth, seed, candidates, **kw)
    return assemble(trees, AssemblyConfig(candidates=candidates), rng)


@pytest.fixture
def rng():
    return random.Random(0)


ALL_LEVELS = [l.value for l in Level]
