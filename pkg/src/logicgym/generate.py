"""Backward construction of a single candidate proof tree.

A proof tree is grown from its goal downward: a work queue of open leaves is
processed deepest-first, each popped leaf either becomes a literal axiom (at
the target depth) or gets a supporting rule whose fresh premises become new
leaves.  Expressiveness flags gate conjunctive premises, disjunctive
conclusions, consistent polarity randomization, and universally quantified
rules with template reuse across entities.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum

from .core import PLACEHOLDER, Axiom, ExpressivenessFlags, Literal, Rule


class Scope(Enum):
    GROUNDED = "grounded"
    UNIVERSAL = "universal"


@dataclass(frozen=True)
class GenConfig:
    """Knobs for one proof tree build."""

    depth: int
    flags: ExpressivenessFlags
    p_neg: float = 0.5
    p_arity2: float = 0.5
    p_resolve_by_contradiction: float = 0.5
    p_universal: float = 0.5
    num_entities: int = 1
    lifo_ties: bool = True  # among equal-depth leaves, pop the newest first

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be positive")
        for name in ("p_neg", "p_arity2", "p_resolve_by_contradiction", "p_universal"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.num_entities not in (1, 2):
            raise ValueError("num_entities must be 1 or 2")


@dataclass(frozen=True)
class ProofTree:
    """One candidate's axioms, goal, and construction metadata."""

    goal: Literal
    axioms: tuple[Axiom, ...]
    node_depth: dict[tuple[int, int], int]
    templates_used: tuple[tuple[Rule, tuple[int, ...]], ...]
    resolution_axioms: frozenset[Axiom]
    depth: int
    flags: ExpressivenessFlags
    entities: tuple[int, ...]


class PredicateAllocator:
    """Monotone fresh-predicate counter, shared by all trees of one instance."""

    def __init__(self, start: int = 0):
        self.next_id = start

    def take(self) -> int:
        pid = self.next_id
        self.next_id += 1
        return pid


class _Node:
    """Mutable atom cell; one per literal position introduced by the tree.

    locked nodes belong to a universal template's premise slots and must not
    be rebound by later template reuse.
    """

    __slots__ = ("pred", "entity", "depth", "locked")

    def __init__(self, pred: int, entity: int, depth: int, locked: bool = False):
        self.pred = pred
        self.entity = entity
        self.depth = depth
        self.locked = locked


@dataclass
class Template:
    """A universal rule awaiting reuse, with the entities it has served."""

    premises: list[list]  # [pred, positive] cells
    conclusions: list[list]
    used_entities: set[int] = field(default_factory=set)


def choose_entity_scope(
    flags: ExpressivenessFlags, rng: random.Random, p_universal: float = 0.5
) -> Scope:
    """Pick grounded vs. universal scope for the next rule."""
    if not flags.quantification:
        return Scope.GROUNDED
    return Scope.UNIVERSAL if rng.random() < p_universal else Scope.GROUNDED


def maybe_reuse_template(
    templates: list[Template], entities: tuple[int, ...], rng: random.Random
) -> tuple[Template, int] | None:
    """With probability |T|/(|T|+1), pick a template and an entity it has not served."""
    k = len(templates)
    if k == 0:
        return None
    if rng.random() >= k / (k + 1):
        return None
    tpl = templates[rng.randrange(k)]
    unused = [e for e in entities if e not in tpl.used_entities]
    return tpl, unused[rng.randrange(len(unused))]


def resolve_alternative_disjunct(
    alt: Literal,
    parent_of_u: Literal | None,
    cfg: GenConfig,
    rng: random.Random,
) -> Axiom:
    """Neutralize an alternative disjunct so the chosen one still carries the proof.

    Either the disjunct is contradicted outright by a new literal axiom, or it
    is routed to the same conclusion the supported literal feeds (so both
    branches of the disjunction converge).  At the root there is no shared
    conclusion, so contradiction is forced.
    """
    if parent_of_u is None or rng.random() < cfg.p_resolve_by_contradiction:
        return Literal(alt.predicate, alt.entity, not alt.positive)
    return Rule(premises=(alt,), conclusions=(parent_of_u,), universal=False)


# Internal axiom records built during construction; literal cells are mutable
# [node_or_pred, positive] pairs so the final polarity pass can flip in place.


class _LitAx:
    __slots__ = ("cell", "resolution")

    def __init__(self, node: _Node, positive: bool, resolution: bool = False):
        self.cell = [node, positive]
        self.resolution = resolution


class _RuleAx:
    __slots__ = ("prem", "concl", "template", "resolution")

    def __init__(self, prem, concl, template: Template | None = None, resolution=False):
        self.prem = prem    # [node, positive] cells, or [pred, positive] if template
        self.concl = concl
        self.template = template
        self.resolution = resolution


def _pop_entry(queue: list, lifo: bool):
    best = -1
    best_depth = -1
    indices = range(len(queue) - 1, -1, -1) if lifo else range(len(queue))
    for i in indices:
        d = queue[i][0]
        if d > best_depth:
            best_depth = d
            best = i
    return queue.pop(best)


def generate_proof_tree(
    cfg: GenConfig, rng: random.Random, alloc: PredicateAllocator | None = None
) -> ProofTree:
    """Build one proof tree whose goal is entailed by its axioms."""
    alloc = alloc or PredicateAllocator()
    entities = tuple(range(cfg.num_entities))
    flags = cfg.flags

    root = _Node(alloc.take(), rng.randrange(cfg.num_entities), depth=0)
    nodes: list[_Node] = [root]
    queue: list[tuple[int, _Node, _Node | None]] = [(0, root, None)]
    axioms: list[_LitAx | _RuleAx] = []
    templates: list[Template] = []
    templates_used: list[tuple[Template, int]] = []

    def fresh_node(entity: int, depth: int, locked: bool = False) -> _Node:
        n = _Node(alloc.take(), entity, depth, locked)
        nodes.append(n)
        return n

    def resolve_alt(alt_node: _Node, parent: _Node | None):
        # Mirrors resolve_alternative_disjunct over mutable cells.
        if parent is None or rng.random() < cfg.p_resolve_by_contradiction:
            axioms.append(_LitAx(alt_node, positive=False, resolution=True))
        else:
            axioms.append(
                _RuleAx(prem=[[alt_node, True]], concl=[[parent, True]], resolution=True)
            )

    while queue:
        d, node, parent = _pop_entry(queue, cfg.lifo_ties)

        if d >= cfg.depth:
            axioms.append(_LitAx(node, positive=True))
            continue

        scope = Scope.GROUNDED
        if not node.locked:
            scope = choose_entity_scope(flags, rng, cfg.p_universal)

        if scope is Scope.UNIVERSAL and templates:
            picked = maybe_reuse_template(templates, entities, rng)
            if picked is not None:
                tpl, entity = picked
                concl_idx = rng.randrange(len(tpl.conclusions))
                # Rebind the leaf to the template's conclusion at the new entity.
                node.pred = tpl.conclusions[concl_idx][0]
                node.entity = entity
                tpl.used_entities.add(entity)
                templates_used.append((tpl, entity))
                if len(tpl.used_entities) == len(entities):
                    templates.remove(tpl)
                for pred, _pos in tpl.premises:
                    pnode = _Node(pred, entity, d + 1, locked=True)
                    nodes.append(pnode)
                    queue.append((d + 1, pnode, node))
                for j, (pred, _pos) in enumerate(tpl.conclusions):
                    if j == concl_idx:
                        continue
                    alt = _Node(pred, entity, d, locked=True)
                    nodes.append(alt)
                    resolve_alt(alt, parent)
                continue

        n_p = 2 if flags.conjunction and rng.random() < cfg.p_arity2 else 1
        n_c = 2 if flags.disjunction and rng.random() < cfg.p_arity2 else 1

        universal = scope is Scope.UNIVERSAL
        prem_nodes = [fresh_node(node.entity, d + 1, locked=universal) for _ in range(n_p)]
        alt_nodes = [fresh_node(node.entity, d, locked=universal) for _ in range(n_c - 1)]

        if universal:
            tpl = Template(
                premises=[[n.pred, True] for n in prem_nodes],
                conclusions=[[node.pred, True]] + [[a.pred, True] for a in alt_nodes],
                used_entities={node.entity},
            )
            templates.append(tpl)
            templates_used.append((tpl, node.entity))
            axioms.append(_RuleAx(prem=tpl.premises, concl=tpl.conclusions, template=tpl))
        else:
            axioms.append(
                _RuleAx(
                    prem=[[n, True] for n in prem_nodes],
                    concl=[[node, True]] + [[a, True] for a in alt_nodes],
                )
            )

        for pnode in prem_nodes:
            queue.append((d + 1, pnode, node))
        for alt in alt_nodes:
            resolve_alt(alt, parent)

    # Consistent polarity randomization: flip all occurrences of a predicate
    # together, so rules, axioms, templates, and the goal stay in agreement.
    flipped: set[int] = set()
    if flags.negation:
        preds_in_tree = sorted({n.pred for n in nodes})
        for pred in preds_in_tree:
            if rng.random() < cfg.p_neg:
                flipped.add(pred)
        for ax in axioms:
            cells = [ax.cell] if isinstance(ax, _LitAx) else ax.prem + ax.concl
            for cell in cells:
                pred = cell[0] if isinstance(cell[0], int) else cell[0].pred
                if pred in flipped:
                    cell[1] = not cell[1]

    def freeze_cell(cell) -> Literal:
        head, positive = cell
        if isinstance(head, int):
            return Literal(head, PLACEHOLDER, positive)
        return Literal(head.pred, head.entity, positive)

    frozen: list[Axiom] = []
    resolution: list[Axiom] = []
    tpl_rules: dict[int, Rule] = {}
    for ax in axioms:
        if isinstance(ax, _LitAx):
            fr: Axiom = freeze_cell(ax.cell)
        else:
            fr = Rule(
                premises=tuple(freeze_cell(c) for c in ax.prem),
                conclusions=tuple(freeze_cell(c) for c in ax.concl),
                universal=ax.template is not None,
            )
            if ax.template is not None:
                tpl_rules[id(ax.template)] = fr
        frozen.append(fr)
        if getattr(ax, "resolution", False):
            resolution.append(fr)

    used: dict[int, list[int]] = {}
    for tpl, entity in templates_used:
        used.setdefault(id(tpl), []).append(entity)
    frozen_templates = tuple(
        (tpl_rules[key], tuple(ents)) for key, ents in used.items()
    )

    node_depth: dict[tuple[int, int], int] = {}
    for n in nodes:
        key = (n.pred, n.entity)
        assert key not in node_depth, "duplicate atom introduced during construction"
        node_depth[key] = n.depth

    goal = Literal(root.pred, root.entity, root.pred not in flipped)
    return ProofTree(
        goal=goal,
        axioms=tuple(frozen),
        node_depth=node_depth,
        templates_used=frozen_templates,
        resolution_axioms=frozenset(resolution),
        depth=cfg.depth,
        flags=flags,
        entities=entities,
    )
