"""Multiple-choice instance assembly: merge B proof trees, corrupt B-1 of them.

The first tree stays intact, so its goal is the unique entailed candidate.
Every other tree has one uniformly chosen axiom corrupted (removed, or one
literal polarity-flipped when negation is available), which severs the only
derivation of its goal.  Distractor rules with at least one all-fresh side
are then mixed in, capped so the total rule count stays below B*D.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .core import Axiom, ExpressivenessFlags, Literal, Rule
from .generate import ProofTree
from .oracle import AuditReport, entails, ground, satisfiable, audit


class AssemblyError(RuntimeError):
    pass


@dataclass(frozen=True)
class AssemblyConfig:
    candidates: int = 4            # B
    max_distractors: int = 5       # M; per-instance count m ~ Uniform{0..M}
    p_remove: float = 0.5
    p_arity2: float = 0.5
    distractor_positive_prob: float = 0.5
    max_flip_retries: int = 16

    def __post_init__(self):
        if self.candidates < 2:
            raise ValueError("need at least two candidates")
        if self.max_distractors < 0:
            raise ValueError("max_distractors must be >= 0")


@dataclass(frozen=True)
class CorruptionRecord:
    tree_index: int
    axiom_index: int
    axiom: Axiom
    action: str                    # "remove" | "flip"
    literal_index: int | None
    tree_axiom_count: int


@dataclass(frozen=True)
class SymbolicInstance:
    axioms: tuple[Axiom, ...]
    candidates: tuple[Literal, ...]
    answer_index: int
    corruption_records: tuple[CorruptionRecord, ...]
    distractor_count: int
    entities: tuple[int, ...]
    depth: int
    flags: ExpressivenessFlags
    # Oracle verdict recorded at assembly time (assemble refuses to return an
    # instance whose report does not pass).
    audit_report: AuditReport | None = field(default=None, compare=False)

    @property
    def rule_count(self) -> int:
        return sum(1 for a in self.axioms if isinstance(a, Rule))


def _flip_literal_in(axiom: Axiom, pos: int) -> Axiom:
    if isinstance(axiom, Literal):
        return Literal(axiom.predicate, axiom.entity, not axiom.positive)
    lits = list(axiom.premises + axiom.conclusions)
    lits[pos] = Literal(lits[pos].predicate, lits[pos].entity, not lits[pos].positive)
    np = len(axiom.premises)
    return Rule(tuple(lits[:np]), tuple(lits[np:]), axiom.universal)


def _broken(axioms: list[Axiom], tree: ProofTree, check_sat: bool) -> bool:
    # Removals keep a subset of the clauses, so satisfiability only needs
    # re-checking after polarity flips.
    cs = ground(axioms, tree.entities)
    if entails(cs, tree.goal):
        return False
    return satisfiable(cs) if check_sat else True


def corrupt_tree(
    tree: ProofTree,
    flags: ExpressivenessFlags,
    p_remove: float,
    rng: random.Random,
    max_flip_retries: int = 16,
) -> tuple[ProofTree, str, int, int | None]:
    """Corrupt one uniformly chosen axiom so the tree's goal is no longer entailed.

    Returns (corrupted tree, action, axiom index, flipped literal index).  The
    result is oracle-verified; a flip that happens to leave the goal entailed
    (or break satisfiability) is redrawn, falling back to removal.
    """
    axioms = list(tree.axioms)
    for _ in range(max_flip_retries):
        idx = rng.randrange(len(axioms))
        remove = not flags.negation or rng.random() < p_remove
        if remove:
            trial = axioms[:idx] + axioms[idx + 1 :]
            if _broken(trial, tree, check_sat=False):
                return replace(tree, axioms=tuple(trial)), "remove", idx, None
        else:
            target = axioms[idx]
            n_lits = 1 if isinstance(target, Literal) else len(target.literals())
            pos = rng.randrange(n_lits)
            trial = list(axioms)
            trial[idx] = _flip_literal_in(target, pos)
            if _broken(trial, tree, check_sat=True):
                return replace(tree, axioms=tuple(trial)), "flip", idx, pos
    # Removal of any single axiom breaks the unique derivation; scan in a
    # shuffled order in case an index was repeatedly unlucky above.
    order = list(range(len(axioms)))
    rng.shuffle(order)
    for idx in order:
        trial = axioms[:idx] + axioms[idx + 1 :]
        if _broken(trial, tree, check_sat=False):
            return replace(tree, axioms=tuple(trial)), "remove", idx, None
    raise AssemblyError("no single-axiom corruption breaks the goal")


def _grounded_literal_pool(axioms: list[Axiom]) -> list[Literal]:
    seen: set[tuple[int, int, bool]] = set()
    pool: list[Literal] = []
    for ax in axioms:
        lits = (ax,) if isinstance(ax, Literal) else ax.literals()
        if isinstance(ax, Rule) and ax.universal:
            continue
        for lit in lits:
            key = (lit.predicate, lit.entity, lit.positive)
            if key not in seen:
                seen.add(key)
                pool.append(lit)
    return pool


def add_distractors(
    axioms: list[Axiom],
    flags: ExpressivenessFlags,
    m: int,
    rule_cap: int,
    rng: random.Random,
    entities: tuple[int, ...],
    cfg: AssemblyConfig,
    next_pred: int,
) -> tuple[list[Axiom], int]:
    """Add up to m grounded distractor rules, stopping at the rule cap.

    Each distractor keeps at least one side entirely on fresh predicates, so
    it can feed on existing literals or produce dead-end ones but never
    creates a new derivation of any existing atom.
    """
    out = list(axioms)
    pool = _grounded_literal_pool(out)
    rules = sum(1 for a in out if isinstance(a, Rule))
    added = 0

    def fresh_side(n: int) -> list[Literal]:
        nonlocal next_pred
        side = []
        for _ in range(n):
            positive = True
            if flags.negation and rng.random() >= cfg.distractor_positive_prob:
                positive = False
            side.append(Literal(next_pred, rng.choice(entities), positive))
            next_pred += 1
        return side

    def existing_side(n: int) -> list[Literal]:
        n = min(n, len(pool))
        return rng.sample(pool, n)

    while added < m and rules < rule_cap:
        n_p = 2 if flags.conjunction and rng.random() < cfg.p_arity2 else 1
        n_c = 2 if flags.disjunction and rng.random() < cfg.p_arity2 else 1
        mode = rng.randrange(3)  # 0: premises fresh, 1: conclusions fresh, 2: both
        if mode == 0:
            prem, concl = fresh_side(n_p), existing_side(n_c)
        elif mode == 1:
            prem, concl = existing_side(n_p), fresh_side(n_c)
        else:
            prem, concl = fresh_side(n_p), fresh_side(n_c)
        if not prem or not concl:
            break
        out.append(Rule(tuple(prem), tuple(concl), universal=False))
        rules += 1
        added += 1
    return out, added


def assemble(
    trees: list[ProofTree], cfg: AssemblyConfig, rng: random.Random
) -> SymbolicInstance:
    """Merge B trees into one audited multiple-choice instance."""
    if len(trees) != cfg.candidates:
        raise AssemblyError(f"expected {cfg.candidates} trees, got {len(trees)}")
    depth = trees[0].depth
    flags = trees[0].flags
    entities = trees[0].entities
    for t in trees[1:]:
        if t.depth != depth or t.flags != flags or t.entities != entities:
            raise AssemblyError("trees must share depth, flags, and entity pool")

    pred_sets = [set(p for p, _e in t.node_depth) for t in trees]
    all_preds: set[int] = set()
    for ps in pred_sets:
        if all_preds & ps:
            raise AssemblyError("predicate spaces collide across trees")
        all_preds |= ps

    merged: list[Axiom] = list(trees[0].axioms)
    records: list[CorruptionRecord] = []
    for i, tree in enumerate(trees[1:], start=1):
        corrupted, action, idx, lit_idx = corrupt_tree(
            tree, flags, cfg.p_remove, rng, cfg.max_flip_retries
        )
        records.append(
            CorruptionRecord(
                tree_index=i,
                axiom_index=idx,
                axiom=tree.axioms[idx],
                action=action,
                literal_index=lit_idx,
                tree_axiom_count=len(tree.axioms),
            )
        )
        merged.extend(corrupted.axioms)

    m = rng.randint(0, cfg.max_distractors)
    merged, added = add_distractors(
        merged,
        flags,
        m,
        rule_cap=cfg.candidates * depth,
        rng=rng,
        entities=entities,
        cfg=cfg,
        next_pred=max(all_preds) + 1,
    )

    instance = SymbolicInstance(
        axioms=tuple(merged),
        candidates=tuple(t.goal for t in trees),
        answer_index=0,
        corruption_records=tuple(records),
        distractor_count=added,
        entities=entities,
        depth=depth,
        flags=flags,
    )
    report = audit(instance)
    if not report.passed:
        raise AssemblyError(f"assembled instance failed audit: {report}")
    return replace(instance, audit_report=report)
