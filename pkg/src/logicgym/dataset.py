"""Deterministic corpus generation, serialization, and manifesting.

Instance i of a corpus derives its seed as a stateless hash of the master
seed and i, so regeneration is byte-identical regardless of worker count or
generation order.  Records are one JSON object per line; the manifest echoes
the configuration and pins the content digest.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import random
from dataclasses import asdict, dataclass
from pathlib import Path

from .assemble import AssemblyConfig, SymbolicInstance, assemble
from .core import PLACEHOLDER, Axiom, ExpressivenessFlags, Level, Literal, Rule
from .generate import GenConfig, PredicateAllocator, generate_proof_tree
from .oracle import audit  # noqa: F401  (re-exported for corpus re-audits)
from .render import NLInstance, render_instance

SCHEMA_VERSION = 1

# Split sizes used throughout: train corpora default to 100k instances and
# held-out validation to 1k.
DEFAULT_TRAIN_COUNT = 100_000
DEFAULT_VALIDATION_COUNT = 1_000


@dataclass(frozen=True)
class CorpusConfig:
    level: str
    depth: int                    # D; instances sample depths uniform over 1..D
    candidates: int = 4
    max_distractors: int = 5
    p_neg: float = 0.5
    p_arity2: float = 0.5
    p_resolve_by_contradiction: float = 0.5
    p_universal: float = 0.5
    p_remove: float = 0.5
    distractor_positive_prob: float = 0.5
    num_entities: int | None = None   # default: 2 with quantification, else 1
    exact_depth: bool = False         # serve depth D exactly instead of 1..D

    def resolved_entities(self) -> int:
        if self.num_entities is not None:
            return self.num_entities
        return 2 if Level(self.level) is Level.QUANTIFICATION else 1

    def flags(self) -> ExpressivenessFlags:
        return ExpressivenessFlags.for_level(self.level)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["num_entities"] = self.resolved_entities()
        return d


def instance_seed(master_seed: int, index: int) -> int:
    """Stateless per-instance seed mix; order- and worker-independent."""
    digest = hashlib.sha256(f"{master_seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


# ---------------------------------------------------------------------------
# Canonical symbolic text: s-expression-like, round-trippable.

def literal_to_text(lit: Literal) -> str:
    ent = "X" if lit.entity == PLACEHOLDER else f"e{lit.entity}"
    sign = "+" if lit.positive else "-"
    return f"(p{lit.predicate} {ent} {sign})"


def axiom_to_text(axiom: Axiom) -> str:
    if isinstance(axiom, Literal):
        return f"(lit {literal_to_text(axiom)})"
    head = "forall" if axiom.universal else "rule"
    prem = " ".join(literal_to_text(l) for l in axiom.premises)
    concl = " ".join(literal_to_text(l) for l in axiom.conclusions)
    return f"({head} ({prem}) ({concl}))"


def _tokenize(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _parse_sexpr(tokens: list[str], pos: int):
    if tokens[pos] != "(":
        return tokens[pos], pos + 1
    items = []
    pos += 1
    while tokens[pos] != ")":
        item, pos = _parse_sexpr(tokens, pos)
        items.append(item)
    return items, pos + 1


def _literal_from_sexpr(item) -> Literal:
    pred, ent, sign = item
    entity = PLACEHOLDER if ent == "X" else int(ent[1:])
    return Literal(int(pred[1:]), entity, sign == "+")


def axiom_from_text(text: str) -> Axiom:
    tree, _ = _parse_sexpr(_tokenize(text), 0)
    kind = tree[0]
    if kind == "lit":
        return _literal_from_sexpr(tree[1])
    if kind in ("rule", "forall"):
        prem = tuple(_literal_from_sexpr(i) for i in tree[1])
        concl = tuple(_literal_from_sexpr(i) for i in tree[2])
        return Rule(prem, concl, universal=(kind == "forall"))
    raise ValueError(f"unrecognized axiom text: {text!r}")


def literal_from_text(text: str) -> Literal:
    tree, _ = _parse_sexpr(_tokenize(text), 0)
    return _literal_from_sexpr(tree)


# ---------------------------------------------------------------------------
# Single-instance build and record serialization.

@dataclass(frozen=True)
class GeneratedInstance:
    index: int
    seed: int
    depth: int
    symbolic: SymbolicInstance
    nl: NLInstance


def build_instance(cfg: CorpusConfig, index: int, master_seed: int) -> GeneratedInstance:
    """Generate, assemble, render, and audit instance `index` of a corpus."""
    seed = instance_seed(master_seed, index)
    rng = random.Random(seed)
    depth = cfg.depth if cfg.exact_depth else rng.randint(1, cfg.depth)
    gen_cfg = GenConfig(
        depth=depth,
        flags=cfg.flags(),
        p_neg=cfg.p_neg,
        p_arity2=cfg.p_arity2,
        p_resolve_by_contradiction=cfg.p_resolve_by_contradiction,
        p_universal=cfg.p_universal,
        num_entities=cfg.resolved_entities(),
    )
    alloc = PredicateAllocator()
    trees = [generate_proof_tree(gen_cfg, rng, alloc) for _ in range(cfg.candidates)]
    asm_cfg = AssemblyConfig(
        candidates=cfg.candidates,
        max_distractors=cfg.max_distractors,
        p_remove=cfg.p_remove,
        p_arity2=cfg.p_arity2,
        distractor_positive_prob=cfg.distractor_positive_prob,
    )
    # assemble() audits the merged instance and raises if it does not pass.
    symbolic = assemble(trees, asm_cfg, rng)
    nl = render_instance(symbolic, render_seed=rng.getrandbits(63))
    return GeneratedInstance(index=index, seed=seed, depth=depth, symbolic=symbolic, nl=nl)


def audit_digest(si: SymbolicInstance) -> str:
    payload = "|".join(axiom_to_text(a) for a in si.axioms)
    payload += "||" + "|".join(literal_to_text(c) for c in si.candidates)
    payload += f"||{si.answer_index}"
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def record_dict(inst: GeneratedInstance, cfg: CorpusConfig, split: str, blind: bool = False) -> dict:
    rec = {
        "id": f"{split}-{inst.index}",
        "seed": inst.seed,
        "depth": inst.depth,
        "config": cfg.to_dict(),
        "axioms": [axiom_to_text(a) for a in inst.symbolic.axioms],
        "candidates": [literal_to_text(c) for c in inst.symbolic.candidates],
        "prompt": inst.nl.prompt,
        "options": list(inst.nl.options),
        "audit_digest": audit_digest(inst.symbolic),
    }
    if not blind:
        rec["answer_index"] = inst.symbolic.answer_index
        rec["answer"] = inst.nl.answer
        rec["answer_position"] = inst.nl.answer_position
    return rec


def record_line(inst: GeneratedInstance, cfg: CorpusConfig, split: str, blind: bool = False) -> str:
    return json.dumps(record_dict(inst, cfg, split, blind), sort_keys=True, separators=(",", ":"))


def parse_record(line: str) -> dict:
    rec = json.loads(line)
    rec["axioms_symbolic"] = [axiom_from_text(t) for t in rec["axioms"]]
    rec["candidates_symbolic"] = [literal_from_text(t) for t in rec["candidates"]]
    return rec


def instance_from_record(rec: dict) -> SymbolicInstance:
    """Rebuild an auditable symbolic instance from a parsed record."""
    cfg = rec["config"]
    return SymbolicInstance(
        axioms=tuple(rec["axioms_symbolic"]),
        candidates=tuple(rec["candidates_symbolic"]),
        answer_index=rec.get("answer_index", 0),
        corruption_records=(),
        distractor_count=0,
        entities=tuple(range(cfg["num_entities"])),
        depth=rec["depth"],
        flags=ExpressivenessFlags.for_level(cfg["level"]),
    )


# ---------------------------------------------------------------------------
# Corpus writing.

def _worker_lines(args) -> tuple[int, list[str]]:
    cfg_dict, master_seed, split, blind, start, stop = args
    cfg = CorpusConfig(**cfg_dict)
    lines = [
        record_line(build_instance(cfg, i, master_seed), cfg, split, blind)
        for i in range(start, stop)
    ]
    return start, lines


def generate_corpus_lines(
    cfg: CorpusConfig,
    count: int,
    master_seed: int,
    split: str = "train",
    workers: int = 1,
    blind: bool = False,
) -> list[str]:
    if count < 1:
        raise ValueError("count must be >= 1")
    cfg_dict = asdict(cfg)
    if workers <= 1:
        _, lines = _worker_lines((cfg_dict, master_seed, split, blind, 0, count))
        return lines
    chunk = max(1, -(-count // workers))
    tasks = [
        (cfg_dict, master_seed, split, blind, start, min(start + chunk, count))
        for start in range(0, count, chunk)
    ]
    with multiprocessing.Pool(workers) as pool:
        parts = pool.map(_worker_lines, tasks)
    lines: list[str] = []
    for _, part in sorted(parts):
        lines.extend(part)
    return lines


@dataclass(frozen=True)
class DatasetManifest:
    schema_version: int
    split: str
    count: int
    master_seed: int
    config: dict
    content_digest: str

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "DatasetManifest":
        return cls(**json.loads(text))


def write_corpus(
    out_dir: str | Path,
    cfg: CorpusConfig,
    count: int,
    master_seed: int,
    split: str = "train",
    workers: int = 1,
    blind: bool = False,
) -> DatasetManifest:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = generate_corpus_lines(cfg, count, master_seed, split, workers, blind)
    payload = ("\n".join(lines) + "\n").encode()
    corpus_path = out_dir / f"{split}.jsonl"
    corpus_path.write_bytes(payload)
    manifest = DatasetManifest(
        schema_version=SCHEMA_VERSION,
        split=split,
        count=count,
        master_seed=master_seed,
        config=cfg.to_dict(),
        content_digest=hashlib.sha256(payload).hexdigest(),
    )
    (out_dir / f"{split}.manifest.json").write_text(manifest.to_json())
    return manifest


def regenerate_from_manifest(
    out_dir: str | Path, manifest: DatasetManifest, workers: int = 1
) -> DatasetManifest:
    cfg_dict = dict(manifest.config)
    cfg = CorpusConfig(**cfg_dict)
    fresh = write_corpus(
        out_dir, cfg, manifest.count, manifest.master_seed, manifest.split, workers
    )
    if fresh.content_digest != manifest.content_digest:
        raise RuntimeError("regenerated corpus digest does not match manifest")
    return fresh


def _audit_lines(lines: list[str]) -> tuple[int, list[str]]:
    passed = 0
    failures: list[str] = []
    for line in lines:
        rec = parse_record(line)
        if audit(instance_from_record(rec)).passed:
            passed += 1
        else:
            failures.append(rec["id"])
    return passed, failures


def audit_corpus(
    path: str | Path, sample: float = 1.0, seed: int = 0, workers: int = 1
) -> dict:
    """Re-audit records of a corpus file with the entailment oracle."""
    rng = random.Random(seed)
    total = 0
    selected: list[str] = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            total += 1
            if sample < 1.0 and rng.random() >= sample:
                continue
            selected.append(line)

    if workers <= 1 or len(selected) < 2 * workers:
        results = [_audit_lines(selected)]
    else:
        chunk = -(-len(selected) // workers)
        parts = [selected[i : i + chunk] for i in range(0, len(selected), chunk)]
        with multiprocessing.Pool(workers) as pool:
            results = pool.map(_audit_lines, parts)

    passed = sum(r[0] for r in results)
    failures = [fid for r in results for fid in r[1]]
    audited = len(selected)
    return {
        "total": total,
        "audited": audited,
        "passed": passed,
        "pass_rate": (passed / audited) if audited else None,
        "failures": failures,
    }
