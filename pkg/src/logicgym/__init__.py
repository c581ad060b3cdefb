"""Synthetic logical-reasoning environments with controllable proof depth and expressiveness."""

__version__ = "0.1.0"

from .core import ExpressivenessFlags, Level, Literal, Rule, negate, instantiate
from .generate import GenConfig, ProofTree, generate_proof_tree
from .assemble import AssemblyConfig, SymbolicInstance, assemble
from .render import NLInstance, render_instance
from .oracle import AuditReport, audit, entails, ground, satisfiable
from .reward import RewardOutcome, extract_answer, score
from .curriculum import CurriculumState, Strategy, report_accuracy, sample_depth
from .dataset import CorpusConfig, DatasetManifest, build_instance, write_corpus

__all__ = [
    "ExpressivenessFlags", "Level", "Literal", "Rule", "negate", "instantiate",
    "GenConfig", "ProofTree", "generate_proof_tree",
    "AssemblyConfig", "SymbolicInstance", "assemble",
    "NLInstance", "render_instance",
    "AuditReport", "audit", "entails", "ground", "satisfiable",
    "RewardOutcome", "extract_answer", "score",
    "CurriculumState", "Strategy", "report_accuracy", "sample_depth",
    "CorpusConfig", "DatasetManifest", "build_instance", "write_corpus",
    "__version__",
]
