"""Core symbolic logic fragment: grounded literals, implication rules, clause form.

Literals are unary predicates applied to one entity with a polarity.  Rules map
a conjunction of premise literals to a disjunction of conclusion literals and
may be grounded or universally scoped.  Universal rules use a single shared
placeholder entity slot (PLACEHOLDER); they must be instantiated before clause
conversion.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

# Entity slot used by every literal of a universal rule.
PLACEHOLDER = -1


class Level(str, Enum):
    """Cumulative expressiveness levels, weakest to strongest."""

    IMPLICATION = "implication"
    CONJUNCTION = "conjunction"
    NEGATION = "negation"
    DISJUNCTION = "disjunction"
    QUANTIFICATION = "quantification"


@dataclass(frozen=True)
class ExpressivenessFlags:
    """Which logical operators the generator may use.

    The hierarchy is cumulative: disjunction requires negation requires
    conjunction, and quantification requires disjunction.  Construction of a
    flag set violating that ordering raises ValueError.
    """

    conjunction: bool = False
    negation: bool = False
    disjunction: bool = False
    quantification: bool = False

    def __post_init__(self):
        if self.negation and not self.conjunction:
            raise ValueError("negation requires conjunction")
        if self.disjunction and not self.negation:
            raise ValueError("disjunction requires negation")
        if self.quantification and not self.disjunction:
            raise ValueError("quantification requires disjunction")

    @classmethod
    def for_level(cls, level: Level | str) -> "ExpressivenessFlags":
        level = Level(level)
        order = list(Level)
        rank = order.index(level)
        return cls(
            conjunction=rank >= 1,
            negation=rank >= 2,
            disjunction=rank >= 3,
            quantification=rank >= 4,
        )

    @property
    def level(self) -> Level:
        if self.quantification:
            return Level.QUANTIFICATION
        if self.disjunction:
            return Level.DISJUNCTION
        if self.negation:
            return Level.NEGATION
        if self.conjunction:
            return Level.CONJUNCTION
        return Level.IMPLICATION


@dataclass(frozen=True)
class Literal:
    """A predicate applied to one entity, with a polarity."""

    predicate: int
    entity: int
    positive: bool = True

    @property
    def atom(self) -> tuple[int, int]:
        return (self.predicate, self.entity)

    def __repr__(self):
        sign = "" if self.positive else "~"
        ent = "X" if self.entity == PLACEHOLDER else f"e{self.entity}"
        return f"{sign}p{self.predicate}({ent})"


def negate(lit: Literal) -> Literal:
    """Flip the polarity of a literal; predicate and entity are unchanged."""
    return Literal(lit.predicate, lit.entity, not lit.positive)


@dataclass(frozen=True)
class Rule:
    """premises -> conclusions, grounded or universally scoped.

    Premises are conjoined, conclusions disjoined.  Both sides are non-empty.
    A universal rule's literals all use the PLACEHOLDER entity.
    """

    premises: tuple[Literal, ...]
    conclusions: tuple[Literal, ...]
    universal: bool = False

    def __post_init__(self):
        if not self.premises or not self.conclusions:
            raise ValueError("rule needs at least one premise and one conclusion")
        if self.universal:
            for lit in self.premises + self.conclusions:
                if lit.entity != PLACEHOLDER:
                    raise ValueError("universal rule literals must use the placeholder entity")

    def literals(self) -> tuple[Literal, ...]:
        return self.premises + self.conclusions

    def __repr__(self):
        p = " & ".join(map(repr, self.premises))
        c = " | ".join(map(repr, self.conclusions))
        head = "forall X: " if self.universal else ""
        return f"{head}{p} -> {c}"


# An axiom is either a given literal or a rule.
Axiom = Union[Literal, Rule]


def instantiate(rule: Rule, entity: int) -> Rule:
    """Ground a universal rule by substituting the placeholder with an entity."""
    if not rule.universal:
        raise ValueError("can only instantiate a universal rule")
    if entity < 0:
        raise ValueError("entity must be a non-negative id")
    return Rule(
        premises=tuple(Literal(l.predicate, entity, l.positive) for l in rule.premises),
        conclusions=tuple(Literal(l.predicate, entity, l.positive) for l in rule.conclusions),
        universal=False,
    )


class VariableTable:
    """Dense mapping from (predicate, entity) atoms to propositional variables."""

    def __init__(self):
        self._index: dict[tuple[int, int], int] = {}
        self.atoms: list[tuple[int, int]] = []

    def var(self, lit: Literal) -> int:
        key = lit.atom
        idx = self._index.get(key)
        if idx is None:
            idx = len(self.atoms)
            self._index[key] = idx
            self.atoms.append(key)
        return idx

    def lookup(self, lit: Literal) -> int | None:
        return self._index.get(lit.atom)

    def __len__(self):
        return len(self.atoms)


def signed(lit: Literal, table: VariableTable) -> int:
    """DIMACS-style signed variable for a literal: +-(var index + 1)."""
    v = table.var(lit) + 1
    return v if lit.positive else -v


def clause_form(axiom: Axiom, table: VariableTable) -> list[int]:
    """Convert a grounded axiom to a clause over the variable table.

    A literal axiom becomes a unit clause.  A rule p1..pk -> c1..cm becomes
    (~p1 | ... | ~pk | c1 | ... | cm), premises first.
    """
    if isinstance(axiom, Literal):
        if axiom.entity == PLACEHOLDER:
            raise ValueError("literal axiom must be grounded")
        return [signed(axiom, table)]
    if axiom.universal:
        raise ValueError("universal rule must be instantiated before clause conversion")
    clause = [-signed(lit, table) for lit in axiom.premises]
    clause += [signed(lit, table) for lit in axiom.conclusions]
    return clause
