"""Exact entailment oracle: grounding plus complete satisfiability search.

Ground truth for every generated instance is classical propositional
entailment.  An axiom set is grounded to clauses (universal rules expanded
once per entity), and a candidate literal g is entailed iff clauses + {~g}
is unsatisfiable, decided by iterative DPLL with unit propagation.  No
external solver is used; instances are small enough that this is fast.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Axiom, Literal, Rule, VariableTable, clause_form, instantiate, signed


@dataclass
class ClauseSet:
    """Grounded clause view of an axiom set.

    premise_counts[i] records how many leading literals of clauses[i] came
    from a rule's premise side (0 for unit literal axioms); derivation_levels
    needs this to recover rule structure from clauses.
    """

    table: VariableTable
    clauses: list[list[int]]
    premise_counts: list[int]

    @property
    def num_vars(self) -> int:
        return len(self.table)


def ground(axioms: Iterable[Axiom], entities: Sequence[int]) -> ClauseSet:
    """Ground axioms over the entity pool and convert to clauses."""
    table = VariableTable()
    clauses: list[list[int]] = []
    premise_counts: list[int] = []
    for ax in axioms:
        if isinstance(ax, Rule) and ax.universal:
            for e in entities:
                g = instantiate(ax, e)
                clauses.append(clause_form(g, table))
                premise_counts.append(len(g.premises))
        elif isinstance(ax, Rule):
            clauses.append(clause_form(ax, table))
            premise_counts.append(len(ax.premises))
        else:
            clauses.append(clause_form(ax, table))
            premise_counts.append(0)
    return ClauseSet(table, clauses, premise_counts)


class _Solver:
    """Complete backtracking search with unit propagation and clause learning.

    Conflicts are analyzed to the first unique implication point and the
    learned clause drives a backjump, so the shared structure of convergent
    disjunctions is explored once instead of once per case split.  One solver
    serves many queries over the same clause set: clauses learned during a
    query without extra assumptions are implied by the base set and are kept;
    clauses learned under extra assumptions may depend on them and are
    discarded when the query ends.
    """

    def __init__(self, clauses: Sequence[Sequence[int]], nvars: int):
        self.nvars = nvars
        self.clauses: list[list[int]] = [list(c) for c in clauses]
        self.pos_occ: list[list[int]] = [[] for _ in range(nvars + 1)]
        self.neg_occ: list[list[int]] = [[] for _ in range(nvars + 1)]
        for ci, cl in enumerate(self.clauses):
            for lit in cl:
                (self.pos_occ if lit > 0 else self.neg_occ)[abs(lit)].append(ci)
        # Conflict-frequency scores and saved phases persist across queries.
        self.score = [0.0] * (nvars + 1)
        self.phase = [-1] * (nvars + 1)
        self.bump = 1.0

    def _attach(self, clause: list[int]):
        ci = len(self.clauses)
        self.clauses.append(clause)
        for lit in clause:
            (self.pos_occ if lit > 0 else self.neg_occ)[abs(lit)].append(ci)

    def _detach_to(self, mark: int):
        while len(self.clauses) > mark:
            ci = len(self.clauses) - 1
            for lit in self.clauses.pop():
                occ = (self.pos_occ if lit > 0 else self.neg_occ)[abs(lit)]
                assert occ and occ[-1] == ci
                occ.pop()

    def solve(self, extras: tuple[int, ...] = ()) -> bool:
        """Satisfiability of the base clauses plus optional extra unit clauses."""
        mark = len(self.clauses)
        for lit in extras:
            self._attach([lit])
        try:
            return self._search()
        finally:
            if extras:
                self._detach_to(mark)

    def _search(self) -> bool:
        clauses = self.clauses
        pos_occ = self.pos_occ
        neg_occ = self.neg_occ
        score = self.score
        phase = self.phase
        nvars = self.nvars

        for c in clauses:
            if not c:
                return False

        assign = [0] * (nvars + 1)   # 0 unknown, 1 true, -1 false
        reason = [-1] * (nvars + 1)  # forcing clause index, -1 for decisions
        varlevel = [-1] * (nvars + 1)
        sat_count = [0] * len(clauses)
        unk_count = [len(cl) for cl in clauses]
        trail: list[int] = []
        level_marks: list[int] = [0]  # trail length at the start of each level
        heap: list[tuple[float, int]] = [
            (-score[v], v) for v in range(1, nvars + 1) if score[v] > 0.0
        ]
        heapq.heapify(heap)
        clause_cursor = 0
        # Decisions undone by a backjump, in chronological order; replaying
        # them (with saved phases) rebuilds the unrelated part of the trail
        # without rescanning the clause list.
        replay: deque[int] = deque()

        def propagate(pending: list[tuple[int, int]]) -> int:
            """Assign (literal, reason) pairs true, chase units; conflict or -1."""
            cur = len(level_marks) - 1
            i = 0
            while i < len(pending):
                lit, why = pending[i]
                i += 1
                v = abs(lit)
                s = 1 if lit > 0 else -1
                if assign[v] != 0:
                    if assign[v] != s:
                        return why
                    continue
                assign[v] = s
                reason[v] = why
                varlevel[v] = cur
                trail.append(v)
                for ci in pos_occ[v] if s > 0 else neg_occ[v]:
                    sat_count[ci] += 1
                    unk_count[ci] -= 1
                confl = -1
                for ci in neg_occ[v] if s > 0 else pos_occ[v]:
                    # Finish every counter update before reporting a conflict,
                    # or the backjump undo would drift the counters.
                    unk_count[ci] -= 1
                    if confl == -1 and sat_count[ci] == 0:
                        if unk_count[ci] == 0:
                            confl = ci
                        elif unk_count[ci] == 1:
                            for l2 in clauses[ci]:
                                if assign[abs(l2)] == 0:
                                    pending.append((l2, ci))
                                    break
                if confl != -1:
                    return confl
            return -1

        def backjump(target_level: int):
            undone: list[int] = []
            while len(level_marks) - 1 > target_level:
                mark = level_marks.pop()
                while len(trail) > mark:
                    v = trail.pop()
                    s = assign[v]
                    assign[v] = 0
                    phase[v] = s
                    if reason[v] == -1:
                        undone.append(v)
                    elif score[v] > 0.0:
                        heapq.heappush(heap, (-score[v], v))
                    for ci in pos_occ[v] if s > 0 else neg_occ[v]:
                        sat_count[ci] -= 1
                        unk_count[ci] += 1
                    for ci in neg_occ[v] if s > 0 else pos_occ[v]:
                        unk_count[ci] += 1
            replay.extendleft(undone)  # deepest-first extendleft -> oldest first

        def analyze(confl: int) -> tuple[list[int], int]:
            """Resolve back to the first UIP: (learned clause, backjump level)."""
            cur = len(level_marks) - 1
            seen = bytearray(nvars + 1)
            learned: list[int] = []
            counter = 0
            cl = clauses[confl]
            skip_var = 0
            idx = len(trail) - 1
            while True:
                for lit in cl:
                    v = abs(lit)
                    if v == skip_var or seen[v] or varlevel[v] == 0:
                        continue
                    seen[v] = 1
                    score[v] += self.bump
                    heapq.heappush(heap, (-score[v], v))
                    if varlevel[v] == cur:
                        counter += 1
                    else:
                        learned.append(lit)
                while not seen[trail[idx]]:
                    idx -= 1
                v = trail[idx]
                idx -= 1
                seen[v] = 0
                counter -= 1
                if counter == 0:
                    learned.append(-assign[v] * v)
                    break
                cl = clauses[reason[v]]
                skip_var = v
            self.bump *= 1.05
            if self.bump > 1e100:
                for v in range(nvars + 1):
                    score[v] *= 1e-100
                self.bump *= 1e-100
            if len(learned) == 1:
                return learned, 0
            bl = max(varlevel[abs(l)] for l in learned[:-1])
            return learned, bl

        def attach_learned(clause: list[int]) -> int:
            ci = len(clauses)
            self._attach(clause)
            sat_c = 0
            unk_c = 0
            for lit in clause:
                a = assign[abs(lit)]
                if a == 0:
                    unk_c += 1
                elif (a > 0) == (lit > 0):
                    sat_c += 1
            sat_count.append(sat_c)
            unk_count.append(unk_c)
            return ci

        conflict = propagate([(c[0], ci) for ci, c in enumerate(clauses) if len(c) == 1])
        if conflict != -1:
            return False

        while True:
            # Recent conflict variables first (saved phase); otherwise satisfy
            # the next open clause outright.  Once no clause is unsatisfied,
            # any extension of the assignment is a model.
            branch_lit = 0
            while replay:
                v = replay.popleft()
                if assign[v] == 0:
                    branch_lit = v * phase[v]
                    break
            while branch_lit == 0 and heap:
                negs, v = heapq.heappop(heap)
                if assign[v] == 0 and score[v] == -negs:
                    branch_lit = v * phase[v]
                    break
            if branch_lit == 0:
                ncl = len(clauses)
                while clause_cursor < ncl and sat_count[clause_cursor] > 0:
                    clause_cursor += 1
                if clause_cursor == ncl:
                    # A backjump may have reopened a clause behind the cursor;
                    # claim a model only after a clean full scan.
                    for ci in range(ncl):
                        if sat_count[ci] == 0:
                            clause_cursor = ci
                            break
                    else:
                        return True
                for lit in clauses[clause_cursor]:
                    if assign[abs(lit)] == 0:
                        branch_lit = lit
                        break
                assert branch_lit != 0, "open clause with no free literal"
            level_marks.append(len(trail))
            conflict = propagate([(branch_lit, -1)])
            while conflict != -1:
                if len(level_marks) == 1:
                    return False
                learned, bl = analyze(conflict)
                backjump(bl)
                ci = attach_learned(learned)
                conflict = propagate([(learned[-1], ci)])


def _solve(clauses: Sequence[Sequence[int]], nvars: int) -> bool:
    return _Solver(clauses, nvars).solve()


def _solver_for(cs: ClauseSet) -> _Solver:
    solver = getattr(cs, "_solver", None)
    if solver is None or solver.nvars != cs.num_vars:
        solver = _Solver(cs.clauses, cs.num_vars)
        cs._solver = solver
    return solver


def satisfiable(cs: ClauseSet) -> bool:
    return _solver_for(cs).solve()


def entails(cs: ClauseSet, goal: Literal) -> bool:
    """True iff the clause set classically entails the goal literal.

    A goal over an atom absent from the clause set is not entailed unless the
    set itself is unsatisfiable.
    """
    neg_goal = -signed(goal, cs.table)
    return not _solver_for(cs).solve((neg_goal,))


@dataclass
class AuditReport:
    entailed: list[bool]
    satisfiable: bool
    passed: bool

    def to_dict(self) -> dict:
        return {
            "entailed": self.entailed,
            "satisfiable": self.satisfiable,
            "pass": self.passed,
        }


def audit(instance) -> AuditReport:
    """Check an assembled instance: satisfiable axioms, exactly one entailed candidate.

    Passes iff the axiom set is satisfiable, exactly one candidate is
    entailed, and that candidate sits at the recorded answer index.
    """
    cs = ground(instance.axioms, instance.entities)
    sat = satisfiable(cs)
    flags = [entails(cs, c) for c in instance.candidates]
    ok = sat and sum(flags) == 1 and flags[instance.answer_index]
    return AuditReport(entailed=flags, satisfiable=sat, passed=ok)


def derivation_levels(cs: ClauseSet) -> dict[int, int]:
    """Forward-chaining round at which each variable first becomes derivable.

    Only defined for clause sets whose rules have a single conclusion literal
    (no disjunctive conclusions); raises ValueError otherwise.  Literal axioms
    sit at level 0; a rule's conclusion arrives one round after its last
    premise.
    """
    steps: list[tuple[list[int], int]] = []
    levels: dict[int, int] = {}
    for clause, pc in zip(cs.clauses, cs.premise_counts):
        if len(clause) - pc != 1:
            raise ValueError("derivation levels require single-conclusion rules")
        if pc == 0:
            tok = clause[0]
            if tok not in levels:
                levels[tok] = 0
        else:
            steps.append(([-l for l in clause[:pc]], clause[pc]))

    rounds = 0
    remaining = steps
    while remaining:
        rounds += 1
        fired = []
        still = []
        for prems, concl in remaining:
            if all(p in levels for p in prems):
                fired.append(concl)
            else:
                still.append((prems, concl))
        if not fired:
            break
        for tok in fired:
            if tok not in levels:
                levels[tok] = rounds
        remaining = still

    return {abs(tok) - 1: lvl for tok, lvl in levels.items()}
