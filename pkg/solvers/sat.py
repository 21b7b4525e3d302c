"""
Incremental CDCL SAT solver with a native pseudo-Boolean counter propagator.

Two watched literals, first-UIP learning, decaying variable activities with lowest-index
tie-break, phase saving (initial phase false) and Luby restarts. Assumptions are decided
first, one per decision level. Linear PB constraints (sum(coef * lit) >= bound) propagate
through a running sum of their unfalsified coefficients.
"""
import enum
import logging
from typing import Dict, List, Optional, Sequence

from cnf.formula import CnfError, CnfFormula, Model, var_of
from solvers.pb import PbConstraint
from utils.utils import NO_DEADLINE, Deadline

log = logging.getLogger(__name__)

RESTART_BASE = 100
RESTART_INC = 2.0
VAR_DECAY = 0.95
RESCALE_LIMIT = 1e100
DEADLINE_POLL = 128


class Status(enum.Enum):
    UNKNOWN = 'unknown'
    SAT = 'sat'
    UNSAT = 'unsat'


def luby(y: float, x: int) -> float:
    """x-th element (0-based) of the Luby sequence scaled by y.

    >>> [int(luby(2, i)) for i in range(7)]
    [1, 1, 2, 1, 1, 2, 4]
    """
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return y ** seq


class _Pb(object):
    __slots__ = 'terms', 'bound', 'max_coef', 'unfalsified'

    def __init__(self, terms, bound):
        self.terms = terms
        self.bound = bound
        self.max_coef = max((coef for coef, _ in terms), default=0)
        self.unfalsified = 0


class Solver(object):
    """CDCL solver over the variables 1..num_vars of a CnfFormula.

    A solver is single-owner. Between calls it always sits at decision level 0, so clauses and
    PB constraints may be added at any time outside solve().
    """

    def __init__(self, formula: CnfFormula, max_learnts: Optional[int] = None, deadline: Deadline = NO_DEADLINE):
        self.num_vars = formula.num_vars
        self.max_learnts = max_learnts
        self.deadline = deadline
        n = self.num_vars
        self.value = [0] * (n + 1)
        self.level = [0] * (n + 1)
        self.reason: List[Optional[list]] = [None] * (n + 1)
        self.activity = [0.0] * (n + 1)
        self.phase = [False] * (n + 1)
        self.seen = [False] * (n + 1)
        self.var_inc = 1.0
        self.trail: List[int] = []
        self.trail_lim: List[int] = []
        self.qhead = 0
        self.watches: Dict[int, List[list]] = {lit: [] for v in range(1, n + 1) for lit in (v, -v)}
        self.clauses: List[list] = []
        self.learnts: List[list] = []
        self.pbs: List[_Pb] = []
        self.pb_occ: Dict[int, List[tuple]] = {}
        self.ok = True
        self._status = Status.UNKNOWN
        self.num_clauses = 0
        self.stats = dict(decisions=0, conflicts=0, propagations=0, restarts=0, learned=0, solves=0)
        for clause in formula.clauses:
            self.add_clause(clause)
        self._status = Status.UNSAT if not self.ok else (Status.SAT if self._all_satisfied() else Status.UNKNOWN)
        log.debug('Solver loaded: %d vars, %d clauses, status %s', n, self.num_clauses, self._status.value)

    # assignment helpers

    def lit_value(self, lit: int) -> int:
        v = self.value[lit if lit > 0 else -lit]
        return v if lit > 0 else -v

    @property
    def decision_level(self) -> int:
        return len(self.trail_lim)

    @property
    def status(self) -> Status:
        return Status.UNSAT if not self.ok else self._status

    def _all_satisfied(self) -> bool:
        return all(any(self.lit_value(lit) == 1 for lit in c) for c in self.clauses) and \
            all(self._pb_forced_true(pb) for pb in self.pbs)

    def _pb_forced_true(self, pb: _Pb) -> bool:
        return sum(coef for coef, lit in pb.terms if self.lit_value(lit) == 1) >= pb.bound

    def _enqueue(self, lit: int, reason: Optional[list]):
        var = lit if lit > 0 else -lit
        self.value[var] = 1 if lit > 0 else -1
        self.level[var] = self.decision_level
        self.reason[var] = reason
        self.trail.append(lit)
        for index, coef in self.pb_occ.get(-lit, ()):
            self.pbs[index].unfalsified -= coef

    def _new_decision_level(self):
        self.trail_lim.append(len(self.trail))

    def cancel_until(self, level: int):
        if self.decision_level <= level:
            return
        stop = self.trail_lim[level]
        for i in range(len(self.trail) - 1, stop - 1, -1):
            lit = self.trail[i]
            var = var_of(lit)
            self.phase[var] = lit > 0
            self.value[var] = 0
            self.reason[var] = None
            for index, coef in self.pb_occ.get(-lit, ()):
                self.pbs[index].unfalsified += coef
        del self.trail[stop:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    def _check_range(self, lits: Sequence[int]):
        for lit in lits:
            if lit == 0 or var_of(lit) > self.num_vars:
                raise CnfError(f"Literal {lit} outside 1..{self.num_vars}")

    # database

    def add_clause(self, clause: Sequence[int]):
        """Add a clause permanently. An empty clause makes the solver unsatisfiable."""
        clause = list(dict.fromkeys(clause))
        self._check_range(clause)
        self.cancel_until(0)
        self.num_clauses += 1
        if self._status is Status.SAT:
            self._status = Status.UNKNOWN
        if not self.ok:
            return
        if any(-lit in clause for lit in clause) or any(self.lit_value(lit) == 1 for lit in clause):
            return
        lits = [lit for lit in clause if self.lit_value(lit) == 0]
        if not lits:
            self.ok = False
        elif len(lits) == 1:
            self._enqueue(lits[0], None)
            if self.propagate() is not None:
                self.ok = False
        else:
            self.clauses.append(lits)
            self.watches[lits[0]].append(lits)
            self.watches[lits[1]].append(lits)

    def add_pb_constraint(self, constraint: PbConstraint) -> int:
        """Add a PB constraint and return its handle for tighten_bound()."""
        c = constraint.normalize()
        self._check_range([lit for _, lit in c.terms])
        self.cancel_until(0)
        index = len(self.pbs)
        pb = _Pb(c.terms, c.bound)
        pb.unfalsified = sum(coef for coef, lit in c.terms if self.lit_value(lit) != -1)
        self.pbs.append(pb)
        for coef, lit in c.terms:
            self.pb_occ.setdefault(lit, []).append((index, coef))
        self._recheck_pb(index)
        return index

    def tighten_bound(self, index: int, bound: int):
        """Raise the bound of a stored PB constraint. Bounds only ever increase."""
        pb = self.pbs[index]
        assert bound >= pb.bound, f"bound can only be tightened ({pb.bound} -> {bound})"
        self.cancel_until(0)
        pb.bound = bound
        self._recheck_pb(index)

    def _recheck_pb(self, index: int):
        if self._status is Status.SAT:
            self._status = Status.UNKNOWN
        if not self.ok:
            return
        if self._check_pb(index) is not None or self.propagate() is not None:
            self.ok = False

    # propagation

    def _check_pb(self, index: int) -> Optional[list]:
        """Conflict clause, or None after enqueuing every literal the constraint forces."""
        pb = self.pbs[index]
        slack = pb.unfalsified - pb.bound
        if slack < 0:
            return [lit for _, lit in pb.terms if self.lit_value(lit) == -1]
        if pb.max_coef <= slack:
            return None
        falsified = None
        for coef, lit in pb.terms:
            if coef > slack and self.lit_value(lit) == 0:
                if falsified is None:
                    falsified = [x for _, x in pb.terms if self.lit_value(x) == -1]
                self._enqueue(lit, [lit] + falsified)
        return None

    def propagate(self) -> Optional[list]:
        """Unit propagation over clauses and PB constraints. Returns a falsified clause or None."""
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            self.stats['propagations'] += 1
            false_lit = -p
            ws = self.watches[false_lit]
            i = j = 0
            end = len(ws)
            while i < end:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                if self.lit_value(first) == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    if self.lit_value(c[k]) != -1:
                        c[1], c[k] = c[k], c[1]
                        self.watches[c[1]].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if self.lit_value(first) == -1:
                        while i < end:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(self.trail)
                        return c
                    self._enqueue(first, c)
            del ws[j:]
            for index in dict.fromkeys(index for index, _ in self.pb_occ.get(false_lit, ())):
                conflict = self._check_pb(index)
                if conflict is not None:
                    self.qhead = len(self.trail)
                    return conflict
        return None

    # search

    def _bump(self, var: int):
        self.activity[var] += self.var_inc
        if self.activity[var] > RESCALE_LIMIT:
            self.activity = [a * 1e-100 for a in self.activity]
            self.var_inc *= 1e-100

    def analyze(self, conflict: list):
        """First-UIP learning. Returns (learnt clause, backjump level); learnt[0] is asserting."""
        learnt = [0]
        path = 0
        p = None
        index = len(self.trail) - 1
        clause = conflict
        current = self.decision_level
        while True:
            for q in (clause if p is None else clause[1:]):
                var = var_of(q)
                if not self.seen[var] and self.level[var] > 0:
                    self.seen[var] = True
                    self._bump(var)
                    if self.level[var] >= current:
                        path += 1
                    else:
                        learnt.append(q)
            while not self.seen[var_of(self.trail[index])]:
                index -= 1
            p = self.trail[index]
            index -= 1
            clause = self.reason[var_of(p)]
            self.seen[var_of(p)] = False
            path -= 1
            if path <= 0:
                break
        learnt[0] = -p
        for lit in learnt[1:]:
            self.seen[var_of(lit)] = False
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda i: self.level[var_of(learnt[i])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[var_of(learnt[1])]

    def _pick_branch(self) -> Optional[int]:
        best, best_activity = None, -1.0
        for var in range(1, self.num_vars + 1):
            if self.value[var] == 0 and self.activity[var] > best_activity:
                best, best_activity = var, self.activity[var]
        if best is None:
            return None
        return best if self.phase[best] else -best

    def _locked(self, c: list) -> bool:
        return self.reason[var_of(c[0])] is c and self.lit_value(c[0]) == 1

    def _reduce_db(self):
        keep = len(self.learnts) // 2
        removed, kept = [], []
        for position, c in enumerate(self.learnts):
            (removed if position < len(self.learnts) - keep and not self._locked(c) else kept).append(c)
        for c in removed:
            for lit in (c[0], c[1]):
                self.watches[lit] = [x for x in self.watches[lit] if x is not c]
        self.learnts = kept
        log.debug('Learned clause database reduced by %d clauses', len(removed))

    def _handle_conflict(self, conflict: list) -> bool:
        """Learn from a conflict and backjump. False when the database is unsatisfiable."""
        top = max((self.level[var_of(lit)] for lit in conflict), default=0)
        if top == 0:
            return False
        if top < self.decision_level:
            self.cancel_until(top)
        learnt, back_level = self.analyze(conflict)
        self.cancel_until(back_level)
        if len(learnt) == 1:
            self._enqueue(learnt[0], None)
        else:
            self.learnts.append(learnt)
            self.watches[learnt[0]].append(learnt)
            self.watches[learnt[1]].append(learnt)
            self._enqueue(learnt[0], learnt)
        self.stats['learned'] += 1
        self.var_inc /= VAR_DECAY
        return True

    def _search(self, budget: float, assumptions: Sequence[int]) -> Optional[bool]:
        conflicts = 0
        steps = 0
        while True:
            steps += 1
            if steps % DEADLINE_POLL == 0:
                self.deadline.check()
            conflict = self.propagate()
            if conflict is not None:
                conflicts += 1
                self.stats['conflicts'] += 1
                if self.decision_level == 0 or not self._handle_conflict(conflict):
                    self.ok = False
                    return False
                continue
            if conflicts >= budget:
                self.cancel_until(0)
                return None
            if self.max_learnts is not None and len(self.learnts) > self.max_learnts:
                self._reduce_db()
            decision = None
            while self.decision_level < len(assumptions):
                lit = assumptions[self.decision_level]
                val = self.lit_value(lit)
                if val == 1:
                    self._new_decision_level()
                elif val == -1:
                    return False
                else:
                    decision = lit
                    break
            if decision is None:
                decision = self._pick_branch()
                if decision is None:
                    return True
                self.stats['decisions'] += 1
            self._new_decision_level()
            self._enqueue(decision, None)

    def solve(self, assumptions: Sequence[int] = ()) -> Optional[Model]:
        """A model of the database and the assumptions, or None when none exists."""
        assumptions = list(assumptions)
        self._check_range(assumptions)
        self.stats['solves'] += 1
        if not self.ok:
            return None
        self.cancel_until(0)
        restart = 0
        try:
            while True:
                result = self._search(luby(RESTART_INC, restart) * RESTART_BASE, assumptions)
                if result is not None:
                    break
                restart += 1
                self.stats['restarts'] += 1
            if not result:
                return None
            model = tuple(v if self.value[v] == 1 else -v for v in range(1, self.num_vars + 1))
            if not assumptions:
                self._status = Status.SAT
            return model
        finally:
            self.cancel_until(0)
