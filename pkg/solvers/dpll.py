"""
Plain DPLL with the Solver interface, used for differential testing.

Branches on the lowest unassigned variable, false first. Clauses get unit propagation;
PB constraints are only checked once the assignment is total.
"""
from typing import Dict, List, Optional, Sequence

from cnf.formula import CnfError, CnfFormula, Model, var_of
from solvers.pb import GEQ, PbConstraint
from solvers.sat import Status
from utils.utils import NO_DEADLINE, Deadline


class DpllSolver(object):

    def __init__(self, formula: CnfFormula, deadline: Deadline = NO_DEADLINE, **_):
        self.num_vars = formula.num_vars
        self.deadline = deadline
        self.clauses: List[tuple] = []
        self.pbs: List[PbConstraint] = []
        self.num_clauses = 0
        self.stats = dict(decisions=0, conflicts=0, solves=0)
        for clause in formula.clauses:
            self.add_clause(clause)

    @property
    def ok(self) -> bool:
        return not any(len(c) == 0 for c in self.clauses)

    @property
    def status(self) -> Status:
        return Status.UNKNOWN if self.ok else Status.UNSAT

    def _check_range(self, lits: Sequence[int]):
        for lit in lits:
            if lit == 0 or var_of(lit) > self.num_vars:
                raise CnfError(f"Literal {lit} outside 1..{self.num_vars}")

    def add_clause(self, clause: Sequence[int]):
        self._check_range(clause)
        self.num_clauses += 1
        self.clauses.append(tuple(dict.fromkeys(clause)))

    def add_pb_constraint(self, constraint: PbConstraint) -> int:
        c = constraint.normalize()
        self._check_range([lit for _, lit in c.terms])
        self.pbs.append(c)
        return len(self.pbs) - 1

    def tighten_bound(self, index: int, bound: int):
        old = self.pbs[index]
        assert bound >= old.bound, f"bound can only be tightened ({old.bound} -> {bound})"
        self.pbs[index] = PbConstraint(old.terms, GEQ, bound)

    def _unit_propagate(self, assignment: Dict[int, bool]) -> bool:
        changed = True
        while changed:
            changed = False
            for clause in self.clauses:
                open_lit, open_count = None, 0
                for lit in clause:
                    value = assignment.get(var_of(lit))
                    if value is None:
                        open_lit, open_count = lit, open_count + 1
                    elif value == (lit > 0):
                        break
                else:
                    if open_count == 0:
                        return False
                    if open_count == 1:
                        assignment[var_of(open_lit)] = open_lit > 0
                        changed = True
        return True

    def _search(self, assignment: Dict[int, bool]) -> Optional[Dict[int, bool]]:
        self.deadline.check()
        if not self._unit_propagate(assignment):
            self.stats['conflicts'] += 1
            return None
        free = next((v for v in range(1, self.num_vars + 1) if v not in assignment), None)
        if free is None:
            model = tuple(v if assignment[v] else -v for v in range(1, self.num_vars + 1))
            if all(pb.evaluate(model) for pb in self.pbs):
                return assignment
            self.stats['conflicts'] += 1
            return None
        for value in (False, True):
            self.stats['decisions'] += 1
            found = self._search({**assignment, free: value})
            if found is not None:
                return found
        return None

    def solve(self, assumptions: Sequence[int] = ()) -> Optional[Model]:
        self._check_range(assumptions)
        self.stats['solves'] += 1
        assignment = {}
        for lit in assumptions:
            if assignment.get(var_of(lit), lit > 0) != (lit > 0):
                return None
            assignment[var_of(lit)] = lit > 0
        found = self._search(assignment)
        if found is None:
            return None
        return tuple(v if found[v] else -v for v in range(1, self.num_vars + 1))
