"""
Top-down compilation of a CNF into a Decision-DNNF circuit.

Each step unit-propagates, splits the residual clauses into variable-disjoint components and
branches on one variable per component. Components are cached on their residual clause set.
"""
import logging
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from cnf.formula import CnfFormula, var_of
from ddnnf.circuit import CircuitBuilder, DdnnfCircuit
from utils.utils import NO_DEADLINE, Deadline

log = logging.getLogger(__name__)

HEURISTICS = ('occurrence', 'vsads')
ACTIVITY_DECAY = 0.95


class CompilationLimitExceeded(RuntimeError):
    """The circuit grew past the configured node limit."""


@dataclass
class CompilerStats:
    nodes: int = 0
    decisions: int = 0
    cache_hits: int = 0
    cache_misses: int = 0
    components: int = 0


class Compiler(object):
    """
    :param node_limit: maximum number of arena nodes before giving up (None = unlimited)
    :param cache: reuse compiled components with identical residual clauses
    :param heuristic: 'occurrence' (most residual occurrences, lowest index on ties) or 'vsads'
                      (occurrences plus an activity bumped on variables of failed branches)
    """

    def __init__(self, node_limit: Optional[int] = None, cache: bool = True, heuristic: str = 'occurrence',
                 deadline: Deadline = NO_DEADLINE):
        if heuristic not in HEURISTICS:
            raise ValueError(f"Heuristic should be one of {HEURISTICS}, got '{heuristic}'")
        self.node_limit = node_limit
        self.use_cache = cache
        self.heuristic = heuristic
        self.deadline = deadline

    def compile(self, f: CnfFormula) -> Tuple[DdnnfCircuit, CompilerStats]:
        self.clauses = f.clauses
        self.builder = CircuitBuilder()
        self.cache: Dict[tuple, int] = {}
        self.activity: Dict[int, float] = {}
        self.activity_inc = 1.0
        self.stats = CompilerStats()
        old_limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old_limit, 10000 + 20 * f.num_vars))
        try:
            root = self._compile_residual(range(len(self.clauses)), {})
        finally:
            sys.setrecursionlimit(old_limit)
        circuit = self.builder.build(root, f.num_vars)
        self.stats.nodes = len(circuit)
        log.info('Compiled %d vars / %d clauses into %d nodes (%d decisions, %d cache hits)',
                 f.num_vars, len(self.clauses), self.stats.nodes, self.stats.decisions, self.stats.cache_hits)
        return circuit, self.stats

    def _check_limits(self):
        self.deadline.check()
        if self.node_limit is not None and len(self.builder) > self.node_limit:
            raise CompilationLimitExceeded(f"Circuit exceeded the node limit of {self.node_limit}")

    def _propagate(self, clause_ids, assignment: Dict[int, bool]):
        """Unit propagation over the given clauses. None on conflict, else (assignment, implied, residual ids)."""
        assignment = dict(assignment)
        implied = []
        active = list(clause_ids)
        changed = True
        while changed:
            changed = False
            remaining = []
            for cid in active:
                open_lits = []
                for lit in self.clauses[cid]:
                    value = assignment.get(var_of(lit))
                    if value is None:
                        open_lits.append(lit)
                    elif value == (lit > 0):
                        break
                else:
                    if not open_lits:
                        return None
                    if len(open_lits) == 1:
                        lit = open_lits[0]
                        assignment[var_of(lit)] = lit > 0
                        implied.append(lit)
                        changed = True
                    else:
                        remaining.append(cid)
            active = remaining
        return assignment, implied, active

    def _components(self, clause_ids: List[int], assignment: Dict[int, bool]) -> List[List[int]]:
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        owner = {}
        for cid in clause_ids:
            parent[cid] = cid
            for lit in self.clauses[cid]:
                var = var_of(lit)
                if var in assignment:
                    continue
                if var in owner:
                    a, b = find(owner[var]), find(cid)
                    if a != b:
                        parent[max(a, b)] = min(a, b)
                else:
                    owner[var] = cid
        groups: Dict[int, List[int]] = {}
        for cid in clause_ids:
            groups.setdefault(find(cid), []).append(cid)
        return [groups[key] for key in sorted(groups)]

    def _compile_residual(self, clause_ids, assignment: Dict[int, bool]) -> int:
        b = self.builder
        propagated = self._propagate(clause_ids, assignment)
        if propagated is None:
            return b.false()
        assignment, implied, residual = propagated
        parts = [b.literal(lit) for lit in sorted(implied, key=var_of)]
        if residual:
            components = self._components(residual, assignment)
            if len(components) > 1:
                self.stats.components += len(components)
            bodies = []
            for component in components:
                body = self._compile_component(component, assignment)
                if b.is_false(body):
                    return b.false()
                bodies.append(body)
            parts.append(b.conj(bodies))
        return b.conj_tree(parts)

    def _pick(self, clause_ids: List[int], assignment: Dict[int, bool]) -> int:
        score: Dict[int, float] = {}
        for cid in clause_ids:
            for lit in self.clauses[cid]:
                var = var_of(lit)
                if var not in assignment:
                    score[var] = score.get(var, 0) + 1
        if self.heuristic == 'vsads':
            score = {v: 0.5 * s + self.activity.get(v, 0.0) for v, s in score.items()}
        return min(score, key=lambda v: (-score[v], v))

    def _bump(self, clause_ids: List[int], assignment: Dict[int, bool]):
        for cid in clause_ids:
            for lit in self.clauses[cid]:
                if var_of(lit) not in assignment:
                    self.activity[var_of(lit)] = self.activity.get(var_of(lit), 0.0) + self.activity_inc
        self.activity_inc /= ACTIVITY_DECAY

    def _compile_component(self, clause_ids: List[int], assignment: Dict[int, bool]) -> int:
        self._check_limits()
        key = None
        if self.use_cache:
            scope = {var_of(lit) for cid in clause_ids for lit in self.clauses[cid]}
            fixed = frozenset(v if assignment[v] else -v for v in scope if v in assignment)
            key = (frozenset(clause_ids), fixed)
            hit = self.cache.get(key)
            if hit is not None:
                self.stats.cache_hits += 1
                return hit
            self.stats.cache_misses += 1
        var = self._pick(clause_ids, assignment)
        self.stats.decisions += 1
        hi = self._compile_residual(clause_ids, {**assignment, var: True})
        lo = self._compile_residual(clause_ids, {**assignment, var: False})
        if self.heuristic == 'vsads' and (self.builder.is_false(hi) or self.builder.is_false(lo)):
            self._bump(clause_ids, assignment)
        node = self.builder.decision(var, hi, lo)
        if key is not None:
            self.cache[key] = node
        return node


def compile(f: CnfFormula, node_limit: Optional[int] = None, cache: bool = True, heuristic: str = 'occurrence',
            deadline: Deadline = NO_DEADLINE) -> DdnnfCircuit:
    """Compile f into an equivalent Decision-DNNF circuit over 1..f.num_vars.

    >>> from ddnnf.queries import count_models
    >>> count_models(compile(CnfFormula.from_clauses(2, [[1, 2], [-1, -2]])))
    2
    """
    circuit, _ = Compiler(node_limit, cache, heuristic, deadline).compile(f)
    return circuit
