"""
Direct reasoning on the CNF: enumeration and counting with blocking clauses, optimization by
linear search over a native PB objective bound, and top-k configurations/values on top of it.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

from cnf.formula import CnfFormula, Model, blocking_clause
from cnf.weighting import Weighting, WeightingError
from solvers import new_solver
from solvers.pb import LEQ, PbConstraint, objective_at_least, objective_constraint
from utils.utils import NO_DEADLINE, Deadline

log = logging.getLogger(__name__)

DIRECTIONS = ('min', 'max')
MODES = ('pb', 'maxsat')


class BudgetExceeded(RuntimeError):
    """The number of SAT calls allowed for enumeration-based counting was spent."""


@dataclass(frozen=True)
class OptResult:
    model: Model
    value: int


def _check_direction(direction):
    if direction not in DIRECTIONS:
        raise ValueError(f"Direction should be one of {DIRECTIONS}, got '{direction}'")


def _check_weighting(f: CnfFormula, w: Weighting):
    if w.num_vars != f.num_vars:
        raise WeightingError(f"Weighting covers {w.num_vars} variables, formula has {f.num_vars}")


def best_possible(w: Weighting, direction: str) -> int:
    """Objective value ignoring every constraint: per variable the better literal weight."""
    pick = min if direction == 'min' else max
    return sum(pick(p, n) for p, n in zip(w.pos, w.neg))


def enumerate_direct(f: CnfFormula, k: Optional[int] = None, algorithm: str = 'cdcl',
                     deadline: Deadline = NO_DEADLINE) -> List[Model]:
    """Up to k models (all when k is None): solve, emit, block the model, repeat until UNSAT."""
    assert k is None or k >= 1, f"k must be positive, got {k}"
    solver = new_solver(f, algorithm, deadline=deadline)
    models = []
    while k is None or len(models) < k:
        model = solver.solve()
        if model is None:
            break
        models.append(model)
        solver.add_clause(blocking_clause(model))
    log.debug('Enumerated %d models with %d solver calls', len(models), solver.stats['solves'])
    return models


def count_direct(f: CnfFormula, limit: Optional[int] = None, deadline: Deadline = NO_DEADLINE) -> int:
    """Model count by blocking-clause enumeration, spending at most `limit` SAT calls."""
    solver = new_solver(f, deadline=deadline)
    count = 0
    while True:
        if limit is not None and solver.stats['solves'] >= limit:
            raise BudgetExceeded(f"Counting needs more than {limit} SAT calls ({count} models so far)")
        model = solver.solve()
        if model is None:
            return count
        count += 1
        solver.add_clause(blocking_clause(model))


def _linear_search(solver, w: Weighting, direction: str) -> Optional[OptResult]:
    model = solver.solve()
    if model is None:
        return None
    value = w.value(model)
    target = best_possible(w, direction)
    handle = None
    while value != target:
        bound = objective_constraint(w, direction, value)
        if handle is None:
            handle = solver.add_pb_constraint(bound)
        else:
            solver.tighten_bound(handle, bound.bound)
        better = solver.solve()
        if better is None:
            break
        model, value = better, w.value(better)
        log.debug('Linear search improved the objective to %d', value)
    return OptResult(model, value)


def maxsat_weights(w: Weighting, direction: str, offset: Optional[int] = None) -> Dict[int, int]:
    """Soft unit clause weights realizing the objective as a violation cost.

    Violating the soft clause (l) means ~l holds. When minimizing, (l) weighs the cost of ~l; when
    maximizing it weighs offset - cost(~l), offset defaulting to the largest literal cost.
    Zero weights are omitted.

    >>> w = Weighting(1, 0, 5)
    >>> maxsat_weights(w, 'min'), maxsat_weights(w, 'max', 10)
    ({1: 5}, {1: 5, -1: 10})
    """
    _check_direction(direction)
    if direction == 'max':
        if offset is None:
            offset = w.max_literal_cost()
        if offset < w.max_literal_cost():
            raise WeightingError(f"Offset {offset} is below the largest literal cost {w.max_literal_cost()}")
    table = {}
    for var in range(1, w.num_vars + 1):
        for lit in (var, -var):
            cost = w.literal_weight(-lit)
            weight = cost if direction == 'min' else offset - cost
            if weight:
                table[lit] = weight
    return table


def _maxsat_search(f: CnfFormula, w: Weighting, direction: str, algorithm: str,
                   deadline: Deadline) -> Optional[OptResult]:
    table = maxsat_weights(w, direction)
    violation = lambda m: sum(table.get(-lit, 0) for lit in m)
    lower = sum(min(table.get(-var, 0), table.get(var, 0)) for var in range(1, f.num_vars + 1))
    terms = [(weight, -lit) for lit, weight in table.items()]
    solver = new_solver(f, algorithm, deadline=deadline)
    model = solver.solve()
    if model is None:
        return None
    cost = violation(model)
    handle = None
    while cost > lower:
        bound = PbConstraint.build(terms, LEQ, cost - 1)
        if handle is None:
            handle = solver.add_pb_constraint(bound)
        else:
            solver.tighten_bound(handle, bound.bound)
        better = solver.solve()
        if better is None:
            break
        model, cost = better, violation(better)
    return OptResult(model, w.value(model))


def optimize_direct(f: CnfFormula, w: Weighting, direction: str = 'min', mode: str = 'pb',
                    algorithm: str = 'cdcl', deadline: Deadline = NO_DEADLINE) -> Optional[OptResult]:
    """Optimal model and its value, or None when f is unsatisfiable.
    :param mode: 'pb' for linear search on the objective, 'maxsat' for the soft-clause emulation
    """
    _check_direction(direction)
    _check_weighting(f, w)
    if mode == 'maxsat':
        return _maxsat_search(f, w, direction, algorithm, deadline)
    if mode != 'pb':
        raise ValueError(f"Optimization mode should be one of {MODES}, got '{mode}'")
    return _linear_search(new_solver(f, algorithm, deadline=deadline), w, direction)


def topk_configs_direct(f: CnfFormula, w: Weighting, k: int, direction: str = 'min',
                        stop_on_value_change: bool = False, algorithm: str = 'cdcl',
                        deadline: Deadline = NO_DEADLINE) -> List[OptResult]:
    """The k best models: optimize, emit, block, re-optimize.

    With stop_on_value_change the enumeration ends as soon as the optimal value changes, so only
    co-optimal models are returned.
    """
    assert k >= 1, f"k must be positive, got {k}"
    _check_direction(direction)
    _check_weighting(f, w)
    results = []
    blocked = []
    while len(results) < k:
        best = _linear_search(new_solver(f.conjoin(blocked), algorithm, deadline=deadline), w, direction)
        if best is None:
            break
        if stop_on_value_change and results and best.value != results[0].value:
            break
        results.append(best)
        blocked.append(blocking_clause(best.model))
    return results


def topk_values_direct(f: CnfFormula, w: Weighting, k: int, direction: str = 'min', algorithm: str = 'cdcl',
                       deadline: Deadline = NO_DEADLINE) -> List[int]:
    """The k best distinct objective values, each found under a hard bound excluding the previous ones."""
    assert k >= 1, f"k must be positive, got {k}"
    _check_direction(direction)
    _check_weighting(f, w)
    values = []
    while len(values) < k:
        solver = new_solver(f, algorithm, deadline=deadline)
        if values:
            step = 1 if direction == 'min' else -1
            solver.add_pb_constraint(objective_at_least(w, direction, values[-1] + step))
        best = _linear_search(solver, w, direction)
        if best is None:
            break
        values.append(best.value)
    return values
