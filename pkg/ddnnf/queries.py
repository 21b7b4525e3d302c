"""
Tractable queries over Decision-DNNF circuits: consistency, counting, enumeration and optimization.

All passes are bottom-up over the arena (children precede parents). Variables of a scope that a
child leaves unconstrained are "free" and are smoothed in: a factor 2 for counting, the better
polarity for optimization, both polarities for enumeration.
"""
import itertools
import logging
from typing import Dict, Iterator, List, Mapping, Optional, Sequence

from cnf.formula import Model, as_assignment, var_of
from cnf.weighting import Weighting, WeightingError
from ddnnf.circuit import AndNode, DdnnfCircuit, DecisionNode, FalseNode, LiteralNode, TrueNode
from solvers.direct import OptResult
from utils.utils import NO_DEADLINE, Deadline

log = logging.getLogger(__name__)


class InconsistentCircuitError(ValueError):
    """The circuit has no model."""


class _Infeasible(object):
    """Absorbing objective value of a node without models."""

    def __repr__(self):
        return 'INFEASIBLE'


INFEASIBLE = _Infeasible()


def branches(node) -> Sequence:
    """(child, literal set by the node on that branch) pairs of a disjunction."""
    if isinstance(node, DecisionNode):
        return (node.hi, node.var), (node.lo, -node.var)
    return tuple((child, None) for child in node.children)


def consistency_table(c: DdnnfCircuit) -> List[bool]:
    table = []
    for node in c.nodes:
        if isinstance(node, (LiteralNode, TrueNode)):
            table.append(True)
        elif isinstance(node, FalseNode):
            table.append(False)
        elif isinstance(node, AndNode):
            table.append(all(table[child] for child in node.children))
        else:
            table.append(any(table[child] for child in node.children))
    return table


def is_consistent(c: DdnnfCircuit) -> bool:
    """
    >>> from ddnnf.formats import parse_canonical
    >>> is_consistent(parse_canonical("ddnnf 1 0 0\\nF\\n"))
    False
    """
    return consistency_table(c)[c.root]


def count_table(c: DdnnfCircuit, assumptions: Optional[Mapping[int, bool]] = None) -> List[int]:
    """Per node, the number of assignments to vars(node) consistent with the node and the assumptions."""
    assumed = assumptions or {}
    table = []
    for i, node in enumerate(c.nodes):
        if isinstance(node, LiteralNode):
            var = var_of(node.lit)
            table.append(1 if assumed.get(var, node.lit > 0) == (node.lit > 0) else 0)
        elif isinstance(node, TrueNode):
            table.append(1)
        elif isinstance(node, FalseNode):
            table.append(0)
        elif isinstance(node, AndNode):
            product = 1
            for child in node.children:
                product *= table[child]
            table.append(product)
        else:
            total = 0
            for child, lit in branches(node):
                if lit is not None and assumed.get(var_of(lit), lit > 0) != (lit > 0):
                    continue
                gap = c.gap(i, child)
                free = len(gap) - sum(1 for v in gap if v in assumed)
                total += table[child] << free
            table.append(total)
    return table


def count_models(c: DdnnfCircuit, assumptions=None) -> int:
    """Number of models over all num_vars variables, optionally under a partial assignment.

    >>> from ddnnf.formats import parse_canonical
    >>> count_models(parse_canonical("ddnnf 3 2 2\\nL 2\\nL -2\\nD 1 0 1\\n"))
    2
    """
    assumed = as_assignment(assumptions) if assumptions is not None else {}
    for var in assumed:
        if not 1 <= var <= c.num_vars:
            raise ValueError(f"Assumption on variable {var} outside 1..{c.num_vars}")
    table = count_table(c, assumed)
    free = sum(1 for v in c.free_vars() if v not in assumed)
    return table[c.root] << free


def commonality(c: DdnnfCircuit) -> Dict[int, int]:
    """Per variable, the number of models in which it is true."""
    return {var: count_models(c, {var: True}) for var in range(1, c.num_vars + 1)}


def _expand(variables) -> Iterator[Dict[int, bool]]:
    ordered = sorted(variables)
    for values in itertools.product((False, True), repeat=len(ordered)):
        yield dict(zip(ordered, values))


def enumerate_models(c: DdnnfCircuit, k: Optional[int] = None) -> Iterator[Model]:
    """Models in depth-first order: hi branch before lo branch, free variables lowest index first,
    false before true. Inconsistent subcircuits are never entered, so the delay between two models
    is polynomial.

    >>> from ddnnf.formats import parse_canonical
    >>> list(enumerate_models(parse_canonical("ddnnf 1 0 2\\nT\\n")))
    [(-1, -2), (-1, 2), (1, -2), (1, 2)]
    """
    c.require_strict('Enumeration')
    consistent = consistency_table(c)

    def gen(i: int) -> Iterator[Dict[int, bool]]:
        node = c.nodes[i]
        if isinstance(node, LiteralNode):
            yield {var_of(node.lit): node.lit > 0}
        elif isinstance(node, TrueNode):
            yield {}
        elif isinstance(node, AndNode):
            yield from product(node.children, 0)
        elif isinstance(node, DecisionNode):
            for child, lit in branches(node):
                if consistent[child]:
                    gap = c.gap(i, child)
                    for partial in gen(child):
                        for filler in _expand(gap):
                            yield {var_of(lit): lit > 0, **partial, **filler}

    def product(children, index) -> Iterator[Dict[int, bool]]:
        if index == len(children):
            yield {}
            return
        for head in gen(children[index]):
            for tail in product(children, index + 1):
                yield {**head, **tail}

    def models() -> Iterator[Model]:
        if not consistent[c.root]:
            return
        for partial in gen(c.root):
            for filler in _expand(c.free_vars()):
                full = {**partial, **filler}
                yield tuple(v if full[v] else -v for v in range(1, c.num_vars + 1))

    return itertools.islice(models(), k)


def _better(direction: str):
    if direction == 'min':
        return lambda a, b: a < b
    return lambda a, b: a > b


def _free_cost(w: Weighting, variables, direction: str) -> int:
    return sum(w.literal_weight(w.cheaper(v, direction)) for v in variables)


def optimize(c: DdnnfCircuit, w: Weighting, direction: str = 'min',
             deadline: Deadline = NO_DEADLINE) -> Optional[OptResult]:
    """Optimal model and value by bottom-up propagation, or None when the circuit has no model.

    Ties between the two branches of a decision go to the lo branch; free variables take their
    better polarity, false on ties.
    """
    c.require_strict('Optimization')
    if w.num_vars != c.num_vars:
        raise WeightingError(f"Weighting covers {w.num_vars} variables, circuit has {c.num_vars}")
    if direction not in ('min', 'max'):
        raise ValueError(f"Direction should be 'min' or 'max', got '{direction}'")
    better = _better(direction)
    values = []
    choice = {}
    for i, node in enumerate(c.nodes):
        if i % 1024 == 0:
            deadline.check()
        if isinstance(node, LiteralNode):
            values.append(w.literal_weight(node.lit))
        elif isinstance(node, TrueNode):
            values.append(0)
        elif isinstance(node, FalseNode):
            values.append(INFEASIBLE)
        elif isinstance(node, AndNode):
            parts = [values[child] for child in node.children]
            values.append(INFEASIBLE if any(p is INFEASIBLE for p in parts) else sum(parts))
        else:
            best, best_branch = INFEASIBLE, None
            for child, lit in reversed(branches(node)):
                if values[child] is INFEASIBLE:
                    continue
                value = values[child] + w.literal_weight(lit) + _free_cost(w, c.gap(i, child), direction)
                if best is INFEASIBLE or better(value, best):
                    best, best_branch = value, (child, lit)
            values.append(best)
            choice[i] = best_branch
    if values[c.root] is INFEASIBLE:
        return None
    assignment = {}
    stack = [c.root]
    while stack:
        i = stack.pop()
        node = c.nodes[i]
        if isinstance(node, LiteralNode):
            assignment[var_of(node.lit)] = node.lit > 0
        elif isinstance(node, AndNode):
            stack.extend(node.children)
        elif isinstance(node, DecisionNode):
            child, lit = choice[i]
            assignment[node.var] = lit > 0
            stack.append(child)
    for var in range(1, c.num_vars + 1):
        if var not in assignment:
            assignment[var] = w.cheaper(var, direction) > 0
    model = tuple(v if assignment[v] else -v for v in range(1, c.num_vars + 1))
    value = values[c.root] + _free_cost(w, c.free_vars(), direction)
    assert value == w.value(model), f"witness value {w.value(model)} differs from propagated value {value}"
    return OptResult(model, value)


def format_model(model: Optional[Model]) -> str:
    """DIMACS-style literal list terminated by 0; UNSAT for no model.

    >>> format_model((1, -2)), format_model(()), format_model(None)
    ('1 -2 0', '0', 'UNSAT')
    """
    if model is None:
        return 'UNSAT'
    return ' '.join([str(lit) for lit in model] + ['0'])
