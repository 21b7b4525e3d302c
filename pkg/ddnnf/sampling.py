"""
Uniform sampling of models in the KUS style: a batch of requested samples travels top-down and
is split at every decision node by a binomial draw proportional to the smoothed model counts of
its branches. The random source is numpy's PCG64 generator, seeded explicitly.
"""
import logging
from typing import List, Optional

import numpy as np

from cnf.formula import Model, var_of
from ddnnf.circuit import AndNode, DdnnfCircuit, DecisionNode, LiteralNode
from ddnnf.queries import InconsistentCircuitError, count_table
from utils.utils import NO_DEADLINE, Deadline

log = logging.getLogger(__name__)


def new_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _coin_flips(rng: np.random.Generator, assign: np.ndarray, rows: np.ndarray, variables):
    columns = sorted(variables)
    if columns and len(rows):
        flips = rng.integers(0, 2, size=(len(rows), len(columns)), dtype=np.int8) * 2 - 1
        assign[np.ix_(rows, columns)] = flips


def sample_uniform(c: DdnnfCircuit, count: int, seed: int = 0,
                   rng: Optional[np.random.Generator] = None, deadline: Deadline = NO_DEADLINE) -> List[Model]:
    """count independent models, each uniform over the models of the circuit. Deterministic for a seed.

    >>> from ddnnf.formats import parse_canonical
    >>> sample_uniform(parse_canonical("ddnnf 1 0 1\\nL 1\\n"), 2, seed=7)
    [(1,), (1,)]
    """
    c.require_strict('Sampling')
    assert count >= 0, f"sample count must be non-negative, got {count}"
    counts = count_table(c)
    if counts[c.root] == 0:
        raise InconsistentCircuitError("Cannot sample from a circuit without models")
    rng = rng if rng is not None else new_rng(seed)
    assign = np.zeros((count, c.num_vars + 1), dtype=np.int8)

    # explicit stack of (node, rows) batches
    stack = [(c.root, np.arange(count))]
    while stack:
        i, rows = stack.pop()
        if not len(rows):
            continue
        deadline.check()
        node = c.nodes[i]
        if isinstance(node, LiteralNode):
            assign[rows, var_of(node.lit)] = 1 if node.lit > 0 else -1
        elif isinstance(node, AndNode):
            stack.extend((child, rows) for child in node.children)
        elif isinstance(node, DecisionNode):
            hi_weight = counts[node.hi] << len(c.gap(i, node.hi))
            lo_weight = counts[node.lo] << len(c.gap(i, node.lo))
            taken = int(rng.binomial(len(rows), hi_weight / (hi_weight + lo_weight)))
            shuffled = rng.permutation(rows)
            for child, sign, part in ((node.hi, 1, shuffled[:taken]), (node.lo, -1, shuffled[taken:])):
                assign[part, node.var] = sign
                _coin_flips(rng, assign, part, c.gap(i, child))
                stack.append((child, part))
    _coin_flips(rng, assign, np.arange(count), c.free_vars())
    log.debug('Drew %d samples over %d variables', count, c.num_vars)
    return [tuple(v if row[v] > 0 else -v for v in range(1, c.num_vars + 1)) for row in assign]
