"""
CNF formulas over DIMACS-style signed integer literals.

A literal is a non-zero int: v stands for x_v, -v for its negation. A Model is a
tuple of n literals ordered by variable; an assignment is a {var: bool} mapping that
may be partial.
"""
import enum
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np

log = logging.getLogger(__name__)

Literal = int
Clause = Tuple[int, ...]
Model = Tuple[int, ...]
Assignment = Dict[int, bool]

BRUTE_FORCE_MAX_VARS = 25
_BLOCK_BITS = 16


class CnfError(ValueError):
    """Malformed formula: literal out of range or a zero literal."""


class Truth(enum.Enum):
    TRUE = 'true'
    FALSE = 'false'
    UNDETERMINED = 'undetermined'


def var_of(lit: Literal) -> int:
    return lit if lit > 0 else -lit


def normalize_clause(lits: Iterable[Literal]):
    """Deduplicate literals keeping first occurrences. Returns None for a tautology.

    >>> normalize_clause([1, -2, 1])
    (1, -2)
    >>> normalize_clause([3, -3]) is None
    True
    """
    seen = set()
    out = []
    for lit in lits:
        if -lit in seen:
            return None
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: Tuple[Clause, ...]

    @classmethod
    def from_clauses(cls, num_vars: int, clauses: Iterable[Iterable[Literal]]) -> 'CnfFormula':
        """Build a formula, removing duplicate literals and tautologies and checking literal ranges."""
        if num_vars < 0:
            raise CnfError(f"Number of variables must be non-negative, got {num_vars}")
        kept = []
        for index, lits in enumerate(clauses):
            lits = tuple(lits)
            for lit in lits:
                if lit == 0 or var_of(lit) > num_vars:
                    raise CnfError(f"Clause {index}: literal {lit} outside 1..{num_vars}")
            clause = normalize_clause(lits)
            if clause is None:
                log.debug('Dropping tautological clause %s', lits)
                continue
            kept.append(clause)
        return cls(num_vars, tuple(kept))

    def __len__(self):
        return len(self.clauses)

    @property
    def has_empty_clause(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)

    def conjoin(self, extra: Iterable[Iterable[Literal]]) -> 'CnfFormula':
        return CnfFormula.from_clauses(self.num_vars, list(self.clauses) + [tuple(c) for c in extra])


def as_assignment(a: Union[Mapping[int, bool], Sequence[Literal]]) -> Assignment:
    """Accept either a {var: bool} mapping or a collection of signed literals."""
    if isinstance(a, Mapping):
        return dict(a)
    return {var_of(lit): lit > 0 for lit in a}


def model_from_assignment(a: Mapping[int, bool], num_vars: int) -> Model:
    assert len(a) >= num_vars and all(v in a for v in range(1, num_vars + 1)), "assignment is not total"
    return tuple(v if a[v] else -v for v in range(1, num_vars + 1))


def evaluate(f: CnfFormula, a) -> Truth:
    """Three-valued evaluation of f under a (possibly partial) assignment.

    >>> evaluate(CnfFormula.from_clauses(1, [[1]]), {1: True})
    <Truth.TRUE: 'true'>
    """
    a = as_assignment(a)
    for var in a:
        if not 1 <= var <= f.num_vars:
            raise CnfError(f"Assignment mentions variable {var} outside 1..{f.num_vars}")
    undetermined = False
    for clause in f.clauses:
        satisfied = False
        open_lits = False
        for lit in clause:
            value = a.get(var_of(lit))
            if value is None:
                open_lits = True
            elif value == (lit > 0):
                satisfied = True
                break
        if satisfied:
            continue
        if not open_lits:
            return Truth.FALSE
        undetermined = True
    return Truth.UNDETERMINED if undetermined else Truth.TRUE


def _block_models(f: CnfFormula, start: int, stop: int) -> np.ndarray:
    n = f.num_vars
    rows = np.arange(start, stop, dtype=np.int64)
    # column v-1 holds x_v; x_1 is the most significant bit so rows come out in lexicographic order
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    bits = ((rows[:, None] >> shifts[None, :]) & 1).astype(bool)
    ok = np.ones(len(rows), dtype=bool)
    for clause in f.clauses:
        if not clause:
            return bits[:0]
        sat = np.zeros(len(rows), dtype=bool)
        for lit in clause:
            column = bits[:, var_of(lit) - 1]
            sat |= column if lit > 0 else ~column
        ok &= sat
    return bits[ok]


def brute_force_models(f: CnfFormula) -> List[Model]:
    """All models of f in lexicographic order (false before true, x1 most significant). Refuses n > 25."""
    n = f.num_vars
    if n > BRUTE_FORCE_MAX_VARS:
        raise ValueError(f"Brute force enumeration refused for {n} variables (limit {BRUTE_FORCE_MAX_VARS})")
    total = 1 << n
    block = 1 << _BLOCK_BITS
    signs = np.arange(1, n + 1, dtype=np.int64)
    models = []
    for start in range(0, total, block):
        bits = _block_models(f, start, min(total, start + block))
        for row in np.where(bits, signs, -signs):
            models.append(tuple(int(x) for x in row))
    return models


def blocking_clause(model: Model) -> Clause:
    """Clause ruling out exactly this model.

    >>> blocking_clause((1, -2, 3, -4))
    (-1, 2, -3, 4)
    """
    return tuple(-lit for lit in model)
