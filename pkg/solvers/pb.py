"""
Pseudo-Boolean constraints over literals.

Normalized form: sum(coef * lit) >= bound with positive coefficients and at most one term per variable.
Negative literals absorb negated variables, so x1 - x2 >= 0 is stored as x1 + ~x2 >= 1.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple

from cnf.formula import Model, as_assignment, var_of
from cnf.weighting import Weighting

GEQ = '>='
LEQ = '<='


@dataclass(frozen=True)
class PbConstraint:
    terms: Tuple[Tuple[int, int], ...]
    sense: str
    bound: int

    def __post_init__(self):
        assert self.sense in (GEQ, LEQ), f"sense must be '>=' or '<=', got {self.sense}"

    @classmethod
    def build(cls, terms: Iterable[Tuple[int, int]], sense: str, bound: int) -> 'PbConstraint':
        """Normalize arbitrary integer terms into the >= form described above.

        >>> PbConstraint.build([(1, 1), (-1, 2)], GEQ, 0)
        PbConstraint(terms=((1, 1), (1, -2)), sense='>=', bound=1)
        """
        const = 0
        weights: Dict[int, int] = {}
        for coef, lit in terms:
            var = var_of(lit)
            if lit > 0:
                weights[var] = weights.get(var, 0) + coef
            else:
                # c * ~x == c - c * x
                const += coef
                weights[var] = weights.get(var, 0) - coef
        if sense == LEQ:
            const, bound = -const, -bound
            weights = {v: -w for v, w in weights.items()}
        normalized = []
        for var in sorted(weights):
            w = weights[var]
            if w > 0:
                normalized.append((w, var))
            elif w < 0:
                # w * x == w + |w| * ~x
                const += w
                normalized.append((-w, -var))
        return cls(tuple(normalized), GEQ, bound - const)

    def normalize(self) -> 'PbConstraint':
        return PbConstraint.build(self.terms, self.sense, self.bound)

    def lhs(self, assignment) -> int:
        a = as_assignment(assignment)
        return sum(coef for coef, lit in self.terms if a[var_of(lit)] == (lit > 0))

    def evaluate(self, model: Model) -> bool:
        value = self.lhs(model)
        return value >= self.bound if self.sense == GEQ else value <= self.bound

    def variable_form(self) -> Tuple[Dict[int, int], int]:
        """Coefficients on plain variables and the folded bound: sum(x_i) - sum(x_j) >= 1 - q for a clause.

        >>> clause_to_pb((1, -2)).variable_form()
        ({1: 1, 2: -1}, 0)
        """
        c = self.normalize()
        coefs, bound = {}, c.bound
        for coef, lit in c.terms:
            if lit > 0:
                coefs[lit] = coef
            else:
                coefs[-lit] = -coef
                bound -= coef
        return coefs, bound

    def __str__(self):
        parts = [f"{coef}*{'x' if lit > 0 else '~x'}{var_of(lit)}" for coef, lit in self.terms]
        return f"{' + '.join(parts) or '0'} {self.sense} {self.bound}"


def clause_to_pb(clause: Sequence[int]) -> PbConstraint:
    """A clause l1 v ... v lp as l1 + ... + lp >= 1.

    >>> str(clause_to_pb((-1, -2)))
    '1*~x1 + 1*~x2 >= 1'
    """
    assert len(clause) > 0, "the empty clause has no PB counterpart"
    return PbConstraint(tuple((1, lit) for lit in clause), GEQ, 1)


def objective_terms(w: Weighting):
    terms = []
    for var in range(1, w.num_vars + 1):
        terms.append((w.literal_weight(var), var))
        terms.append((w.literal_weight(-var), -var))
    return terms


def objective_constraint(w: Weighting, direction: str, value: int) -> PbConstraint:
    """Objective strictly better than value: <= value - 1 when minimizing, >= value + 1 when maximizing."""
    if direction == 'min':
        return PbConstraint.build(objective_terms(w), LEQ, value - 1)
    return PbConstraint.build(objective_terms(w), GEQ, value + 1)


def objective_at_least(w: Weighting, direction: str, value: int) -> PbConstraint:
    """Objective no better than value: >= value when minimizing, <= value when maximizing."""
    if direction == 'min':
        return PbConstraint.build(objective_terms(w), GEQ, value)
    return PbConstraint.build(objective_terms(w), LEQ, value)
