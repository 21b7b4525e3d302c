import logging

from cnf.formula import CnfFormula
from .sat import Solver, Status, luby
from .dpll import DpllSolver
from .pb import PbConstraint, clause_to_pb, objective_constraint, objective_at_least, GEQ, LEQ

log = logging.getLogger(__name__)

ALGORITHMS = ('cdcl', 'dpll')


def new_solver(formula: CnfFormula, algorithm: str = 'cdcl', **kwargs):
    """Load a formula into a fresh solver.
    :param formula: CnfFormula to load
    :param algorithm: 'cdcl' (default) or 'dpll' for the propagation-free reference
    :param kwargs: max_learnts, deadline
    """
    if algorithm == 'cdcl':
        return Solver(formula, **kwargs)
    elif algorithm == 'dpll':
        return DpllSolver(formula, **kwargs)
    else:
        raise ValueError(f"Solver algorithm should be one of {ALGORITHMS}, got '{algorithm}'")
