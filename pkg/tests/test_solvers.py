import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnf.formula import CnfFormula, Truth, brute_force_models, evaluate
from solvers import GEQ, LEQ, DpllSolver, PbConstraint, Solver, Status, clause_to_pb, new_solver
from utils.utils import Deadline, DeadlineExceeded

from conftest import cnf_formulas


def test_trivial_formulas():
    assert Solver(CnfFormula.from_clauses(0, [])).solve() == ()
    assert Solver(CnfFormula.from_clauses(1, [[1], [-1]])).solve() is None
    assert Solver(CnfFormula(2, ((),))).solve() is None


def test_status_follows_calls():
    solver = Solver(CnfFormula.from_clauses(2, [[1, 2]]))
    assert solver.status is Status.UNKNOWN
    model = solver.solve()
    assert solver.status is Status.SAT
    solver.add_clause([-lit for lit in model])
    assert solver.status is Status.UNKNOWN
    solver.add_clause([-1])
    solver.add_clause([-2])
    assert solver.solve() is None
    assert solver.status is Status.UNSAT


def test_assumptions_do_not_persist():
    solver = Solver(CnfFormula.from_clauses(2, [[1, 2]]))
    assert solver.solve([-1]) == (-1, 2)
    assert solver.solve([-1, -2]) is None
    assert solver.solve() is not None


def test_pb_constraint_restricts_models():
    solver = Solver(CnfFormula.from_clauses(3, []))
    # at most one of three variables
    solver.add_pb_constraint(PbConstraint.build([(1, 1), (1, 2), (1, 3)], LEQ, 1))
    # and at least one
    index = solver.add_pb_constraint(PbConstraint.build([(1, 1), (1, 2), (1, 3)], GEQ, 1))
    model = solver.solve()
    assert sum(1 for lit in model if lit > 0) == 1
    solver.tighten_bound(index, 2)
    assert solver.solve() is None


def test_pb_normalization():
    c = PbConstraint.build([(2, 1), (3, -2)], LEQ, 2)
    # 2x1 + 3(1 - x2) <= 2  <=>  2~x1 + 3x2 >= 3
    assert c.terms == ((2, -1), (3, 2)) and c.bound == 3
    assert c.evaluate((-1, 2)) and not c.evaluate((1, -2))
    assert str(clause_to_pb((1, 2))) == '1*x1 + 1*x2 >= 1'
    assert not PbConstraint.build([(1, 1)], GEQ, 2).evaluate((1,))


def test_expired_deadline_stops_search():
    clauses = [[a, b, c] for a in (1, -1) for b in (2, -2) for c in (3, -3)]
    solver = new_solver(CnfFormula.from_clauses(3, clauses), 'dpll', deadline=Deadline(0))
    with pytest.raises(DeadlineExceeded):
        solver.solve()


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        new_solver(CnfFormula.from_clauses(1, []), 'walksat')


@settings(max_examples=200, deadline=None, derandomize=True)
@given(cnf_formulas(max_vars=12, max_clauses=50))
def test_cdcl_agrees_with_brute_force(formula):
    models = brute_force_models(formula)
    found = Solver(formula).solve()
    if models:
        assert found is not None and evaluate(formula, found) is Truth.TRUE
    else:
        assert found is None
    reference = DpllSolver(formula).solve()
    assert (reference is None) == (found is None)
    if reference is not None:
        assert reference == models[0]


@settings(max_examples=100, deadline=None, derandomize=True)
@given(cnf_formulas(max_vars=8, max_clauses=20), st.integers(min_value=0, max_value=8))
def test_pb_bound_agrees_with_brute_force(formula, bound):
    constraint = PbConstraint.build([(var, var) for var in range(1, formula.num_vars + 1)], LEQ, bound)
    expected = [m for m in brute_force_models(formula) if constraint.evaluate(m)]
    for solver in (Solver(formula), DpllSolver(formula)):
        solver.add_pb_constraint(constraint)
        found = solver.solve()
        assert (found is None) == (not expected)
        if found is not None:
            assert constraint.evaluate(found) and evaluate(formula, found) is Truth.TRUE


def test_learnt_cap_keeps_answers():
    # pigeonhole: 4 pigeons, 3 holes
    var = lambda p, h: 3 * p + h + 1
    clauses = [[var(p, h) for h in range(3)] for p in range(4)]
    clauses += [[-var(p, h), -var(q, h)] for h in range(3) for p in range(4) for q in range(p + 1, 4)]
    solver = Solver(CnfFormula.from_clauses(12, clauses), max_learnts=4)
    assert solver.solve() is None
    assert solver.stats['conflicts'] > 0
