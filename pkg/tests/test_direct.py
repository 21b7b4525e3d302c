import pytest

from cnf.formula import CnfFormula, Truth, brute_force_models, evaluate
from cnf.weighting import Weighting, WeightingError
from solvers.direct import (BudgetExceeded, count_direct, enumerate_direct, maxsat_weights, optimize_direct,
                            topk_configs_direct, topk_values_direct)

from conftest import MOBILE_MODELS, unit_weighting


@pytest.mark.parametrize('algorithm', ['cdcl', 'dpll'])
def test_enumeration_finds_every_model(mobile_formula, algorithm):
    models = enumerate_direct(mobile_formula, algorithm=algorithm)
    assert len(models) == MOBILE_MODELS
    assert set(models) == set(brute_force_models(mobile_formula))
    assert all(evaluate(mobile_formula, m) is Truth.TRUE for m in models)


def test_enumeration_stops_at_k(mobile_formula):
    assert len(enumerate_direct(mobile_formula, 5)) == 5
    assert enumerate_direct(CnfFormula.from_clauses(1, [[1], [-1]]), 3) == []


def test_count_and_budget(mobile_formula):
    assert count_direct(mobile_formula) == MOBILE_MODELS
    assert count_direct(mobile_formula, limit=MOBILE_MODELS + 1) == MOBILE_MODELS
    with pytest.raises(BudgetExceeded):
        count_direct(mobile_formula, limit=5)


@pytest.mark.parametrize('algorithm', ['cdcl', 'dpll'])
@pytest.mark.parametrize('mode', ['pb', 'maxsat'])
def test_optimize_counts_selected_features(mobile_formula, mode, algorithm):
    w = unit_weighting(mobile_formula.num_vars)
    low = optimize_direct(mobile_formula, w, 'min', mode=mode, algorithm=algorithm)
    high = optimize_direct(mobile_formula, w, 'max', mode=mode, algorithm=algorithm)
    assert low.value == 4 and w.value(low.model) == 4
    assert high.value == 8
    assert evaluate(mobile_formula, high.model) is Truth.TRUE


def test_optimize_unsat_and_bad_input(mobile_formula):
    assert optimize_direct(CnfFormula.from_clauses(1, [[1], [-1]]), Weighting(1)) is None
    with pytest.raises(WeightingError):
        optimize_direct(mobile_formula, Weighting(3))
    with pytest.raises(ValueError):
        optimize_direct(mobile_formula, unit_weighting(10), 'best')
    with pytest.raises(ValueError):
        optimize_direct(mobile_formula, unit_weighting(10), mode='lp')
    with pytest.raises(ValueError, match='algorithm'):
        optimize_direct(mobile_formula, unit_weighting(10), mode='maxsat', algorithm='walksat')


def test_maxsat_weights_shift_maximization():
    w = Weighting(2)
    w.set_weight(1, 3, 1)
    w.set_weight(2, 0, 2)
    assert maxsat_weights(w, 'min') == {1: 1, -1: 3, 2: 2}
    # offset 3, the largest literal cost; zero weights dropped
    assert maxsat_weights(w, 'max') == {1: 2, 2: 1, -2: 3}
    with pytest.raises(WeightingError):
        maxsat_weights(w, 'max', 1)


def test_topk_values(mobile_formula):
    w = unit_weighting(mobile_formula.num_vars)
    assert topk_values_direct(mobile_formula, w, 3) == [4, 5, 6]
    assert topk_values_direct(mobile_formula, w, 2, 'max') == [8, 7]
    every = topk_values_direct(mobile_formula, w, 100)
    assert every == sorted({w.value(m) for m in brute_force_models(mobile_formula)})


def test_topk_configs(mobile_formula):
    w = unit_weighting(mobile_formula.num_vars)
    best = topk_configs_direct(mobile_formula, w, 5)
    assert [r.value for r in best] == [4, 4, 4, 5, 5]
    assert len({r.model for r in best}) == 5
    all_of_them = topk_configs_direct(mobile_formula, w, 50)
    assert len(all_of_them) == MOBILE_MODELS


def test_topk_configs_stop_on_value_change(mobile_formula):
    w = unit_weighting(mobile_formula.num_vars)
    optimal = topk_configs_direct(mobile_formula, w, 10, stop_on_value_change=True)
    assert [r.value for r in optimal] == [4, 4, 4]
