from cnf.formula import CnfFormula, Truth, evaluate
from ddnnf import compile, enumerate_models, sample_uniform
from ddnnf.sampling import new_rng
from utils.metrics import chi_square_uniformity, max_frequency_deviation, model_frequencies

from conftest import MOBILE_MODELS

SAMPLES = 10000


def test_samples_are_uniform(mobile_formula, mobile_circuit):
    samples = sample_uniform(mobile_circuit, SAMPLES, seed=11)
    assert len(samples) == SAMPLES
    assert all(evaluate(mobile_formula, s) is Truth.TRUE for s in set(samples))
    observed = model_frequencies(samples, list(enumerate_models(mobile_circuit)))
    assert observed.sum() == SAMPLES and (observed > 0).all()
    statistic, critical = chi_square_uniformity(observed)
    assert len(observed) == MOBILE_MODELS and critical < 34.6
    assert statistic < critical
    assert max_frequency_deviation(observed) < 0.02


def test_sampling_is_deterministic_per_seed(mobile_circuit):
    first = sample_uniform(mobile_circuit, 50, seed=3)
    assert sample_uniform(mobile_circuit, 50, seed=3) == first
    assert sample_uniform(mobile_circuit, 50, seed=4) != first
    assert sample_uniform(mobile_circuit, 50, rng=new_rng(3)) == first


def test_free_variables_are_sampled_too():
    # variable 3 appears in no clause
    circuit = compile(CnfFormula.from_clauses(3, [[1, 2], [-1, -2]]))
    samples = sample_uniform(circuit, 2000, seed=0)
    observed = model_frequencies(samples, list(enumerate_models(circuit)))
    assert len(observed) == 4 and (observed > 350).all()


def test_zero_samples(mobile_circuit):
    assert sample_uniform(mobile_circuit, 0) == []
