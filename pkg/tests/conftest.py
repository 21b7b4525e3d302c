from pathlib import Path

import pytest
from hypothesis import strategies as st

from cnf.formula import CnfFormula
from cnf.weighting import Weighting

DATA = Path(__file__).resolve().parent.parent / 'data'

# the mobile phone clauses written by hand, one letter per feature
LETTERS = {'a': 'MobilePhone', 'b': 'Screen', 'c': 'Basic', 'd': 'Color', 'e': 'HighResolution',
           'f': 'Media', 'g': 'Camera', 'h': 'MP3', 'i': 'Calls', 'j': 'GPS'}
LETTER_CLAUSES = ['a', 'b -c', 'b -d', 'b -e', 'c d e -b', '-c -d', '-c -e', '-d -e', 'f -g', 'f -h', 'g h -f',
                  'a -i', 'a -j', 'a -b', 'a -f', 'i -a', 'b -a', '-g e', '-j -c']
MOBILE_MODELS = 14


def letter_formula():
    """(formula, {var: feature name}) of the hand-written mobile phone clauses, a..j numbered 1..10."""
    index = {letter: i + 1 for i, letter in enumerate(sorted(LETTERS))}
    clauses = []
    for text in LETTER_CLAUSES:
        clause = []
        for token in text.split():
            negated = token.startswith('-')
            var = index[token.lstrip('-')]
            clause.append(-var if negated else var)
        clauses.append(clause)
    return CnfFormula.from_clauses(10, clauses), {index[letter]: name for letter, name in LETTERS.items()}


def selected_names(model, names):
    """Feature names selected by a model; names maps var to name (dict or NameMap.as_dict())."""
    return frozenset(names[lit] for lit in model if lit > 0)


def unit_weighting(n):
    """One unit per selected feature: the objective counts selected features."""
    return Weighting(n, 1, 0)


@pytest.fixture
def mobile_fm_text():
    return (DATA / 'mobile_phone.fm').read_text()


@pytest.fixture
def mobile_formula():
    from featuremodel import encode_fm, parse_fm
    formula, _ = encode_fm(parse_fm((DATA / 'mobile_phone.fm').read_text()))
    return formula


@pytest.fixture
def mobile_circuit(mobile_formula):
    from ddnnf import compile
    return compile(mobile_formula)


@st.composite
def cnf_formulas(draw, max_vars=16, max_clauses=60, max_width=4):
    """Random CNFs with mixed clause widths."""
    n = draw(st.integers(min_value=1, max_value=max_vars))
    literal = st.integers(min_value=1, max_value=n).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = draw(st.lists(st.lists(literal, min_size=1, max_size=max_width), max_size=max_clauses))
    return CnfFormula.from_clauses(n, clauses)


@st.composite
def feature_models(draw, max_features=16):
    import numpy as np
    from featuremodel import random_feature_model

    seed = draw(st.integers(min_value=0, max_value=2 ** 32 - 1))
    num_features = draw(st.integers(min_value=1, max_value=max_features))
    num_constraints = draw(st.integers(min_value=0, max_value=4))
    return random_feature_model(np.random.default_rng(seed), num_features, num_constraints)


@st.composite
def weightings(draw, n, bound):
    pos = draw(st.lists(st.integers(min_value=0, max_value=bound), min_size=n, max_size=n))
    neg = draw(st.lists(st.integers(min_value=0, max_value=bound), min_size=n, max_size=n))
    w = Weighting(n)
    for var in range(1, n + 1):
        w.set_weight(var, pos[var - 1], neg[var - 1])
    return w
