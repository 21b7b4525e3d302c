import numpy as np
import pytest
from hypothesis import given, settings

from cnf.formula import brute_force_models
from featuremodel import (ConstraintKind, FeatureModelError, GroupKind, NameMap, Relation, encode_fm,
                          enumerate_configurations, name_map, parse_fm, random_feature_model, write_fm)

from conftest import MOBILE_MODELS, feature_models, letter_formula, selected_names


def test_parse_mobile_structure(mobile_fm_text):
    fm = parse_fm(mobile_fm_text)
    names = [f.name for f in fm.features]
    assert names[0] == 'MobilePhone' and len(names) == 10
    assert fm.features[fm.index_of('Calls')].relation is Relation.MANDATORY
    assert fm.features[fm.index_of('GPS')].relation is Relation.OPTIONAL
    kinds = sorted(g.kind.value for g in fm.groups)
    assert kinds == [GroupKind.ALTERNATIVE.value, GroupKind.OR.value]
    assert [(c.kind, fm.features[c.lhs].name, fm.features[c.rhs].name) for c in fm.constraints] == [
        (ConstraintKind.REQUIRES, 'Camera', 'HighResolution'), (ConstraintKind.EXCLUDES, 'GPS', 'Basic')]


def test_encoding_matches_hand_written_clauses(mobile_fm_text):
    formula, names = encode_fm(parse_fm(mobile_fm_text))
    assert formula.num_vars == 10
    assert len(formula.clauses) == 19
    expected, letter_names = letter_formula()
    encoded = {selected_names(m, names.as_dict()) for m in brute_force_models(formula)}
    reference = {selected_names(m, letter_names) for m in brute_force_models(expected)}
    assert encoded == reference
    assert len(encoded) == MOBILE_MODELS


def test_configuration_enumerator_agrees(mobile_fm_text):
    fm = parse_fm(mobile_fm_text)
    configs = enumerate_configurations(fm)
    assert len(configs) == MOBILE_MODELS
    assert len(set(configs)) == MOBILE_MODELS
    assert frozenset(['MobilePhone', 'Calls', 'Screen', 'Basic']) in configs


def test_name_map_is_breadth_first(mobile_fm_text):
    names = name_map(parse_fm(mobile_fm_text))
    assert names.var('MobilePhone') == 1
    assert [names.name(v) for v in range(2, 6)] == ['Calls', 'GPS', 'Screen', 'Media']
    assert NameMap.from_dict(names.as_dict()) == names


def test_root_only_model():
    formula, _ = encode_fm(parse_fm("Root"))
    assert formula.clauses == ((1,),)
    assert brute_force_models(formula) == [(1,)]


@pytest.mark.parametrize('text, line', [
    ("Root\n\tChild", 2),
    ("Root\n   Child", 2),
    ("Root\n    Child", 2),
    ("Root\nOther", 2),
    ("Root\n  A\n  A", 3),
    ("Root\n  A [sometimes]", 2),
    ("Root\n  <alt>\n    A [mandatory]", 3),
    ("Root\n  A\nconstraints:\n  A => Missing", 4),
    ("Root\n  A\nconstraints:\n  A => !A", 4),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(FeatureModelError) as error:
        parse_fm(text)
    assert error.value.line == line


def test_empty_group_is_rejected():
    with pytest.raises(FeatureModelError, match='empty group'):
        parse_fm("Root\n  <or>\n  B")


def test_write_fm_round_trip(mobile_fm_text):
    fm = parse_fm(mobile_fm_text)
    again = parse_fm(write_fm(fm))
    assert [f.name for f in again.features] == [f.name for f in fm.features]
    assert set(enumerate_configurations(again)) == set(enumerate_configurations(fm))


@settings(max_examples=50, deadline=None, derandomize=True)
@given(feature_models())
def test_encoding_models_are_configurations(fm):
    formula, names = encode_fm(fm)
    encoded = {selected_names(m, names.as_dict()) for m in brute_force_models(formula)}
    assert encoded == set(enumerate_configurations(fm))


def test_generator_is_valid_and_reproducible():
    a = random_feature_model(np.random.default_rng(5), 12, 3)
    b = random_feature_model(np.random.default_rng(5), 12, 3)
    assert a == b
    assert len(a.features) == 12
    for ctc in a.constraints:
        assert ctc.lhs != ctc.rhs
    again = parse_fm(write_fm(a))
    assert {f.name for f in again.features} == {f.name for f in a.features}
    assert set(enumerate_configurations(again)) == set(enumerate_configurations(a))
