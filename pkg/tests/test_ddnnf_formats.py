import itertools

import pytest

from cnf.formula import Truth, evaluate
from ddnnf import (AndNode, CircuitFormatError, CircuitValidationError, DdnnfCircuit, NotDecisionDnnfError, TrueNode,
                   count_models, enumerate_models, evaluate_circuit, is_consistent, parse_c2d_nnf, parse_canonical,
                   validate, write_c2d_nnf, write_canonical)
from ddnnf.validation import DANGLING, DECISION_FORM, DECOMPOSABILITY
from utils.readers import read_circuit

from conftest import MOBILE_MODELS

# (x1 and x2) or (x1 and not x2) or not x1: deterministic, but not a binary decision
THREE_WAY_OR = """c three children under one O node
nnf 7 7 2
L 1
L 2
A 2 0 1
L -2
A 2 0 3
L -1
O 0 3 2 4 5
"""


def test_canonical_round_trip(mobile_circuit):
    text = write_canonical(mobile_circuit)
    again = parse_canonical(text)
    assert write_canonical(again) == text
    assert count_models(again) == MOBILE_MODELS
    assert text.splitlines()[0] == f"ddnnf {len(mobile_circuit)} {mobile_circuit.root} 10"


def test_c2d_round_trip(mobile_circuit):
    again = parse_c2d_nnf(write_c2d_nnf(mobile_circuit))
    assert again.strict
    assert count_models(again) == MOBILE_MODELS
    assert set(enumerate_models(again)) == set(enumerate_models(mobile_circuit))


def test_compiled_circuit_is_equivalent(mobile_formula, mobile_circuit):
    assert validate(mobile_circuit).valid
    for bits in itertools.product((False, True), repeat=10):
        assignment = {var: bit for var, bit in enumerate(bits, start=1)}
        expected = evaluate(mobile_formula, assignment) is Truth.TRUE
        assert evaluate_circuit(mobile_circuit, assignment) == expected


def test_general_or_accepted_outside_strict_mode():
    with pytest.raises(NotDecisionDnnfError):
        parse_c2d_nnf(THREE_WAY_OR)
    c = parse_c2d_nnf(THREE_WAY_OR, strict=False)
    assert not c.strict
    assert validate(c, strict=False).valid
    assert DECISION_FORM in {v.kind for v in validate(c).violations}
    assert is_consistent(c) and count_models(c) == 4
    with pytest.raises(NotDecisionDnnfError):
        list(enumerate_models(c))
    with pytest.raises(NotDecisionDnnfError):
        write_canonical(c)


def test_binary_or_becomes_decision():
    text = "nnf 7 6 2\nL 1\nL 2\nA 2 0 1\nL -1\nL -2\nA 2 3 4\nO 0 2 2 5\n"
    c = parse_c2d_nnf(text)
    assert c.strict
    assert sorted(enumerate_models(c)) == [(-1, -2), (1, 2)]


def test_c2d_edge_count_mismatch_warns():
    with pytest.warns(UserWarning, match='declares 5 edges'):
        c = parse_c2d_nnf("nnf 3 5 1\nL 1\nL -1\nO 1 2 0 1\n")
    assert count_models(c) == 2


@pytest.mark.parametrize('text, line', [
    ("ddnnf 2 1 1\nL 3\nT\n", 2),
    ("ddnnf 2 1 1\nT\nA 2 0\n", 3),
    ("ddnnf 2 1 1\nT\nA 1 1\n", 3),
    ("ddnnf 1 0 1\nT\nT\n", 3),
    ("ddnnf 1 0 1\nX\n", 2),
    ("dnnf 1 0 1\nT\n", 1),
])
def test_canonical_format_errors_carry_line(text, line):
    with pytest.raises(CircuitFormatError) as error:
        parse_canonical(text)
    assert error.value.line == line


def test_canonical_node_count_mismatch():
    with pytest.raises(CircuitFormatError, match='declares 2 nodes'):
        parse_canonical("ddnnf 2 0 1\nL 1\n")


def test_shared_variable_under_and_is_reported():
    text = "ddnnf 3 2 1\nL 1\nL -1\nA 2 0 1\n"
    with pytest.raises(CircuitValidationError) as error:
        parse_canonical(text)
    assert error.value.report.node_ids() == [2]
    report = validate(parse_canonical(text, validate=False))
    assert [(v.node_id, v.kind) for v in report.violations] == [(2, DECOMPOSABILITY)]


def test_decision_variable_inside_branch_is_reported():
    report = validate(parse_canonical("ddnnf 2 1 1\nL 1\nD 1 0 0\n", validate=False))
    assert [(v.node_id, v.kind) for v in report.violations] == [(1, DECISION_FORM)]


def test_dangling_child_is_reported():
    report = validate(DdnnfCircuit([AndNode((1,)), TrueNode()], 0, 0))
    assert [(v.node_id, v.kind) for v in report.violations] == [(0, DANGLING)]
    assert 'node 0' in str(report)


def test_read_circuit_by_extension(tmp_path, mobile_circuit):
    canonical = tmp_path / 'mobile.ddnnf'
    canonical.write_text(write_canonical(mobile_circuit))
    c2d = tmp_path / 'mobile.nnf'
    c2d.write_text(write_c2d_nnf(mobile_circuit))
    assert count_models(read_circuit(canonical)) == count_models(read_circuit(c2d)) == MOBILE_MODELS
