import io

import pytest

from cnf.weighting import WeightingError
from dsl import (ArityError, Assignment, Print, ScriptError, ScriptFileNotFound, ScriptSyntaxError, ScriptTypeError,
                 UnsupportedOnRepresentation, parse_script, run_script)

from conftest import DATA

SCRIPTS = DATA / 'scripts'
LOAD = 'rep = load_cnf("../mobile_phone.cnf")\n'
UNIT = 'w = new_weighting(10, 1, 0)\n'


def run(text, seed=None):
    out = io.StringIO()
    assert run_script(text, out, base_dir=SCRIPTS, seed=seed) == 0
    return out.getvalue()


def positive_literals(line):
    return sum(1 for token in line.split() if int(token) > 0)


def test_parse_min_cost_script():
    script = parse_script((SCRIPTS / 'min_cost.win').read_text())
    assert len(script) == 7
    assert sum(isinstance(s, Assignment) for s in script.statements) == 5
    assert sum(isinstance(s, Print) for s in script.statements) == 2
    assert [s.target for s in script.statements if isinstance(s, Assignment)] == ['rep', 'w', None, None, 'opt']


def test_min_cost_script_output():
    lines = run((SCRIPTS / 'min_cost.win').read_text()).splitlines()
    assert lines[0] == '4'
    assert lines[1].endswith(' 0') and positive_literals(lines[1]) == 4


def test_compiled_min_cost_script_output():
    text = (SCRIPTS / 'compiled_min_cost.win').read_text()
    output = run(text)
    lines = output.splitlines()
    assert lines[:2] == ['14', '4']
    assert positive_literals(lines[2]) == 4
    assert run(text) == output


def test_count_needs_a_compiled_representation():
    with pytest.raises(UnsupportedOnRepresentation) as error:
        run(LOAD + 'print count(rep)')
    assert error.value.line == 2
    with pytest.raises(UnsupportedOnRepresentation):
        run(LOAD + 'print sample(rep, 2)')


def test_both_representations_agree():
    direct = run(LOAD + UNIT + 'print top_k_values(rep, w, 3, "min")\nprint sat(load_cnf("../unsat.cnf"))')
    compiled = run(LOAD + UNIT + 'rep = compile(rep)\nprint top_k_values(rep, w, 3, "min")')
    assert direct == '4\n5\n6\nUNSAT\n'
    assert compiled == '4\n5\n6\n'
    configs = run(LOAD + UNIT + 'print top_k_configs(compile(rep), w, 3, "min")').splitlines()
    assert len(configs) == 3 and all(line.startswith('4\t') for line in configs)
    assert len(run(LOAD + 'print enumerate(rep, 2)').splitlines()) == 2


def test_sample_seed_defaults_to_the_run_seed():
    prefix = LOAD + 'rep = compile(rep)\n'
    implicit = run(prefix + 'print sample(rep, 4)', seed=9)
    explicit = run(prefix + 'print sample(rep, 4, 9)')
    assert implicit == explicit
    assert len(implicit.splitlines()) == 4


@pytest.mark.parametrize('text, error', [
    ('w = new_weighting()', ArityError),
    ('w = new_weighting(1, 2, 3, 4)', ArityError),
    ('w = new_weighting("ten")', ScriptTypeError),
    ('w = new_weighting(0)', ScriptTypeError),
    ('x = frobnicate(1)', ScriptTypeError),
    ('print missing', ScriptTypeError),
    ('rep = load_fm("../mobile_phone.cnf")', ScriptTypeError),
    ('rep = load_cnf("../absent.cnf")', ScriptFileNotFound),
    ('w = set_weight(new_weighting(3), 9, 1, 0)', ScriptTypeError),
    ('w = set_default_positive_weight(new_weighting(3), 4611686018427387904)', ScriptTypeError),
])
def test_runtime_errors_name_the_line(text, error):
    with pytest.raises(error) as raised:
        run('# setup\n' + text)
    assert raised.value.line == 2


def test_weighting_must_cover_the_representation():
    with pytest.raises(ScriptTypeError, match='covers 3 variables'):
        run(LOAD + 'w = new_weighting(3)\nopt = optimize(rep, w, "min")')
    with pytest.raises(ScriptTypeError, match='direction'):
        run(LOAD + UNIT + 'opt = optimize(rep, w, "best")')


def test_weight_errors_become_script_errors():
    with pytest.raises(ScriptTypeError, match=r'set_weight\(\): Variable 9 outside 1\.\.3') as raised:
        run('w = new_weighting(3)\nw = set_weight(w, 9, 1, 0)')
    assert raised.value.line == 2
    assert isinstance(raised.value.__cause__, WeightingError)


@pytest.mark.parametrize('text, line, column', [
    ('print (', 1, None),
    ('x = = 1', 1, 5),
    ('ok = new_weighting(2)\n1x', 2, 1),
    ('x = "open', 1, 5),
    ('print = 3', 1, 7),
])
def test_syntax_errors(text, line, column):
    with pytest.raises(ScriptSyntaxError) as error:
        parse_script(text)
    assert error.value.line == line
    assert error.value.column == column
    assert isinstance(error.value, ScriptError)


def test_comments_and_blank_lines_are_skipped():
    script = parse_script('# only a comment\n\n   \nw = new_weighting(2)  # trailing\n')
    assert len(script) == 1 and script.statements[0].line == 4
