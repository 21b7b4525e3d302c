import pytest

from fm_reason import EXIT_ANALYSIS, EXIT_INPUT, EXIT_OK, EXIT_USAGE, cli_main

from conftest import DATA, MOBILE_MODELS

MOBILE_CNF = str(DATA / 'mobile_phone.cnf')
MOBILE_FM = str(DATA / 'mobile_phone.fm')


def run(capsys, *argv):
    code = cli_main(list(argv))
    return code, capsys.readouterr().out


@pytest.mark.parametrize('path', [MOBILE_CNF, MOBILE_FM])
def test_count(capsys, path):
    assert run(capsys, 'count', '--input', path, '--mode', 'compiled') == (EXIT_OK, f"{MOBILE_MODELS}\n")
    assert run(capsys, 'count', '-i', path) == (EXIT_OK, f"{MOBILE_MODELS}\n")


def test_unsat_is_an_answer(capsys):
    for mode in ('direct', 'compiled'):
        assert run(capsys, 'sat', '--input', str(DATA / 'unsat.cnf'), '--mode', mode) == (EXIT_OK, 'UNSAT\n')


@pytest.mark.parametrize('argv, code', [
    (['count', '--input', MOBILE_CNF, '--mode', 'direct'], EXIT_USAGE),
    (['sample', '--input', MOBILE_CNF, '--mode', 'direct'], EXIT_USAGE),
    (['enum', '--input', MOBILE_CNF, '--k', '0'], EXIT_USAGE),
    (['count', '--input', MOBILE_CNF, '--frobnicate'], EXIT_USAGE),
    (['explode', '--input', MOBILE_CNF], EXIT_USAGE),
    (['count'], EXIT_USAGE),
    (['count', '--input', str(DATA / 'absent.cnf')], EXIT_INPUT),
    (['count', '--input', str(DATA / 'DATA_INFO.txt')], EXIT_INPUT),
    (['count', '--input', MOBILE_CNF, '--timeout', '0'], EXIT_ANALYSIS),
])
def test_exit_codes(capsys, argv, code):
    assert cli_main(argv) == code
    if code != EXIT_OK:
        assert capsys.readouterr().err


@pytest.mark.parametrize('command, k, expected', [
    ('topk-values', '3', ['4', '5', '6']),
    ('opt', None, None),
    ('enum', '3', None),
])
def test_modes_agree(capsys, command, k, expected):
    outputs = []
    for mode in ('direct', 'compiled'):
        argv = [command, '--input', MOBILE_FM, '--mode', mode] + (['--k', k] if k else [])
        code, out = run(capsys, *argv)
        assert code == EXIT_OK
        outputs.append(out.splitlines())
    if expected is not None:
        assert outputs == [expected, expected]
    if command == 'opt':
        assert outputs[0][0] == outputs[1][0] == '4'
    if command == 'enum':
        assert len(outputs[0]) == len(outputs[1]) == 3


def test_weights_file_gives_the_same_optimum(capsys):
    weights = str(DATA / 'mobile_phone.w')
    values = {run(capsys, 'opt', '-i', MOBILE_CNF, '--weights', weights, '--dir', 'max', '--mode', mode)[1]
              .splitlines()[0] for mode in ('direct', 'compiled')}
    assert len(values) == 1


def test_top_configs_and_samples(capsys):
    code, out = run(capsys, 'topk-configs', '-i', MOBILE_FM, '--k', '2', '--mode', 'compiled')
    assert code == EXIT_OK and [line.split('\t')[0] for line in out.splitlines()] == ['4', '4']
    first = run(capsys, 'sample', '-i', MOBILE_FM, '--k', '5', '--seed', '1')
    assert first[0] == EXIT_OK and len(first[1].splitlines()) == 5
    assert run(capsys, 'sample', '-i', MOBILE_FM, '--k', '5', '--seed', '1') == first


@pytest.mark.parametrize('suffix', ['.ddnnf', '.nnf'])
def test_compile_then_reason_on_the_circuit(capsys, tmp_path, suffix):
    circuit = str(tmp_path / f"mobile{suffix}")
    assert run(capsys, 'compile', '-i', MOBILE_FM, '--out', circuit) == (EXIT_OK, '')
    assert run(capsys, 'count', '-i', circuit) == (EXIT_OK, f"{MOBILE_MODELS}\n")
    assert run(capsys, 'validate', '-i', circuit) == (EXIT_OK, 'valid\n')
    assert run(capsys, 'sat', '-i', circuit, '--mode', 'direct')[0] == EXIT_USAGE


def test_validate_reports_violations(capsys, tmp_path):
    broken = tmp_path / 'broken.ddnnf'
    broken.write_text("ddnnf 3 2 1\nL 1\nL -1\nA 2 0 1\n")
    code, out = run(capsys, 'validate', '-i', str(broken))
    assert code == EXIT_ANALYSIS and out.startswith('node 2: decomposability')


def test_encode_round_trip(capsys, tmp_path):
    target = tmp_path / 'mobile.cnf'
    assert run(capsys, 'encode', '-i', MOBILE_FM, '--out', str(target)) == (EXIT_OK, '')
    assert 'MobilePhone' in target.read_text()
    assert run(capsys, 'count', '-i', str(target)) == (EXIT_OK, f"{MOBILE_MODELS}\n")


def test_run_script(capsys):
    code, out = run(capsys, 'run', '-i', str(DATA / 'scripts' / 'min_cost.win'))
    assert code == EXIT_OK and out.splitlines()[0] == '4'
    broken = run(capsys, 'run', '-i', str(DATA / 'scripts' / 'absent.win'))
    assert broken[0] == EXIT_INPUT
