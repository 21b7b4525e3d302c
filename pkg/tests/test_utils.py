import sys
import types

import numpy as np
import pytest

from utils.logger import InformationLogger, start_tracking, tsv_line
from utils.metrics import AverageMeter, SuccessMeter, create_report_meters, model_frequencies, report_rows
from utils.readers import read_circuit, read_formula, read_text
from utils.utils import SEED_ENV_VAR, Deadline, get_key_def, instance_kind, resolve_seed
from utils.verifications import validate_input_file

from conftest import DATA


def test_get_key_def():
    config = {'k': 3, 'timeout': 'None', 'nested': None}
    assert get_key_def('k', config, 10, expected_type=int) == 3
    assert get_key_def('timeout', config, 10) is None
    assert get_key_def('nested', config, 5) == 5
    assert get_key_def('missing', None, 'default') == 'default'
    with pytest.raises(AssertionError):
        get_key_def('k', config, expected_type=str)
    with pytest.raises(AssertionError):
        get_key_def(['k'], config)
    get_key_def('k', config, delete=True)
    assert 'k' not in config


def test_resolve_seed(monkeypatch):
    monkeypatch.delenv(SEED_ENV_VAR, raising=False)
    assert resolve_seed() == 0
    monkeypatch.setenv(SEED_ENV_VAR, '42')
    assert resolve_seed() == 42
    assert resolve_seed(None, {'global': {'seed': 3}}) == 3
    assert resolve_seed(5, {'global': {'seed': 3}}) == 5
    monkeypatch.setenv(SEED_ENV_VAR, 'many')
    with pytest.warns(UserWarning, match='not an integer'):
        assert resolve_seed() == 0


@pytest.mark.parametrize('name, kind', [('a.fm', 'fm'), ('a.CNF', 'cnf'), ('a.dimacs', 'cnf'), ('a.nnf', 'c2d'),
                                        ('a.ddnnf', 'ddnnf'), ('a.w', 'weights'), ('a.win', 'script')])
def test_instance_kind(name, kind):
    assert instance_kind(name) == kind


def test_input_checks(tmp_path):
    assert validate_input_file(DATA / 'mobile_phone.fm', 'fm', 'cnf') == 'fm'
    with pytest.raises(ValueError):
        validate_input_file(DATA / 'mobile_phone.fm', 'ddnnf')
    with pytest.raises(ValueError):
        instance_kind('notes.txt')
    with pytest.raises(FileNotFoundError, match='absent.cnf'):
        read_text(tmp_path / 'absent.cnf')


def test_deadline_elapsed_grows():
    d = Deadline(3600)
    assert not d.expired() and d.elapsed() >= 0
    d.check()


def test_meters():
    meter = AverageMeter()
    for value in (2.0, 4.0, 3.0):
        meter.update(value)
    assert meter.average() == 3.0 and meter.max == 4.0 and meter.value() == 3.0
    failed = SuccessMeter()
    failed.update(False, 1.0)
    assert failed.success_rate() == 0.0 and not failed.times.initialized


def test_report_rows():
    meters = create_report_meters([('opt', 'direct', 100), ('count', 'compiled', None)])
    meters[('opt', 'direct', 100)].update(True, 0.25)
    meters[('opt', 'direct', 100)].update(False, 10.0)
    meters[('count', 'compiled', None)].update(False, 10.0)
    rows = report_rows(meters)
    assert [row['operation'] for row in rows] == ['count', 'opt']
    assert rows[0]['mean_time_s'] is None and rows[0]['success_rate'] == 0.0
    assert rows[1]['success_rate'] == 0.5 and rows[1]['max_time_s'] == 0.25


def test_model_frequencies():
    models = [(1, 2), (1, -2)]
    observed = model_frequencies([(1, 2), (1, 2), (1, -2)], models)
    assert isinstance(observed, np.ndarray) and observed.tolist() == [2, 1]
    with pytest.raises(AssertionError):
        model_frequencies([(-1, 2)], models)


def test_tracking_helpers(monkeypatch):
    assert tsv_line('count', 0.5) == 'count\t0.5\n'
    assert start_tracking(None, 'bench', {}) is False
    logged = []
    fake = types.ModuleType('mlflow')
    fake.log_metric = lambda key, value, step: logged.append((key, value, step))
    monkeypatch.setitem(sys.modules, 'mlflow', fake)
    rows = [{'operation': 'opt', 'approach': 'direct', 'l': 100, 'success_rate': 1.0, 'mean_time_s': 0.1,
             'max_time_s': 0.2},
            {'operation': 'sample', 'approach': 'compiled', 'l': None, 'success_rate': 0.0, 'mean_time_s': None,
             'max_time_s': None}]
    InformationLogger('bench').add_values(rows, ignore=['sample'])
    assert logged == [('bench_opt_direct_success_rate', 1.0, 100), ('bench_opt_direct_mean_time_s', 0.1, 100),
                      ('bench_opt_direct_max_time_s', 0.2, 100)]


def test_readers_check_the_file_kind():
    with pytest.raises(ValueError, match='expected one of'):
        read_formula(DATA / 'mobile_phone.w')
    with pytest.raises(ValueError, match='expected one of'):
        read_circuit(DATA / 'mobile_phone.fm')
    with pytest.raises(FileNotFoundError, match='absent.ddnnf'):
        read_circuit(DATA / 'absent.ddnnf')
