import csv
import logging
import shutil
from pathlib import Path

import pytest

from benchmark import (REPORT_COLUMNS, RUN_COLUMNS, BenchConfig, corpus_files, run_bench, set_debug_mode,
                       value_functions)
from make_corpus import make_corpus
from utils.readers import read_parameters
from utils.verifications import BENCH_OPERATIONS, SUPPORTED

from conftest import DATA

CI_CONFIG = Path(__file__).resolve().parent.parent / 'conf' / 'travis_CI' / 'config_ci_bench.yaml'


@pytest.fixture
def corpus(tmp_path):
    corpus_dir = tmp_path / 'corpus'
    make_corpus(corpus_dir, count=2, min_features=8, max_features=12, seed=1)
    shutil.copy(DATA / 'mobile_phone.fm', corpus_dir)
    return corpus_dir


def small_config(corpus_dir, **overrides):
    options = dict(operations=BENCH_OPERATIONS, k=3, weight_bounds=(1, 1000000), functions_per_instance=2,
                   timeout=60.0, seed=7)
    options.update(overrides)
    return BenchConfig(corpus_dir=corpus_dir, **options)


def test_make_corpus_is_reproducible(tmp_path):
    first = make_corpus(tmp_path / 'a', count=3, min_features=5, max_features=9, seed=4)
    second = make_corpus(tmp_path / 'b', count=3, min_features=5, max_features=9, seed=4)
    assert [p.name for p in first] == ['generated_00.fm', 'generated_01.fm', 'generated_02.fm']
    assert [p.read_text() for p in first] == [p.read_text() for p in second]


def test_bench_succeeds_and_approaches_agree(corpus, tmp_path):
    out_csv = tmp_path / 'results' / 'runs.csv'
    report = run_bench(small_config(corpus, out_csv=out_csv))
    instances = len(corpus_files(corpus))
    assert instances == 3
    for row in report.rows:
        assert row['success_rate'] == 1.0, row
        assert row['mismatches'] == 0, row
        assert row['mean_time_s'] <= row['max_time_s']
    assert report.row('compile', 'compiled')['attempts'] == instances
    assert report.row('opt', 'direct', 1000000)['attempts'] == instances
    assert {(row['operation'], row['approach']) for row in report.rows} == {
        (op, approach) for approach, ops in SUPPORTED.items() for op in ops}

    with open(out_csv, newline='') as f:
        rows = list(csv.reader(f))
    assert tuple(rows[0]) == RUN_COLUMNS and len(rows) == len(report.runs) + 1
    with open(tmp_path / 'results' / 'runs_report.csv', newline='') as f:
        assert tuple(next(csv.reader(f))) == REPORT_COLUMNS


def test_bench_is_reproducible(corpus):
    cfg = small_config(corpus, operations=('count', 'sample', 'opt', 'topk-values'))
    first, second = run_bench(cfg), run_bench(cfg)
    assert [run['result'] for run in first.runs] == [run['result'] for run in second.runs]
    assert all(a == b for a, b in zip(value_functions(cfg, 0, 100, 10), value_functions(cfg, 0, 100, 10)))


def test_tiny_timeout_counts_as_failure(corpus):
    report = run_bench(small_config(corpus, operations=('compile', 'sat', 'opt'), timeout=1e-6))
    for row in report.rows:
        assert row['success_rate'] == 0.0
        assert row['mean_time_s'] is None and row['max_time_s'] is None


def test_bad_config_is_rejected(corpus, tmp_path):
    with pytest.raises(AssertionError):
        run_bench(small_config(corpus, operations=('count', 'prove')))
    with pytest.raises(AssertionError):
        run_bench(small_config(corpus, weight_bounds=(0,)))
    with pytest.raises(FileNotFoundError):
        run_bench(small_config(tmp_path / 'missing'))


def test_config_from_yaml():
    cfg = BenchConfig.from_params(read_parameters(CI_CONFIG))
    assert cfg.seed == 7 and cfg.k == 3
    assert cfg.weight_bounds == (1, 1000000) and cfg.functions_per_instance == 2
    assert 'load' in cfg.operations and cfg.out_csv is None
    assert BenchConfig.from_params(read_parameters(CI_CONFIG), seed=11).seed == 11


@pytest.mark.slow
def test_bench_at_full_settings(tmp_path):
    corpus_dir = tmp_path / 'corpus'
    make_corpus(corpus_dir, count=4, min_features=10, max_features=20, seed=3)
    cfg = BenchConfig(corpus_dir=corpus_dir, operations=BENCH_OPERATIONS, k=10, weight_bounds=(1000000,),
                      functions_per_instance=5, timeout=10.0, seed=0)
    report = run_bench(cfg)
    instances = len(corpus_files(corpus_dir))
    for row in report.rows:
        assert row['attempts'] == instances, row
        assert row['success_rate'] == 1.0 and row['mismatches'] == 0, row
    assert report.row('topk-values', 'direct', 1000000)['max_time_s'] < cfg.timeout


def test_debug_mode_raises_the_log_level(monkeypatch):
    root = logging.getLogger()
    monkeypatch.setattr(root, 'level', logging.WARNING)
    assert set_debug_mode({'global': {'debug_mode': False}}) is False
    assert root.level == logging.WARNING
    with pytest.warns(UserWarning, match='Debug mode activated'):
        assert set_debug_mode(read_parameters(CI_CONFIG)) is True
    assert root.level == logging.DEBUG
