import argparse
import csv
import logging
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from cnf.weighting import random_weighting
from ddnnf.compiler import compile as compile_circuit
from ddnnf.formats import parse_canonical, write_canonical
from ddnnf.queries import count_models, enumerate_models, is_consistent, optimize
from ddnnf.sampling import sample_uniform
from ddnnf.topk import CONFIGURATIONS, VALUES, topk_transform
from solvers import new_solver
from solvers.direct import enumerate_direct, optimize_direct, topk_configs_direct, topk_values_direct
from utils.logger import InformationLogger, end_tracking, start_tracking, tsv_line
from utils.metrics import create_report_meters, report_rows
from utils.readers import read_formula, read_parameters
from utils.utils import Deadline, DeadlineExceeded, get_key_def, resolve_seed
from utils.verifications import APPROACHES, SUPPORTED, validate_bench_config

log = logging.getLogger(__name__)

RUN_COLUMNS = ('instance', 'operation', 'approach', 'l', 'status', 'seconds')
REPORT_COLUMNS = ('operation', 'approach', 'l', 'attempts', 'success_rate', 'mean_time_s', 'max_time_s',
                  'mismatches')
# operations whose outcome depends on the value functions, run once per weight bound l
WEIGHTED = ('opt', 'topk-values', 'topk-configs')
CORPUS_SUFFIXES = ('.fm', '.cnf', '.dimacs')


@dataclass
class BenchConfig:
    corpus_dir: Path
    operations: Tuple[str, ...] = ('compile', 'count', 'sat', 'enum', 'sample', 'opt', 'topk-values',
                                   'topk-configs')
    approaches: Tuple[str, ...] = APPROACHES
    k: int = 10
    weight_bounds: Tuple[int, ...] = (1, 100, 10000, 1000000)
    functions_per_instance: int = 5
    timeout: float = 10.0
    seed: int = 0
    direction: str = 'min'
    out_csv: Optional[Path] = None
    num_workers: int = 1
    mlflow_uri: Optional[str] = None
    node_limit: Optional[int] = None
    heuristic: str = 'occurrence'
    cache: bool = True

    @classmethod
    def from_params(cls, params, seed=None):
        bench = params['bench']
        queries = params.get('queries')
        compile_params = params.get('compile')
        default = cls(corpus_dir=Path('.'))
        out_csv = get_key_def('out_csv', bench, None)
        return cls(corpus_dir=Path(get_key_def('corpus_dir', bench, 'data/corpus', expected_type=str)),
                   operations=tuple(get_key_def('operations', bench, default.operations)),
                   approaches=tuple(get_key_def('approaches', bench, default.approaches)),
                   k=get_key_def('k', bench, get_key_def('k', queries, default.k), expected_type=int),
                   weight_bounds=tuple(get_key_def('weight_bounds', bench, default.weight_bounds)),
                   functions_per_instance=get_key_def('functions_per_instance', bench, 5, expected_type=int),
                   timeout=float(get_key_def('timeout', bench, default.timeout)),
                   seed=resolve_seed(seed, params),
                   direction=get_key_def('direction', queries, 'min', expected_type=str),
                   out_csv=Path(out_csv) if out_csv else None,
                   num_workers=get_key_def('num_workers', bench, 1, expected_type=int),
                   mlflow_uri=get_key_def('mlflow_uri', params.get('global'), None),
                   node_limit=get_key_def('node_limit', compile_params, None, expected_type=int),
                   heuristic=get_key_def('heuristic', compile_params, 'occurrence', expected_type=str),
                   cache=get_key_def('cache', compile_params, True, expected_type=bool))


@dataclass
class BenchReport:
    runs: List[dict] = field(default_factory=list)
    rows: List[dict] = field(default_factory=list)

    def row(self, operation, approach, l=None) -> dict:
        for row in self.rows:
            if (row['operation'], row['approach'], row['l']) == (operation, approach, l):
                return row
        raise KeyError(f"No report row for ({operation}, {approach}, {l})")


def corpus_files(corpus_dir) -> List[Path]:
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise FileNotFoundError(f"Could not locate corpus directory '{corpus_dir}'")
    files = sorted(p for p in corpus_dir.iterdir() if p.suffix.lower() in CORPUS_SUFFIXES)
    if not files:
        raise ValueError(f"Corpus '{corpus_dir}' holds no {CORPUS_SUFFIXES} instance")
    return files


def value_functions(cfg: BenchConfig, index: int, l: int, num_vars: int):
    """The functions_per_instance weightings of instance number index at bound l, identical for both approaches."""
    rng = np.random.default_rng([cfg.seed, index, l])
    return [random_weighting(num_vars, l, rng) for _ in range(cfg.functions_per_instance)]


def _direct(operation, f, weightings, cfg: BenchConfig, deadline: Deadline):
    if operation == 'sat':
        return new_solver(f, deadline=deadline).solve() is not None
    if operation == 'enum':
        return len(enumerate_direct(f, cfg.k, deadline=deadline))
    if operation == 'opt':
        results = [optimize_direct(f, w, cfg.direction, deadline=deadline) for w in weightings]
        return [None if r is None else r.value for r in results]
    if operation == 'topk-values':
        return [topk_values_direct(f, w, cfg.k, cfg.direction, deadline=deadline) for w in weightings]
    if operation == 'topk-configs':
        return [[r.value for r in topk_configs_direct(f, w, cfg.k, cfg.direction, deadline=deadline)]
                for w in weightings]
    raise ValueError(f"Operation '{operation}' has no direct implementation")


def _compiled(operation, c, text, weightings, cfg: BenchConfig, index: int, deadline: Deadline):
    if operation == 'load':
        return len(parse_canonical(text).nodes)
    if operation == 'count':
        return count_models(c)
    if operation == 'sat':
        return is_consistent(c)
    if operation == 'enum':
        return len(list(enumerate_models(c, cfg.k)))
    if operation == 'sample':
        if not is_consistent(c):
            return 0
        return len(sample_uniform(c, cfg.k, seed=cfg.seed + index, deadline=deadline))
    if operation == 'opt':
        results = [optimize(c, w, cfg.direction, deadline=deadline) for w in weightings]
        return [None if r is None else r.value for r in results]
    if operation == 'topk-values':
        return [topk_transform(c, w, cfg.k, cfg.direction, VALUES, deadline).values() for w in weightings]
    if operation == 'topk-configs':
        return [topk_transform(c, w, cfg.k, cfg.direction, CONFIGURATIONS, deadline).values() for w in weightings]
    raise ValueError(f"Operation '{operation}' has no compiled implementation")


def _timed(fn, cfg: BenchConfig):
    """(status, seconds, result) of fn(deadline) under the configured timeout."""
    deadline = Deadline(cfg.timeout)
    try:
        result = fn(deadline)
        status = 'ok'
    except DeadlineExceeded:
        result, status = None, 'timeout'
    except (RuntimeError, ValueError, RecursionError) as e:
        log.debug('Run failed: %s', e)
        result, status = None, 'error'
    seconds = deadline.elapsed()
    if status == 'ok' and seconds > cfg.timeout:
        status = 'timeout'
    return status, seconds, result


def bench_instance(path: Path, index: int, cfg: BenchConfig) -> List[dict]:
    """Every configured (operation, approach, l) run on one instance. Unreadable instances yield no run."""
    try:
        f, _ = read_formula(path)
    except (OSError, ValueError) as e:
        warnings.warn(f"Skipping unreadable instance '{path}': {e}")
        return []
    runs = []

    def record(operation, approach, l, status, seconds, result=None):
        runs.append({'instance': path.name, 'operation': operation, 'approach': approach, 'l': l,
                     'status': status, 'seconds': seconds, 'result': result})

    circuit, text = None, None
    if 'compiled' in cfg.approaches:
        status, seconds, circuit = _timed(
            lambda d: compile_circuit(f, cfg.node_limit, cfg.cache, cfg.heuristic, deadline=d), cfg)
        if 'compile' in cfg.operations:
            record('compile', 'compiled', None, status, seconds)
        if circuit is not None:
            text = write_canonical(circuit)

    for operation in cfg.operations:
        if operation == 'compile':
            continue
        bounds = cfg.weight_bounds if operation in WEIGHTED else (None,)
        for l in bounds:
            weightings = value_functions(cfg, index, l, f.num_vars) if l is not None else []
            for approach in cfg.approaches:
                if operation not in SUPPORTED[approach]:
                    continue
                if approach == 'direct':
                    status, seconds, result = _timed(lambda d: _direct(operation, f, weightings, cfg, d), cfg)
                elif circuit is None:
                    status, seconds, result = 'error', 0.0, None
                else:
                    status, seconds, result = _timed(
                        lambda d: _compiled(operation, circuit, text, weightings, cfg, index, d), cfg)
                record(operation, approach, l, status, seconds, result)
    return runs


def _cross_check(runs: List[dict], meters):
    """Direct and compiled results of the same run must agree; disagreements are counted per row."""
    by_key: Dict[tuple, dict] = {}
    for run in runs:
        if run['status'] == 'ok' and run['operation'] not in ('load', 'compile', 'sample'):
            by_key[(run['instance'], run['operation'], run['l'], run['approach'])] = run
    for (instance, operation, l, approach), run in by_key.items():
        if approach != 'direct':
            continue
        other = by_key.get((instance, operation, l, 'compiled'))
        if other is not None and other['result'] != run['result']:
            warnings.warn(f"{instance}: {operation} (l={l}) differs between approaches: "
                          f"{run['result']} vs {other['result']}")
            meters[(operation, 'direct', l)].mismatches += 1
            meters[(operation, 'compiled', l)].mismatches += 1


def write_csv(path: Path, columns, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as out:
        writer = csv.writer(out)
        writer.writerow(columns)
        for row in rows:
            writer.writerow(['' if row[c] is None else (f"{row[c]:.6f}" if isinstance(row[c], float) else row[c])
                             for c in columns])


def run_bench(cfg: BenchConfig) -> BenchReport:
    """Benchmark every instance of the corpus and aggregate success rate, mean and max time
    (successful runs only) per operation, approach and weight bound."""
    validate_bench_config(cfg)
    files = corpus_files(cfg.corpus_dir)
    runs = []
    if cfg.num_workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.num_workers) as pool:
            futures = [pool.submit(bench_instance, path, index, cfg) for index, path in enumerate(files)]
            for future in tqdm(futures, desc='Benchmarking instances'):
                runs.extend(future.result())
    else:
        for index, path in enumerate(tqdm(files, desc='Benchmarking instances')):
            instance_runs = bench_instance(path, index, cfg)
            failures = sum(1 for run in instance_runs if run['status'] != 'ok')
            if failures:
                tqdm.write(f"{path.name}: {failures} of {len(instance_runs)} runs failed or timed out")
            runs.extend(instance_runs)

    meters = create_report_meters(sorted({(r['operation'], r['approach'], r['l']) for r in runs},
                                         key=lambda key: tuple(map(str, key))))
    for run in runs:
        meters[(run['operation'], run['approach'], run['l'])].update(run['status'] == 'ok', run['seconds'])
    _cross_check(runs, meters)
    report = BenchReport(runs, report_rows(meters))

    if cfg.out_csv is not None:
        write_csv(cfg.out_csv, RUN_COLUMNS, runs)
        write_csv(cfg.out_csv.with_name(cfg.out_csv.stem + '_report.csv'), REPORT_COLUMNS, report.rows)
        log.info('Wrote %d runs to %s', len(runs), cfg.out_csv)
    return report


def set_debug_mode(params) -> bool:
    """global.debug_mode turns on DEBUG logging, including one line per failed or timed-out run."""
    debug = get_key_def('debug_mode', params.get('global'), False, expected_type=bool)
    if debug:
        warnings.warn('Debug mode activated. Per-run debug logging may slow the benchmark down.')
        logging.getLogger().setLevel(logging.DEBUG)
    return debug


def main(params, seed=None):
    """
    Function to benchmark both reasoning approaches on a corpus of feature models.
    :param params: (dict) Parameters found in the yaml config file.
    """
    set_debug_mode(params)
    since = time.time()
    cfg = BenchConfig.from_params(params, seed)
    tracking = start_tracking(cfg.mlflow_uri, 'fm_benchmark', {
        'corpus_dir': cfg.corpus_dir, 'operations': ','.join(cfg.operations), 'k': cfg.k,
        'timeout': cfg.timeout, 'seed': cfg.seed, 'functions_per_instance': cfg.functions_per_instance})
    report = run_bench(cfg)
    if tracking:
        InformationLogger('bench').add_values(report.rows)
        end_tracking()
    for row in report.rows:
        print(tsv_line(*(row[c] for c in REPORT_COLUMNS)), end='')
    time_elapsed = time.time() - since
    print('Benchmark completed in {:.0f}m {:.0f}s'.format(time_elapsed // 60, time_elapsed % 60))
    return report


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description='Benchmark direct and compiled feature-model reasoning')
    parser.add_argument('param_file', metavar='file',
                        help='Path to parameters stored in yaml')
    args = parser.parse_args()
    params = read_parameters(args.param_file)

    main(params)
