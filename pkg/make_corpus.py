import argparse
import logging
import warnings
from pathlib import Path
from typing import List

import numpy as np
from tqdm import tqdm

from featuremodel.encoding import encode_fm
from featuremodel.generator import random_feature_model
from featuremodel.parser import write_fm
from solvers import new_solver
from utils.readers import read_parameters
from utils.utils import get_key_def, resolve_seed

log = logging.getLogger(__name__)


def make_corpus(out_dir, count: int = 20, min_features: int = 10, max_features: int = 60, seed: int = 0,
                prefix: str = 'generated') -> List[Path]:
    """
    Write count satisfiable random feature models to out_dir as <prefix>_NN.fm.
    :param out_dir: destination directory, created when missing
    :param count: number of models to write
    :param min_features: smallest model size
    :param max_features: largest model size
    :param seed: the same seed always gives the same corpus
    :return: written paths
    """
    assert 1 <= min_features <= max_features, f"Bad feature range [{min_features}, {max_features}]"
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    written = []
    attempts = 0
    with tqdm(total=count, desc='Generating feature models') as progress:
        while len(written) < count and attempts < 20 * count:
            attempts += 1
            num_features = int(rng.integers(min_features, max_features + 1))
            num_constraints = int(rng.integers(0, num_features // 5 + 1))
            fm = random_feature_model(rng, num_features, num_constraints)
            formula, _ = encode_fm(fm)
            if new_solver(formula).solve() is None:
                log.debug('Dropping an unsatisfiable model of %d features', num_features)
                continue
            path = out_dir / f"{prefix}_{len(written):02d}.fm"
            path.write_text(write_fm(fm), encoding='utf-8')
            written.append(path)
            progress.update(1)
    if len(written) < count:
        warnings.warn(f"Only {len(written)} of {count} generated models were satisfiable")
    return written


def main(params, seed=None):
    """
    Generate the benchmark mini-corpus described by the bench section of a yaml file.
    :param params: (dict) Parameters found in the yaml config file.
    """
    bench = params['bench']
    sizes = get_key_def('generated_features', bench, [10, 60])
    paths = make_corpus(get_key_def('corpus_dir', bench, 'data/corpus', expected_type=str),
                        count=get_key_def('generated_instances', bench, 20, expected_type=int),
                        min_features=int(sizes[0]), max_features=int(sizes[1]),
                        seed=resolve_seed(seed, params))
    print(f"Wrote {len(paths)} feature models")
    return paths


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description='Generate a corpus of random satisfiable feature models')
    parser.add_argument('param_file', metavar='file',
                        help='Path to parameters stored in yaml')
    parser.add_argument('--seed', type=int, default=None, help='Overrides global.seed')
    args = parser.parse_args()
    params = read_parameters(args.param_file)

    main(params, args.seed)
