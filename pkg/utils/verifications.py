from pathlib import Path
from typing import Union

from utils.utils import instance_kind

BENCH_OPERATIONS = ('load', 'compile', 'count', 'sat', 'enum', 'sample', 'opt', 'topk-values', 'topk-configs')
APPROACHES = ('direct', 'compiled')
# operations each approach supports; the others are skipped for that approach
SUPPORTED = {
    'direct': ('sat', 'enum', 'opt', 'topk-values', 'topk-configs'),
    'compiled': ('load', 'compile', 'count', 'sat', 'enum', 'sample', 'opt', 'topk-values', 'topk-configs'),
}


def validate_bench_config(cfg):
    """
    Assert a BenchConfig is usable before spending time on the corpus.
    :param cfg: BenchConfig
    """
    assert cfg.k >= 1, f"k should be at least 1, got {cfg.k}"
    assert cfg.timeout > 0, f"timeout should be positive, got {cfg.timeout}"
    assert cfg.functions_per_instance >= 1, \
        f"functions_per_instance should be at least 1, got {cfg.functions_per_instance}"
    assert cfg.weight_bounds, "At least one weight bound l is needed"
    for l in cfg.weight_bounds:
        assert isinstance(l, int) and l >= 1, f"Weight bound l should be an integer >= 1, got {l}"
    unknown = [op for op in cfg.operations if op not in BENCH_OPERATIONS]
    assert not unknown, f"Unknown benchmark operations {unknown}. Expected a subset of {BENCH_OPERATIONS}"
    unknown = [a for a in cfg.approaches if a not in APPROACHES]
    assert not unknown, f"Unknown approaches {unknown}. Expected a subset of {APPROACHES}"
    assert cfg.num_workers >= 1, f"num_workers should be at least 1, got {cfg.num_workers}"


def validate_input_file(path: Union[str, Path], *kinds: str):
    """
    Check an input file exists and has one of the expected kinds (see utils.utils.instance_kind).
    :return: the kind of the file
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Could not locate input file '{path}'")
    kind = instance_kind(path)
    if kinds and kind not in kinds:
        raise ValueError(f"'{path}' is a {kind} file, expected one of {kinds}")
    return kind
