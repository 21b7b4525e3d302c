import os
import time
import warnings
from pathlib import Path


SEED_ENV_VAR = 'FMREASON_SEED'


class DeadlineExceeded(TimeoutError):
    """Raised by Deadline.check() once the time budget of an analysis is spent."""


class Deadline(object):
    """Cooperative time budget polled inside long loops (solver search, compiler recursion, query passes).
    A deadline built with seconds=None never expires.

    >>> Deadline(None).expired()
    False
    >>> Deadline(0).expired()
    True
    """
    __slots__ = 'seconds', 'start', 'limit'

    def __init__(self, seconds=None):
        self.seconds = seconds
        self.start = time.perf_counter()
        self.limit = None if seconds is None else self.start + seconds

    def expired(self):
        return self.limit is not None and time.perf_counter() >= self.limit

    def check(self):
        if self.expired():
            raise DeadlineExceeded(f"Time budget of {self.seconds}s exceeded")

    def elapsed(self):
        return time.perf_counter() - self.start


NO_DEADLINE = Deadline(None)


def get_key_def(key, config, default=None, msg=None, delete=False, expected_type=None):
    """Returns a value given a dictionary key, or the default value if it cannot be found.
    :param key: key in dictionary (e.g. generated from .yaml), or list of candidate keys (first found wins)
    :param config: (dict) dictionary containing keys corresponding to parameters used in script
    :param default: default value assigned if no value found with provided key
    :param msg: message returned with AssertionError if a list of less than two keys is given
    :param delete: (bool) if True, deletes parameter, e.g. for one-time use.
    :param expected_type: optional type (or tuple of types) the value must have
    :return: value found in config, or default

    >>> get_key_def('k', {'k': 3}, 10)
    3
    >>> get_key_def('k', {'k': None}, 10)
    10
    >>> get_key_def(['timeout', 'time_limit'], {'time_limit': 5})
    5
    """
    if not config:
        return default
    if isinstance(key, list):
        if len(key) <= 1:
            raise AssertionError(msg if msg is not None else "Must provide at least two valid keys to test")
        for k in key:
            if k in config and config[k] is not None:
                return get_key_def(k, config, default, delete=delete, expected_type=expected_type)
        return default
    if key not in config or config[key] is None:
        return default
    val = config[key] if config[key] != 'None' else None
    if expected_type and val is not None:
        assert isinstance(val, expected_type), f"{key}: {val} is of type {type(val)}, expected {expected_type}"
    if delete:
        del config[key]
    return val


def resolve_seed(seed=None, params=None):
    """Seed lookup order: explicit value, 'seed' in the global section of params, FMREASON_SEED, then 0.

    >>> resolve_seed(7)
    7
    >>> resolve_seed(None, {'global': {'seed': 3}})
    3
    """
    if seed is not None:
        return int(seed)
    if params is not None:
        from_params = get_key_def('seed', params.get('global'), None)
        if from_params is not None:
            return int(from_params)
    env = os.environ.get(SEED_ENV_VAR)
    if env:
        try:
            return int(env)
        except ValueError:
            warnings.warn(f"{SEED_ENV_VAR}={env!r} is not an integer. Falling back to seed 0.")
    return 0


def instance_kind(path):
    """Classify an input file by extension: 'fm', 'cnf', 'c2d', 'ddnnf', 'weights' or 'script'."""
    suffix = Path(path).suffix.lower()
    kinds = {'.fm': 'fm', '.cnf': 'cnf', '.dimacs': 'cnf', '.nnf': 'c2d', '.ddnnf': 'ddnnf',
             '.w': 'weights', '.weights': 'weights', '.win': 'script'}
    if suffix not in kinds:
        raise ValueError(f"Cannot tell the input kind of '{path}'. Expected one of {sorted(kinds)}")
    return kinds[suffix]
