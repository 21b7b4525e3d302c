from collections import Counter
from typing import Dict, Iterable, List, Tuple

import numpy as np
from scipy.stats import chi2


class AverageMeter(object):
    """Computes and stores the average, maximum and current value"""

    def __init__(self):
        self.initialized = False
        self.val = None
        self.avg = None
        self.sum = None
        self.count = None
        self.max = None

    def initialize(self, val, weight):
        self.val = val
        self.avg = val
        self.sum = val * weight
        self.count = weight
        self.max = val
        self.initialized = True

    def update(self, val, weight=1):
        if not self.initialized:
            self.initialize(val, weight)
        else:
            self.add(val, weight)

    def add(self, val, weight):
        self.val = val
        self.sum += val * weight
        self.count += weight
        self.avg = self.sum / self.count
        self.max = max(self.max, val)

    def value(self):
        return self.val

    def average(self):
        return self.avg


class SuccessMeter(object):
    """Success rate over attempts; times of successful runs only.

    >>> m = SuccessMeter()
    >>> m.update(True, 0.5); m.update(False, 9.0); m.update(True, 1.5)
    >>> m.success_rate(), m.times.average(), m.times.max
    (0.6666666666666666, 1.0, 1.5)
    """

    def __init__(self):
        self.attempts = 0
        self.successes = 0
        self.mismatches = 0
        self.times = AverageMeter()

    def update(self, success: bool, seconds: float):
        self.attempts += 1
        if success:
            self.successes += 1
            self.times.update(seconds)

    def success_rate(self) -> float:
        return self.successes / self.attempts if self.attempts else 0.0


def create_report_meters(keys: Iterable[Tuple]) -> Dict[Tuple, SuccessMeter]:
    return {key: SuccessMeter() for key in keys}


def report_rows(meters: Dict[Tuple, SuccessMeter]) -> List[dict]:
    """One row per (operation, approach, l); time columns are None when nothing succeeded."""
    rows = []
    for (operation, approach, l), meter in sorted(meters.items(), key=lambda item: tuple(map(str, item[0]))):
        rows.append({'operation': operation, 'approach': approach, 'l': l,
                     'attempts': meter.attempts,
                     'success_rate': meter.success_rate(),
                     'mean_time_s': meter.times.average() if meter.successes else None,
                     'max_time_s': meter.times.max if meter.successes else None,
                     'mismatches': meter.mismatches})
    return rows


def model_frequencies(samples, models) -> np.ndarray:
    """Observed count of every model (in the given order) among the samples."""
    counts = Counter(samples)
    unknown = set(counts) - set(models)
    assert not unknown, f"{len(unknown)} sampled assignments are not models"
    return np.array([counts[m] for m in models], dtype=np.int64)


def chi_square_uniformity(observed: np.ndarray, significance: float = 0.001) -> Tuple[float, float]:
    """Pearson statistic of observed counts against the uniform distribution, and the critical value
    at the given significance for len(observed) - 1 degrees of freedom.

    >>> stat, critical = chi_square_uniformity(np.array([10, 10, 10]))
    >>> stat, round(critical, 2)
    (0.0, 13.82)
    """
    observed = np.asarray(observed, dtype=np.float64)
    expected = observed.sum() / len(observed)
    statistic = float(((observed - expected) ** 2 / expected).sum())
    return statistic, float(chi2.ppf(1.0 - significance, len(observed) - 1))


def max_frequency_deviation(observed: np.ndarray) -> float:
    """Largest absolute gap between a model's relative frequency and 1 / number of models."""
    observed = np.asarray(observed, dtype=np.float64)
    return float(np.abs(observed / observed.sum() - 1.0 / len(observed)).max())
