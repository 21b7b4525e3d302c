"""
Linear (dis)utility functions over literals.

A Weighting gives every literal x_i a weight pos[i] and every literal -x_i a weight
neg[i]; the value of a model is the sum of the weights of its literals.
"""
from typing import Iterable, List, Optional

import numpy as np

from cnf.formula import Model, var_of

INT64_MAX = 2 ** 63 - 1


class WeightingError(ValueError):
    """Invalid weighting: empty universe, negative weight, bad variable, or objective overflow."""


class Weighting(object):
    """Per-literal non-negative integer weights.

    Defaults apply to every variable without an explicit override, so changing a
    default after set_weight() leaves overridden variables untouched.

    >>> w = Weighting(3, 1, 0)
    >>> w.pos, w.neg
    ([1, 1, 1], [0, 0, 0])
    """

    def __init__(self, num_vars: int, default_pos: int = 0, default_neg: int = 0):
        if num_vars < 1:
            raise WeightingError(f"A weighting needs at least one variable, got {num_vars}")
        default_pos, default_neg = _check_weight(default_pos), _check_weight(default_neg)
        self.num_vars = num_vars
        self.default_pos = default_pos
        self.default_neg = default_neg
        self._pos = {}
        self._neg = {}
        # sum of max(pos, neg) over the variables with explicit weights
        self._explicit_max = 0
        self._check_overflow(self._objective_bound(default_pos, default_neg))

    @property
    def pos(self) -> List[int]:
        return [self._pos.get(v, self.default_pos) for v in range(1, self.num_vars + 1)]

    @property
    def neg(self) -> List[int]:
        return [self._neg.get(v, self.default_neg) for v in range(1, self.num_vars + 1)]

    def set_default_positive(self, value: int):
        value = _check_weight(value)
        self._check_overflow(self._objective_bound(value, self.default_neg))
        self.default_pos = value

    def set_default_negative(self, value: int):
        value = _check_weight(value)
        self._check_overflow(self._objective_bound(self.default_pos, value))
        self.default_neg = value

    def set_weight(self, var: int, pos: int, neg: int):
        if not 1 <= var <= self.num_vars:
            raise WeightingError(f"Variable {var} outside 1..{self.num_vars}")
        pos, neg = _check_weight(pos), _check_weight(neg)
        explicit = self._explicit_max + max(pos, neg)
        overridden = len(self._pos)
        if var in self._pos:
            explicit -= max(self._pos[var], self._neg[var])
        else:
            overridden += 1
        self._check_overflow(explicit + (self.num_vars - overridden) * max(self.default_pos, self.default_neg))
        self._pos[var] = pos
        self._neg[var] = neg
        self._explicit_max = explicit

    def literal_weight(self, lit: int) -> int:
        var = var_of(lit)
        if lit > 0:
            return self._pos.get(var, self.default_pos)
        return self._neg.get(var, self.default_neg)

    def value(self, model: Model) -> int:
        if len(model) != self.num_vars:
            raise WeightingError(f"Model over {len(model)} variables, weighting over {self.num_vars}")
        return sum(self.literal_weight(lit) for lit in model)

    def cheaper(self, var: int, direction: str) -> int:
        """The better literal of var for the direction; ties go to the negative literal."""
        p, n = self.literal_weight(var), self.literal_weight(-var)
        if direction == 'min':
            return var if p < n else -var
        return var if p > n else -var

    def max_literal_cost(self) -> int:
        return max(max(self.pos), max(self.neg))

    def max_objective(self) -> int:
        return self._objective_bound(self.default_pos, self.default_neg)

    def _objective_bound(self, default_pos: int, default_neg: int) -> int:
        """max_objective() if the defaults were default_pos and default_neg. Constant time."""
        return self._explicit_max + (self.num_vars - len(self._pos)) * max(default_pos, default_neg)

    def scaled(self, factor: int) -> 'Weighting':
        assert isinstance(factor, int) and factor > 0, f"scale factor must be a positive integer, got {factor}"
        out = Weighting(self.num_vars, self.default_pos * factor, self.default_neg * factor)
        for var in self._pos:
            out.set_weight(var, self._pos[var] * factor, self._neg[var] * factor)
        return out

    @staticmethod
    def _check_overflow(bound: int):
        if bound > INT64_MAX:
            raise WeightingError("Objective values could exceed the signed 64-bit range")

    def __eq__(self, other):
        return isinstance(other, Weighting) and self.num_vars == other.num_vars \
            and self.pos == other.pos and self.neg == other.neg

    def __repr__(self):
        return f"Weighting(n={self.num_vars}, pos={self.pos}, neg={self.neg})"


def _check_weight(value):
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise WeightingError(f"Weights must be integers, got {value!r}")
    if value < 0:
        raise WeightingError(f"Weights must be non-negative, got {value}")
    return int(value)


def new_weighting(n: int, default_pos: int = 0, default_neg: int = 0) -> Weighting:
    return Weighting(n, default_pos, default_neg)


def set_weight(w: Weighting, var: int, pos: int, neg: int) -> Weighting:
    w.set_weight(var, pos, neg)
    return w


def model_value(w: Weighting, m: Model) -> int:
    """Sum of pos[i] over true variables and neg[i] over false ones.

    >>> w = Weighting(2)
    >>> _ = set_weight(w, 1, 2, 0); _ = set_weight(w, 2, 0, 3)
    >>> model_value(w, (1, -2))
    5
    """
    return w.value(m)


def random_weighting(n: int, bound: int, rng: np.random.Generator) -> Weighting:
    """Every literal weight drawn uniformly in {0, ..., bound}."""
    if bound < 1:
        raise WeightingError(f"Weight bound must be at least 1, got {bound}")
    draws = rng.integers(0, bound + 1, size=(n, 2))
    w = Weighting(n)
    for var in range(1, n + 1):
        w.set_weight(var, int(draws[var - 1, 0]), int(draws[var - 1, 1]))
    return w


def parse_weights(text: str, num_vars: Optional[int] = None) -> Weighting:
    """Weights file: 'w <n> <default_pos> <default_neg>' then '<var> <pos> <neg>' lines. '#' and 'c' lines are comments."""
    w = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#') or line.startswith('c'):
            continue
        parts = line.split()
        try:
            values = [int(p) for p in parts[1:]] if parts[0] == 'w' else [int(p) for p in parts]
        except ValueError:
            raise WeightingError(f"line {line_no}: non-integer field in '{line}'")
        if parts[0] == 'w':
            if w is not None or len(values) != 3:
                raise WeightingError(f"line {line_no}: malformed header '{line}'")
            w = Weighting(*values)
            continue
        if w is None:
            raise WeightingError(f"line {line_no}: weight line before the 'w' header")
        if len(values) != 3:
            raise WeightingError(f"line {line_no}: expected '<var> <pos> <neg>', got '{line}'")
        w.set_weight(*values)
    if w is None:
        raise WeightingError("missing 'w <n> <default_pos> <default_neg>' header")
    if num_vars is not None and w.num_vars != num_vars:
        raise WeightingError(f"Weights cover {w.num_vars} variables, formula has {num_vars}")
    return w


def write_weights(w: Weighting, overrides_only: bool = True) -> str:
    lines = [f"w {w.num_vars} {w.default_pos} {w.default_neg}"]
    variables: Iterable[int] = sorted(w._pos) if overrides_only else range(1, w.num_vars + 1)
    for var in variables:
        lines.append(f"{var} {w.literal_weight(var)} {w.literal_weight(-var)}")
    return '\n'.join(lines) + '\n'
