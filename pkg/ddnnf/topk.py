"""
Top-k transformation: every node keeps the k best objective values (or value/configuration
pairs) reachable in its scope. Combining two lists keeps the k best entries of their sumset.
"""
import heapq
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

from cnf.formula import var_of
from cnf.weighting import Weighting, WeightingError
from ddnnf.circuit import AndNode, DdnnfCircuit, FalseNode, LiteralNode, TrueNode
from ddnnf.queries import branches, format_model
from utils.utils import NO_DEADLINE, Deadline

VALUES = 'values'
CONFIGURATIONS = 'configurations'

# a configuration entry is (value, literals of the scope sorted by variable)
Entry = Tuple[int, Tuple[int, ...]]


@dataclass
class TopKList:
    mode: str
    direction: str
    k: int
    entries: List = field(default_factory=list)

    def values(self) -> List[int]:
        return list(self.entries) if self.mode == VALUES else [value for value, _ in self.entries]

    def __len__(self):
        return len(self.entries)


class _Ranking(object):
    def __init__(self, k: int, direction: str):
        self.k = k
        self.sign = 1 if direction == 'min' else -1

    def value_key(self, value: int):
        return self.sign * value

    def entry_key(self, entry: Entry):
        # assignments compare false before true, variable by variable
        return self.sign * entry[0], tuple(lit > 0 for lit in entry[1])

    def best_values(self, values) -> List[int]:
        return heapq.nsmallest(self.k, set(values), key=self.value_key)

    def best_entries(self, entries) -> List[Entry]:
        return heapq.nsmallest(self.k, entries, key=self.entry_key)

    def add_values(self, a: Sequence[int], b: Sequence[int]) -> List[int]:
        return self.best_values(x + y for x in a for y in b)

    def add_entries(self, a: Sequence[Entry], b: Sequence[Entry]) -> List[Entry]:
        return self.best_entries((va + vb, tuple(sorted(la + lb, key=var_of))) for va, la in a for vb, lb in b)


def _fold(lists, combine: Callable, unit):
    acc = unit
    for item in lists:
        acc = combine(acc, item)
        if not acc:
            break
    return acc


def topk_transform(c: DdnnfCircuit, w: Weighting, k: int, direction: str = 'min', mode: str = VALUES,
                   deadline: Deadline = NO_DEADLINE) -> TopKList:
    """The k best distinct values (mode 'values') or k best configurations (mode 'configurations').

    Values come strictly monotone. Configurations come weakly monotone in value, ties broken by the
    lexicographically smallest assignment (false before true, lowest variable first).
    """
    assert k >= 1, f"k must be positive, got {k}"
    if mode not in (VALUES, CONFIGURATIONS):
        raise ValueError(f"Top-k mode should be '{VALUES}' or '{CONFIGURATIONS}', got '{mode}'")
    if direction not in ('min', 'max'):
        raise ValueError(f"Direction should be 'min' or 'max', got '{direction}'")
    if w.num_vars != c.num_vars:
        raise WeightingError(f"Weighting covers {w.num_vars} variables, circuit has {c.num_vars}")
    c.require_strict('The top-k transformation')
    rank = _Ranking(k, direction)

    if mode == VALUES:
        combine, unit = rank.add_values, [0]
        literal = lambda lit: [w.literal_weight(lit)]
        free = lambda var: rank.best_values([w.literal_weight(var), w.literal_weight(-var)])
        union = rank.best_values
    else:
        combine, unit = rank.add_entries, [(0, ())]
        literal = lambda lit: [(w.literal_weight(lit), (lit,))]
        free = lambda var: rank.best_entries([(w.literal_weight(-var), (-var,)), (w.literal_weight(var), (var,))])
        union = rank.best_entries

    def with_free(entries, variables):
        return _fold((free(v) for v in sorted(variables)), combine, entries)

    table = []
    for i, node in enumerate(c.nodes):
        if i % 256 == 0:
            deadline.check()
        if isinstance(node, LiteralNode):
            table.append(literal(node.lit))
        elif isinstance(node, TrueNode):
            table.append(list(unit))
        elif isinstance(node, FalseNode):
            table.append([])
        elif isinstance(node, AndNode):
            table.append(_fold((table[child] for child in node.children), combine, list(unit)))
        else:
            pooled = []
            for child, lit in branches(node):
                if not table[child]:
                    continue
                pooled.extend(with_free(combine(table[child], literal(lit)), c.gap(i, child)))
            table.append(union(pooled))
    entries = with_free(table[c.root], c.free_vars()) if table[c.root] else []
    return TopKList(mode, direction, k, list(entries))


def format_topk(t: TopKList) -> str:
    """One line per entry: 'value' for values, 'value<TAB>model' for configurations."""
    if t.mode == VALUES:
        lines = [str(value) for value in t.entries]
    else:
        lines = [f"{value}\t{format_model(model)}" for value, model in t.entries]
    return '\n'.join(lines) + ('\n' if lines else '')
