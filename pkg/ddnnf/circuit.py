"""
Decision-DNNF circuits stored as an arena of nodes. Children always carry smaller ids than
their parent, so a single forward pass over the arena is a bottom-up traversal.
"""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Sequence, Tuple, Union

from cnf.formula import as_assignment, var_of

log = logging.getLogger(__name__)


class CircuitFormatError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NotDecisionDnnfError(ValueError):
    """A general disjunction where a Decision-DNNF decision node is required."""


@dataclass(frozen=True)
class LiteralNode:
    lit: int


@dataclass(frozen=True)
class TrueNode:
    pass


@dataclass(frozen=True)
class FalseNode:
    pass


@dataclass(frozen=True)
class AndNode:
    children: Tuple[int, ...]


@dataclass(frozen=True)
class DecisionNode:
    """x and hi, or not x and lo."""
    var: int
    hi: int
    lo: int

    @property
    def children(self) -> Tuple[int, int]:
        return self.hi, self.lo


@dataclass(frozen=True)
class OrNode:
    """General deterministic disjunction; only accepted outside strict mode."""
    children: Tuple[int, ...]


Node = Union[LiteralNode, TrueNode, FalseNode, AndNode, DecisionNode, OrNode]


def children_of(node: Node) -> Tuple[int, ...]:
    return getattr(node, 'children', ())


class DdnnfCircuit(object):
    """Immutable circuit over the variable universe 1..num_vars.

    vars[i] is the set of variables mentioned in the subcircuit of node i. Children outside
    0..i-1 are ignored when caching vars; validate() reports them.
    """

    def __init__(self, nodes: Sequence[Node], root: int, num_vars: int):
        self.nodes: Tuple[Node, ...] = tuple(nodes)
        self.root = root
        self.num_vars = num_vars
        self.vars: List[FrozenSet[int]] = []
        for i, node in enumerate(self.nodes):
            own = set()
            if isinstance(node, LiteralNode):
                own.add(var_of(node.lit))
            elif isinstance(node, DecisionNode):
                own.add(node.var)
            for child in children_of(node):
                if 0 <= child < i:
                    own |= self.vars[child]
            self.vars.append(frozenset(own))

    def __len__(self):
        return len(self.nodes)

    @property
    def strict(self) -> bool:
        return not any(isinstance(node, OrNode) for node in self.nodes)

    @property
    def num_edges(self) -> int:
        return sum(len(children_of(node)) for node in self.nodes)

    def require_strict(self, operation: str):
        if not self.strict:
            raise NotDecisionDnnfError(f"{operation} requires a Decision-DNNF circuit (general OR node found)")

    def gap(self, parent: int, child: int) -> FrozenSet[int]:
        """Variables of the parent's scope that the child leaves free, decision variable excluded."""
        node = self.nodes[parent]
        scope = self.vars[parent] - {node.var} if isinstance(node, DecisionNode) else self.vars[parent]
        return scope - self.vars[child]

    def free_vars(self) -> FrozenSet[int]:
        return frozenset(range(1, self.num_vars + 1)) - self.vars[self.root]

    def __repr__(self):
        return f"DdnnfCircuit(nodes={len(self.nodes)}, root={self.root}, num_vars={self.num_vars})"


class CircuitBuilder(object):
    """Hash-consing node factory: structurally identical nodes share one id.

    >>> b = CircuitBuilder()
    >>> b.literal(1) == b.literal(1), b.conj([b.true(), b.literal(2)]) == b.literal(2)
    (True, True)
    """

    def __init__(self):
        self.nodes: List[Node] = []
        self._unique: Dict[Node, int] = {}

    def __len__(self):
        return len(self.nodes)

    def _make(self, node: Node) -> int:
        found = self._unique.get(node)
        if found is None:
            found = len(self.nodes)
            self.nodes.append(node)
            self._unique[node] = found
        return found

    def true(self) -> int:
        return self._make(TrueNode())

    def false(self) -> int:
        return self._make(FalseNode())

    def literal(self, lit: int) -> int:
        return self._make(LiteralNode(lit))

    def is_false(self, node_id: int) -> bool:
        return isinstance(self.nodes[node_id], FalseNode)

    def is_true(self, node_id: int) -> bool:
        return isinstance(self.nodes[node_id], TrueNode)

    def conj(self, children: Sequence[int]) -> int:
        kept = []
        for child in children:
            if self.is_false(child):
                return self.false()
            if not self.is_true(child) and child not in kept:
                kept.append(child)
        if not kept:
            return self.true()
        if len(kept) == 1:
            return kept[0]
        return self._make(AndNode(tuple(kept)))

    def conj_tree(self, children: Sequence[int]) -> int:
        """Conjunction as a balanced binary tree of AND nodes."""
        if len(children) <= 2:
            return self.conj(children)
        middle = len(children) // 2
        return self.conj([self.conj_tree(children[:middle]), self.conj_tree(children[middle:])])

    def decision(self, var: int, hi: int, lo: int) -> int:
        if self.is_false(hi) and self.is_false(lo):
            return self.false()
        return self._make(DecisionNode(var, hi, lo))

    def disj(self, children: Sequence[int]) -> int:
        kept = [c for c in dict.fromkeys(children) if not self.is_false(c)]
        if not kept:
            return self.false()
        if len(kept) == 1:
            return kept[0]
        return self._make(OrNode(tuple(kept)))

    def build(self, root: int, num_vars: int) -> DdnnfCircuit:
        """Circuit of the nodes reachable from root, renumbered in their original order."""
        reachable = set()
        stack = [root]
        while stack:
            node_id = stack.pop()
            if node_id in reachable:
                continue
            reachable.add(node_id)
            stack.extend(children_of(self.nodes[node_id]))
        order = sorted(reachable)
        remap = {old: new for new, old in enumerate(order)}
        nodes = []
        for old in order:
            node = self.nodes[old]
            if isinstance(node, AndNode):
                node = AndNode(tuple(remap[c] for c in node.children))
            elif isinstance(node, OrNode):
                node = OrNode(tuple(remap[c] for c in node.children))
            elif isinstance(node, DecisionNode):
                node = DecisionNode(node.var, remap[node.hi], remap[node.lo])
            nodes.append(node)
        log.debug('Built circuit with %d of %d arena nodes', len(nodes), len(self.nodes))
        return DdnnfCircuit(nodes, remap[root], num_vars)


def evaluate_circuit(c: DdnnfCircuit, assignment: Union[Mapping[int, bool], Sequence[int]]) -> bool:
    """Value of the circuit under a total assignment."""
    a = as_assignment(assignment)
    missing = [v for v in range(1, c.num_vars + 1) if v not in a]
    if missing:
        raise ValueError(f"Assignment is not total: variables {missing[:5]} unassigned")
    values = []
    for node in c.nodes:
        if isinstance(node, LiteralNode):
            values.append(a[var_of(node.lit)] == (node.lit > 0))
        elif isinstance(node, TrueNode):
            values.append(True)
        elif isinstance(node, FalseNode):
            values.append(False)
        elif isinstance(node, AndNode):
            values.append(all(values[child] for child in node.children))
        elif isinstance(node, DecisionNode):
            values.append(values[node.hi] if a[node.var] else values[node.lo])
        else:
            values.append(any(values[child] for child in node.children))
    return values[c.root]
