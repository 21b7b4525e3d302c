"""
Feature models: a feature tree with mandatory/optional/group relations plus requires/excludes constraints.
"""
import enum
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterator, List, Mapping, Optional, Tuple


class FeatureModelError(ValueError):
    """Malformed or inconsistent feature model. Carries the source position when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class Relation(enum.Enum):
    ROOT = 'root'
    MANDATORY = 'mandatory'
    OPTIONAL = 'optional'
    GROUP_MEMBER = 'group-member'


class GroupKind(enum.Enum):
    OR = 'or'
    ALTERNATIVE = 'alternative'


class ConstraintKind(enum.Enum):
    REQUIRES = 'requires'
    EXCLUDES = 'excludes'


@dataclass(frozen=True)
class Feature:
    name: str
    parent: Optional[int]
    relation: Relation


@dataclass(frozen=True)
class Group:
    parent: int
    kind: GroupKind
    members: Tuple[int, ...]


@dataclass(frozen=True)
class CrossTreeConstraint:
    kind: ConstraintKind
    lhs: int
    rhs: int


@dataclass
class FeatureModel:
    """Features are addressed by their position in `features` (declaration order)."""
    features: List[Feature] = field(default_factory=list)
    groups: List[Group] = field(default_factory=list)
    constraints: List[CrossTreeConstraint] = field(default_factory=list)

    @property
    def root(self) -> int:
        return next(i for i, f in enumerate(self.features) if f.relation is Relation.ROOT)

    def index_of(self, name: str) -> int:
        for i, feature in enumerate(self.features):
            if feature.name == name:
                return i
        raise FeatureModelError(f"Unknown feature '{name}'")

    def children(self, fid: int) -> List[int]:
        return [i for i, f in enumerate(self.features) if f.parent == fid]

    def group_of(self, fid: int) -> Optional[Group]:
        for group in self.groups:
            if fid in group.members:
                return group
        return None

    def groups_of(self, parent: int) -> List[Group]:
        return [g for g in self.groups if g.parent == parent]

    def bfs_order(self) -> List[int]:
        order, queue = [], deque([self.root])
        while queue:
            fid = queue.popleft()
            order.append(fid)
            queue.extend(self.children(fid))
        return order

    def validate(self) -> 'FeatureModel':
        """Check the tree, group and constraint invariants; returns self for chaining."""
        if not self.features:
            raise FeatureModelError("Feature model has no features")
        roots = [i for i, f in enumerate(self.features) if f.relation is Relation.ROOT]
        if len(roots) != 1:
            raise FeatureModelError(f"Expected exactly one root feature, found {len(roots)}")
        names = set()
        for i, feature in enumerate(self.features):
            if not feature.name:
                raise FeatureModelError(f"Feature {i} has an empty name")
            if feature.name in names:
                raise FeatureModelError(f"Duplicate feature name '{feature.name}'")
            names.add(feature.name)
            if (feature.parent is None) != (feature.relation is Relation.ROOT):
                raise FeatureModelError(f"Feature '{feature.name}' must have a parent unless it is the root")
            if feature.parent is not None and not 0 <= feature.parent < len(self.features):
                raise FeatureModelError(f"Feature '{feature.name}' has an unknown parent {feature.parent}")
        for i in range(len(self.features)):
            seen, current = set(), i
            while current is not None:
                if current in seen:
                    raise FeatureModelError(f"Cycle in the feature tree through '{self.features[i].name}'")
                seen.add(current)
                current = self.features[current].parent
        membership = {}
        for group in self.groups:
            if not group.members:
                raise FeatureModelError(f"Empty group under '{self.features[group.parent].name}'")
            for member in group.members:
                if member in membership:
                    raise FeatureModelError(f"Feature '{self.features[member].name}' belongs to two groups")
                membership[member] = group
                if self.features[member].parent != group.parent:
                    raise FeatureModelError(f"Group member '{self.features[member].name}' does not share the group parent")
        for i, feature in enumerate(self.features):
            if (feature.relation is Relation.GROUP_MEMBER) != (i in membership):
                raise FeatureModelError(f"Feature '{feature.name}' group membership does not match its relation")
        for ctc in self.constraints:
            for fid in (ctc.lhs, ctc.rhs):
                if not 0 <= fid < len(self.features):
                    raise FeatureModelError(f"Constraint refers to unknown feature {fid}")
            if ctc.lhs == ctc.rhs:
                raise FeatureModelError(f"Constraint relates '{self.features[ctc.lhs].name}' to itself")
        return self


class NameMap(object):
    """Bijection between feature names and dense 1-based variable indices.

    >>> m = NameMap(['Root', 'A'])
    >>> m.var('A'), m.name(1)
    (2, 'Root')
    """

    def __init__(self, names):
        self._names = list(names)
        self._vars = {name: i + 1 for i, name in enumerate(self._names)}
        if len(self._vars) != len(self._names):
            raise FeatureModelError("Name map must be a bijection: duplicate names")

    @classmethod
    def from_dict(cls, index_to_name: Mapping[int, str]) -> 'NameMap':
        indices = sorted(index_to_name)
        if indices != list(range(1, len(indices) + 1)):
            raise FeatureModelError(f"Name map indices must cover 1..{len(indices)} without gaps")
        return cls(index_to_name[i] for i in indices)

    def var(self, name: str) -> int:
        try:
            return self._vars[name]
        except KeyError:
            raise FeatureModelError(f"Unknown feature '{name}'")

    def name(self, var: int) -> str:
        if not 1 <= var <= len(self._names):
            raise FeatureModelError(f"Variable {var} outside 1..{len(self._names)}")
        return self._names[var - 1]

    def as_dict(self) -> Dict[int, str]:
        return {i + 1: name for i, name in enumerate(self._names)}

    def __len__(self):
        return len(self._names)

    def __iter__(self):
        return iter(self._names)

    def __eq__(self, other):
        return isinstance(other, NameMap) and self._names == other._names

    def __repr__(self):
        return f"NameMap({self._names})"


def _subtree_configs(fm: FeatureModel, fid: int) -> Iterator[frozenset]:
    """Selections within the subtree of a selected feature fid (fid included)."""
    parts = []
    for child in fm.children(fid):
        relation = fm.features[child].relation
        if relation is Relation.MANDATORY:
            parts.append(list(_subtree_configs(fm, child)))
        elif relation is Relation.OPTIONAL:
            parts.append([frozenset()] + list(_subtree_configs(fm, child)))
    for group in fm.groups_of(fid):
        member_configs = {m: list(_subtree_configs(fm, m)) for m in group.members}
        options = []
        if group.kind is GroupKind.ALTERNATIVE:
            for m in group.members:
                options.extend(member_configs[m])
        else:
            for size in range(1, len(group.members) + 1):
                for chosen in combinations(group.members, size):
                    partial = [frozenset()]
                    for m in chosen:
                        partial = [p | c for p in partial for c in member_configs[m]]
                    options.extend(partial)
        parts.append(options)
    result = [frozenset([fid])]
    for options in parts:
        result = [r | o for r in result for o in options]
    return iter(result)


def _satisfies_constraints(fm: FeatureModel, selected: frozenset) -> bool:
    for ctc in fm.constraints:
        if ctc.lhs in selected:
            if ctc.kind is ConstraintKind.REQUIRES and ctc.rhs not in selected:
                return False
            if ctc.kind is ConstraintKind.EXCLUDES and ctc.rhs in selected:
                return False
    return True


def enumerate_configurations(fm: FeatureModel) -> List[frozenset]:
    """All valid configurations as sets of feature names, by recursion over the tree then constraint filtering.

    Independent of the CNF encoding; used as its oracle.
    """
    fm.validate()
    configs = []
    for selected in _subtree_configs(fm, fm.root):
        if _satisfies_constraints(fm, selected):
            configs.append(frozenset(fm.features[i].name for i in selected))
    return configs
