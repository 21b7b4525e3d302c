"""Random feature models for fuzzing and for the benchmark mini-corpus."""
import numpy as np

from featuremodel.model import (ConstraintKind, CrossTreeConstraint, Feature, FeatureModel, Group, GroupKind,
                                Relation)


def _ancestors(features, fid):
    out = set()
    current = features[fid].parent
    while current is not None:
        out.add(current)
        current = features[current].parent
    return out


def random_feature_model(rng: np.random.Generator, num_features: int, num_constraints: int = 0,
                         group_probability: float = 0.3, mandatory_probability: float = 0.3) -> FeatureModel:
    """A random tree of num_features features plus up to num_constraints requires/excludes constraints.

    Constraints never relate a feature to one of its ancestors. The result is valid but may be unsatisfiable.
    """
    assert num_features >= 1, f"num_features must be positive, got {num_features}"
    features = [Feature('F0', None, Relation.ROOT)]
    groups = []
    while len(features) < num_features:
        parent = int(rng.integers(0, len(features)))
        remaining = num_features - len(features)
        if remaining >= 2 and rng.random() < group_probability:
            size = int(rng.integers(2, min(remaining, 4) + 1))
            members = []
            for _ in range(size):
                members.append(len(features))
                features.append(Feature(f'F{len(features)}', parent, Relation.GROUP_MEMBER))
            kind = GroupKind.ALTERNATIVE if rng.random() < 0.5 else GroupKind.OR
            groups.append(Group(parent, kind, tuple(members)))
        else:
            relation = Relation.MANDATORY if rng.random() < mandatory_probability else Relation.OPTIONAL
            features.append(Feature(f'F{len(features)}', parent, relation))

    constraints = []
    seen = set()
    for _ in range(num_constraints * 4):
        if len(constraints) >= num_constraints or num_features < 3:
            break
        lhs, rhs = (int(x) for x in rng.choice(num_features, size=2, replace=False))
        if lhs in _ancestors(features, rhs) or rhs in _ancestors(features, lhs) or (lhs, rhs) in seen:
            continue
        seen.add((lhs, rhs))
        kind = ConstraintKind.REQUIRES if rng.random() < 0.5 else ConstraintKind.EXCLUDES
        constraints.append(CrossTreeConstraint(kind, lhs, rhs))
    return FeatureModel(features, groups, constraints).validate()
