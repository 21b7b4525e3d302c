import logging
from itertools import combinations
from typing import Tuple

from cnf.formula import CnfFormula
from featuremodel.model import ConstraintKind, FeatureModel, GroupKind, NameMap, Relation

log = logging.getLogger(__name__)


def name_map(fm: FeatureModel) -> NameMap:
    """Breadth-first variable numbering, root = 1, siblings in declaration order."""
    return NameMap(fm.features[fid].name for fid in fm.bfs_order())


def encode_fm(fm: FeatureModel) -> Tuple[CnfFormula, NameMap]:
    """CNF whose models are exactly the valid configurations of fm.

    >>> from featuremodel.parser import parse_fm
    >>> f, names = encode_fm(parse_fm("A\\n  B [mandatory]"))
    >>> f.clauses
    ((1,), (1, -2), (2, -1))
    """
    fm.validate()
    names = name_map(fm)
    var = {fid: names.var(fm.features[fid].name) for fid in range(len(fm.features))}
    clauses = [(var[fm.root],)]
    order = fm.bfs_order()
    for fid in order:
        feature = fm.features[fid]
        if feature.parent is None:
            continue
        p, c = var[feature.parent], var[fid]
        clauses.append((p, -c))
        if feature.relation is Relation.MANDATORY:
            clauses.append((c, -p))
    for fid in order:
        for group in fm.groups_of(fid):
            members = [var[m] for m in group.members]
            clauses.append(tuple(members) + (-var[fid],))
            if group.kind is GroupKind.ALTERNATIVE:
                clauses.extend((-a, -b) for a, b in combinations(members, 2))
    for ctc in fm.constraints:
        a, b = var[ctc.lhs], var[ctc.rhs]
        clauses.append((-a, b) if ctc.kind is ConstraintKind.REQUIRES else (-a, -b))
    log.debug('Encoded %d features into %d clauses', len(names), len(clauses))
    return CnfFormula.from_clauses(len(names), clauses), names
