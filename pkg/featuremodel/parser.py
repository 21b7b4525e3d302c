"""
Reader and writer for the indentation-based feature model text format.

    MobilePhone
      Calls [mandatory]
      Screen [mandatory]
        <alt>
          Basic
          Color
    constraints:
      GPS => !Basic

Two spaces per depth level. Children default to [optional]; `<alt>` / `<or>` open a group
whose members are the next-deeper lines. `A => B` is requires, `A => !B` excludes.
"""
import re
from typing import List, Optional

from featuremodel.model import (ConstraintKind, CrossTreeConstraint, Feature, FeatureModel, FeatureModelError,
                                Group, GroupKind, Relation)

INDENT = 2
_NAME = r'[^\s\[\]<>!=#]+'
_FEATURE_LINE = re.compile(rf'^(?P<name>{_NAME})(?:\s+\[(?P<tag>[^\]]*)\])?$')
_GROUP_LINE = re.compile(r'^<(?P<kind>[^>]*)>$')
_CONSTRAINT_LINE = re.compile(rf'^(?P<lhs>{_NAME})\s*=>\s*(?P<neg>!)?\s*(?P<rhs>{_NAME})$')
_TAGS = {'mandatory': Relation.MANDATORY, 'optional': Relation.OPTIONAL}
_GROUP_KINDS = {'alt': GroupKind.ALTERNATIVE, 'or': GroupKind.OR}


class _OpenGroup(object):
    def __init__(self, parent, kind, line):
        self.parent = parent
        self.kind = kind
        self.line = line
        self.members = []


def parse_fm(text: str) -> FeatureModel:
    """Parse the feature model text format.

    >>> fm = parse_fm("Root")
    >>> [f.name for f in fm.features], fm.groups, fm.constraints
    (['Root'], [], [])
    """
    features: List[Feature] = []
    groups: List[_OpenGroup] = []
    constraints = []
    names = {}
    pending_constraints = []
    # entries are (depth, feature id or _OpenGroup)
    stack = []
    in_constraints = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith('#'):
            continue
        if '\t' in raw[:len(raw) - len(raw.lstrip())]:
            raise FeatureModelError("tabs are not allowed in indentation", line_no, 1)
        content = raw.strip()
        indent = len(raw) - len(raw.lstrip(' '))

        if indent == 0 and content == 'constraints:':
            if in_constraints:
                raise FeatureModelError("duplicate 'constraints:' section", line_no, 1)
            in_constraints = True
            continue
        if in_constraints:
            match = _CONSTRAINT_LINE.match(content)
            if not match:
                raise FeatureModelError(f"malformed constraint '{content}'", line_no, indent + 1)
            pending_constraints.append((match, line_no, indent + 1))
            continue

        if indent % INDENT:
            raise FeatureModelError(f"indentation must be a multiple of {INDENT} spaces", line_no, indent + 1)
        depth = indent // INDENT
        while stack and stack[-1][0] >= depth:
            stack.pop()
        if depth > 0 and (not stack or stack[-1][0] != depth - 1):
            raise FeatureModelError("indentation skips a level", line_no, indent + 1)

        group_match = _GROUP_LINE.match(content)
        if group_match:
            kind = _GROUP_KINDS.get(group_match.group('kind'))
            if kind is None:
                raise FeatureModelError(f"unknown group kind '<{group_match.group('kind')}>'", line_no, indent + 1)
            if not stack or isinstance(stack[-1][1], _OpenGroup):
                raise FeatureModelError("a group must be opened directly under a feature", line_no, indent + 1)
            group = _OpenGroup(stack[-1][1], kind, line_no)
            groups.append(group)
            stack.append((depth, group))
            continue

        match = _FEATURE_LINE.match(content)
        if not match:
            raise FeatureModelError(f"malformed feature line '{content}'", line_no, indent + 1)
        name, tag = match.group('name'), match.group('tag')
        if name in names:
            raise FeatureModelError(f"duplicate feature name '{name}'", line_no, indent + 1)
        fid = len(features)
        if depth == 0:
            if features:
                raise FeatureModelError(f"second root feature '{name}'", line_no, 1)
            if tag is not None:
                raise FeatureModelError("the root feature takes no relation tag", line_no, 1)
            features.append(Feature(name, None, Relation.ROOT))
        elif isinstance(stack[-1][1], _OpenGroup):
            if tag is not None:
                raise FeatureModelError(f"group member '{name}' takes no relation tag", line_no, indent + 1)
            group = stack[-1][1]
            group.members.append(fid)
            features.append(Feature(name, group.parent, Relation.GROUP_MEMBER))
        else:
            relation = Relation.OPTIONAL if tag is None else _TAGS.get(tag.strip())
            if relation is None:
                raise FeatureModelError(f"unknown relation tag '[{tag}]'", line_no, indent + 1 + len(name))
            features.append(Feature(name, stack[-1][1], relation))
        names[name] = fid
        stack.append((depth, fid))

    if not features:
        raise FeatureModelError("no root feature declared")
    for group in groups:
        if not group.members:
            raise FeatureModelError("empty group", group.line)
    for match, line_no, column in pending_constraints:
        ends = []
        for key in ('lhs', 'rhs'):
            if match.group(key) not in names:
                raise FeatureModelError(f"unknown feature '{match.group(key)}' in constraint", line_no, column)
            ends.append(names[match.group(key)])
        if ends[0] == ends[1]:
            raise FeatureModelError(f"constraint relates '{match.group('lhs')}' to itself", line_no, column)
        kind = ConstraintKind.EXCLUDES if match.group('neg') else ConstraintKind.REQUIRES
        constraints.append(CrossTreeConstraint(kind, ends[0], ends[1]))

    fm = FeatureModel(features, [Group(g.parent, g.kind, tuple(g.members)) for g in groups], constraints)
    return fm.validate()


def _render(fm: FeatureModel, fid: int, depth: int, lines: List[str], tag: Optional[str]):
    pad = ' ' * (INDENT * depth)
    lines.append(f"{pad}{fm.features[fid].name}" + (f" [{tag}]" if tag else ''))
    items = []
    for child in fm.children(fid):
        relation = fm.features[child].relation
        if relation is not Relation.GROUP_MEMBER:
            items.append((child, 'feature', child))
    for group in fm.groups_of(fid):
        items.append((min(group.members), 'group', group))
    for _, kind, item in sorted(items, key=lambda entry: entry[0]):
        if kind == 'feature':
            _render(fm, item, depth + 1, lines, fm.features[item].relation.value)
        else:
            keyword = 'alt' if item.kind is GroupKind.ALTERNATIVE else 'or'
            lines.append(f"{pad}{' ' * INDENT}<{keyword}>")
            for member in item.members:
                _render(fm, member, depth + 2, lines, None)


def write_fm(fm: FeatureModel) -> str:
    """Render a FeatureModel in the text format. Relation tags are always explicit."""
    fm.validate()
    lines = []
    _render(fm, fm.root, 0, lines, None)
    if fm.constraints:
        lines.append('constraints:')
        for ctc in fm.constraints:
            neg = '!' if ctc.kind is ConstraintKind.EXCLUDES else ''
            lines.append(f"{' ' * INDENT}{fm.features[ctc.lhs].name} => {neg}{fm.features[ctc.rhs].name}")
    return '\n'.join(lines) + '\n'
