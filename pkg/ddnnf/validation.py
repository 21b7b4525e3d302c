"""Structural checks for Decision-DNNF circuits."""
from dataclasses import dataclass, field
from typing import List

from cnf.formula import var_of
from ddnnf.circuit import AndNode, DdnnfCircuit, DecisionNode, LiteralNode, OrNode, children_of

DANGLING = 'dangling-child'
RANGE = 'variable-range'
DECOMPOSABILITY = 'decomposability'
DECISION_FORM = 'decision-form'


@dataclass(frozen=True)
class Violation:
    node_id: int
    kind: str
    message: str


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def node_ids(self) -> List[int]:
        return [v.node_id for v in self.violations]

    def __str__(self):
        if self.valid:
            return 'valid'
        return '\n'.join(f"node {v.node_id}: {v.kind}: {v.message}" for v in self.violations)


class CircuitValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(f"Invalid circuit:\n{report}")


def validate(c: DdnnfCircuit, strict: bool = True) -> ValidationReport:
    """Report dangling children, out-of-range variables, decomposability and decision-form violations.

    In strict mode every disjunction must be a decision node.
    """
    report = ValidationReport()
    add = lambda node_id, kind, message: report.violations.append(Violation(node_id, kind, message))
    if not 0 <= c.root < len(c.nodes):
        add(c.root, DANGLING, f"root id outside 0..{len(c.nodes) - 1}")
    for i, node in enumerate(c.nodes):
        bad = [child for child in children_of(node) if not 0 <= child < i]
        if bad:
            add(i, DANGLING, f"children {bad} do not precede the node")
            continue
        if isinstance(node, LiteralNode) and (node.lit == 0 or var_of(node.lit) > c.num_vars):
            add(i, RANGE, f"literal {node.lit} outside 1..{c.num_vars}")
        elif isinstance(node, AndNode):
            seen = set()
            for child in node.children:
                shared = seen & c.vars[child]
                if shared:
                    add(i, DECOMPOSABILITY, f"children share variables {sorted(shared)}")
                    break
                seen |= c.vars[child]
        elif isinstance(node, DecisionNode):
            if not 1 <= node.var <= c.num_vars:
                add(i, RANGE, f"decision variable {node.var} outside 1..{c.num_vars}")
            elif node.var in c.vars[node.hi] or node.var in c.vars[node.lo]:
                add(i, DECISION_FORM, f"decision variable {node.var} occurs inside a branch")
        elif isinstance(node, OrNode) and strict:
            add(i, DECISION_FORM, "general OR node in a Decision-DNNF circuit")
    return report


def check_valid(c: DdnnfCircuit, strict: bool = True) -> DdnnfCircuit:
    report = validate(c, strict)
    if not report.valid:
        raise CircuitValidationError(report)
    return c
