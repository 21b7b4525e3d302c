"""
Circuit file formats.

Canonical format::

    ddnnf <num_nodes> <root_id> <num_vars>
    T | F | L <lit> | A <count> <ids...> | D <var> <hi> <lo>     (one line per node id, children first)

c2d NNF::

    nnf <num_nodes> <num_edges> <num_vars>
    L <lit> | A <count> <ids...> | O <decision_var> <count> <ids...>   (root is the last node)
"""
import logging
import warnings
from typing import List, Optional, Tuple

from cnf.formula import var_of
from ddnnf.circuit import (AndNode, CircuitBuilder, CircuitFormatError, DdnnfCircuit, DecisionNode, FalseNode,
                           LiteralNode, NotDecisionDnnfError, OrNode, TrueNode)
from ddnnf.validation import check_valid

log = logging.getLogger(__name__)


def _content_lines(text: str):
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith('c'):
            yield line_no, line.split()


def _ints(fields, line_no) -> List[int]:
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise CircuitFormatError(f"non-integer field in '{' '.join(fields)}'", line_no)


def _child_ids(fields, node_id, line_no) -> Tuple[int, ...]:
    values = _ints(fields, line_no)
    if not values or values[0] != len(values) - 1:
        raise CircuitFormatError("child count does not match the listed ids", line_no)
    children = tuple(values[1:])
    for child in children:
        if not 0 <= child < node_id:
            raise CircuitFormatError(f"child id {child} does not precede node {node_id}", line_no)
    return children


def _check_literal(lit, num_vars, line_no):
    if lit == 0 or var_of(lit) > num_vars:
        raise CircuitFormatError(f"literal {lit} outside 1..{num_vars}", line_no)


def parse_canonical(text: str, validate: bool = True) -> DdnnfCircuit:
    """Read the canonical circuit format. Structural violations raise CircuitValidationError.

    >>> c = parse_canonical("ddnnf 1 0 0\\nT\\n")
    >>> len(c), c.root, c.num_vars
    (1, 0, 0)
    """
    lines = _content_lines(text)
    header = next(lines, None)
    if header is None or header[1][0] != 'ddnnf' or len(header[1]) != 4:
        raise CircuitFormatError("missing 'ddnnf <num_nodes> <root_id> <num_vars>' header",
                                 header[0] if header else None)
    num_nodes, root, num_vars = _ints(header[1][1:], header[0])
    nodes = []
    for line_no, fields in lines:
        node_id = len(nodes)
        if node_id >= num_nodes:
            raise CircuitFormatError(f"more than the {num_nodes} declared nodes", line_no)
        kind, rest = fields[0], fields[1:]
        if kind == 'T' and not rest:
            nodes.append(TrueNode())
        elif kind == 'F' and not rest:
            nodes.append(FalseNode())
        elif kind == 'L' and len(rest) == 1:
            lit = _ints(rest, line_no)[0]
            _check_literal(lit, num_vars, line_no)
            nodes.append(LiteralNode(lit))
        elif kind == 'A':
            nodes.append(AndNode(_child_ids(rest, node_id, line_no)))
        elif kind == 'D':
            if len(rest) != 3:
                raise CircuitFormatError("decision nodes take 'D <var> <hi> <lo>'", line_no)
            var, hi, lo = _ints(rest, line_no)
            if not 1 <= var <= num_vars:
                raise CircuitFormatError(f"decision variable {var} outside 1..{num_vars}", line_no)
            for child in (hi, lo):
                if not 0 <= child < node_id:
                    raise CircuitFormatError(f"child id {child} does not precede node {node_id}", line_no)
            nodes.append(DecisionNode(var, hi, lo))
        else:
            raise CircuitFormatError(f"malformed node line '{' '.join(fields)}'", line_no)
    if len(nodes) != num_nodes:
        raise CircuitFormatError(f"header declares {num_nodes} nodes but {len(nodes)} were read")
    if not 0 <= root < max(num_nodes, 1) or not nodes:
        raise CircuitFormatError(f"root id {root} outside 0..{num_nodes - 1}")
    circuit = DdnnfCircuit(nodes, root, num_vars)
    return check_valid(circuit) if validate else circuit


def write_canonical(c: DdnnfCircuit) -> str:
    lines = [f"ddnnf {len(c.nodes)} {c.root} {c.num_vars}"]
    for node in c.nodes:
        if isinstance(node, TrueNode):
            lines.append('T')
        elif isinstance(node, FalseNode):
            lines.append('F')
        elif isinstance(node, LiteralNode):
            lines.append(f"L {node.lit}")
        elif isinstance(node, AndNode):
            lines.append(' '.join(['A', str(len(node.children))] + [str(x) for x in node.children]))
        elif isinstance(node, DecisionNode):
            lines.append(f"D {node.var} {node.hi} {node.lo}")
        else:
            raise NotDecisionDnnfError("the canonical format has no general OR node; use write_c2d_nnf")
    return '\n'.join(lines) + '\n'


def _literal_conjunct(b: CircuitBuilder, node_id: int, lit: int) -> Optional[int]:
    """node without its top-level literal lit, or None when lit is not a top-level conjunct."""
    node = b.nodes[node_id]
    if isinstance(node, LiteralNode):
        return b.true() if node.lit == lit else None
    if isinstance(node, AndNode):
        for child in node.children:
            if b.nodes[child] == LiteralNode(lit):
                return b.conj([c for c in node.children if c != child])
    return None


def _top_literals(b: CircuitBuilder, node_id: int) -> List[int]:
    node = b.nodes[node_id]
    if isinstance(node, LiteralNode):
        return [node.lit]
    if isinstance(node, AndNode):
        return [b.nodes[c].lit for c in node.children if isinstance(b.nodes[c], LiteralNode)]
    return []


def _as_decision(b: CircuitBuilder, var: int, first: int, second: int) -> Optional[int]:
    candidates = [var] if var else sorted({var_of(lit) for lit in _top_literals(b, first)})
    for x in candidates:
        for hi_side, lo_side in ((first, second), (second, first)):
            hi = _literal_conjunct(b, hi_side, x)
            lo = _literal_conjunct(b, lo_side, -x)
            if hi is not None and lo is not None:
                return b.decision(x, hi, lo)
    return None


def parse_c2d_nnf(text: str, strict: bool = True, validate: bool = True) -> DdnnfCircuit:
    """Read c2d NNF, turning binary O nodes into decision nodes.

    Outside strict mode, O nodes without decision form become general OR nodes (fine for
    counting and consistency).

    >>> from ddnnf.queries import count_models
    >>> count_models(parse_c2d_nnf("nnf 3 2 1\\nL 1\\nL -1\\nO 1 2 0 1\\n"))
    2
    """
    lines = _content_lines(text)
    header = next(lines, None)
    if header is None or header[1][0] != 'nnf' or len(header[1]) != 4:
        raise CircuitFormatError("missing 'nnf <num_nodes> <num_edges> <num_vars>' header",
                                 header[0] if header else None)
    num_nodes, num_edges, num_vars = _ints(header[1][1:], header[0])
    b = CircuitBuilder()
    ids: List[int] = []
    edges = 0
    for line_no, fields in lines:
        node_id = len(ids)
        if node_id >= num_nodes:
            raise CircuitFormatError(f"more than the {num_nodes} declared nodes", line_no)
        kind, rest = fields[0], fields[1:]
        if kind == 'L' and len(rest) == 1:
            lit = _ints(rest, line_no)[0]
            _check_literal(lit, num_vars, line_no)
            ids.append(b.literal(lit))
        elif kind == 'A' and rest:
            children = [ids[c] for c in _child_ids(rest, node_id, line_no)]
            edges += len(children)
            ids.append(b.conj(children))
        elif kind == 'O' and len(rest) >= 2:
            var = _ints(rest[:1], line_no)[0]
            if var < 0 or var > num_vars:
                raise CircuitFormatError(f"decision variable {var} outside 0..{num_vars}", line_no)
            children = [ids[c] for c in _child_ids(rest[1:], node_id, line_no)]
            edges += len(children)
            children = [child for child in children if not b.is_false(child)]
            if not children:
                ids.append(b.false())
            elif len(children) == 1:
                ids.append(children[0])
            else:
                decision = _as_decision(b, var, *children) if len(children) == 2 else None
                if decision is None and strict:
                    raise NotDecisionDnnfError(f"line {line_no}: O node is not a binary decision on one variable")
                ids.append(decision if decision is not None else b.disj(children))
        else:
            raise CircuitFormatError(f"malformed node line '{' '.join(fields)}'", line_no)
    if len(ids) != num_nodes or not ids:
        raise CircuitFormatError(f"header declares {num_nodes} nodes but {len(ids)} were read")
    if edges != num_edges:
        warnings.warn(f"c2d header declares {num_edges} edges but {edges} were read")
    circuit = b.build(ids[-1], num_vars)
    return check_valid(circuit, strict=strict) if validate else circuit


def write_c2d_nnf(c: DdnnfCircuit) -> str:
    """Export to c2d NNF. Decision nodes become O nodes over two literal-guarded AND nodes."""
    lines: List[str] = []
    emitted = {}
    edges = 0

    def emit(key, line, count):
        nonlocal edges
        if key not in emitted:
            emitted[key] = len(lines)
            lines.append(line)
            edges += count
        return emitted[key]

    for i, node in enumerate(c.nodes):
        if isinstance(node, LiteralNode):
            emit(i, f"L {node.lit}", 0)
        elif isinstance(node, TrueNode):
            emit(i, "A 0", 0)
        elif isinstance(node, FalseNode):
            emit(i, "O 0 0", 0)
        elif isinstance(node, AndNode):
            kids = [emitted[x] for x in node.children]
            emit(i, ' '.join(['A', str(len(kids))] + [str(x) for x in kids]), len(kids))
        elif isinstance(node, OrNode):
            kids = [emitted[x] for x in node.children]
            emit(i, ' '.join(['O', '0', str(len(kids))] + [str(x) for x in kids]), len(kids))
        else:
            branches = []
            for lit, child in ((node.var, node.hi), (-node.var, node.lo)):
                guard = emit(('L', lit), f"L {lit}", 0)
                branches.append(emit(('A', lit, child), f"A 2 {guard} {emitted[child]}", 2))
            emit(i, f"O {node.var} 2 {branches[0]} {branches[1]}", 2)
    if emitted[c.root] != len(lines) - 1:
        # c2d readers take the last node as root
        lines.append(f"A 1 {emitted[c.root]}")
        edges += 1
    return '\n'.join([f"nnf {len(lines)} {edges} {c.num_vars}"] + lines) + '\n'
