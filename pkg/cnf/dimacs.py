"""DIMACS CNF reading and writing."""
import re
import warnings
from typing import Dict, Mapping, Optional

from cnf.formula import CnfFormula, var_of

_NAME_COMMENT = re.compile(r'^c\s+(\d+)\s+(\S.*?)\s*$')


class DimacsError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_dimacs(text: str) -> CnfFormula:
    """Parse 'p cnf n m' followed by 0-terminated clauses. Comment lines start with 'c'.

    >>> parse_dimacs("p cnf 1 1\\n1 0")
    CnfFormula(num_vars=1, clauses=((1,),))
    """
    num_vars = None
    declared = None
    clauses = []
    current = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('c') or line.startswith('%'):
            continue
        if line.startswith('p'):
            if num_vars is not None:
                raise DimacsError("duplicate problem line", line_no)
            parts = line.split()
            if len(parts) != 4 or parts[1] != 'cnf':
                raise DimacsError(f"malformed problem line '{line}'", line_no)
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed problem line '{line}'", line_no)
            if num_vars < 0 or declared < 0:
                raise DimacsError(f"negative counts in problem line '{line}'", line_no)
            continue
        if num_vars is None:
            raise DimacsError("clause before the 'p cnf' header", line_no)
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise DimacsError(f"invalid literal '{token}'", line_no)
            if lit == 0:
                clauses.append(current)
                current = []
            elif var_of(lit) > num_vars:
                raise DimacsError(f"literal {lit} out of range 1..{num_vars}", line_no)
            else:
                current.append(lit)
    if num_vars is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        warnings.warn("Last clause is not terminated by 0; accepting it")
        clauses.append(current)
    if len(clauses) != declared:
        warnings.warn(f"Header declares {declared} clauses but {len(clauses)} were read")
    return CnfFormula.from_clauses(num_vars, clauses)


def write_dimacs(f: CnfFormula, names: Optional[Mapping[int, str]] = None) -> str:
    """Render f in DIMACS. With names, 'c <index> <name>' lines precede the header.

    >>> write_dimacs(CnfFormula.from_clauses(1, [[1]]))
    'p cnf 1 1\\n1 0\\n'
    """
    lines = []
    if names:
        for index in sorted(names):
            lines.append(f"c {index} {names[index]}")
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    for clause in f.clauses:
        lines.append(' '.join(str(lit) for lit in clause) + (' 0' if clause else '0'))
    return '\n'.join(lines) + '\n'


def parse_dimacs_names(text: str) -> Dict[int, str]:
    """Collect FeatureIDE-style 'c <index> <name>' comments preceding clauses."""
    names = {}
    for raw in text.splitlines():
        match = _NAME_COMMENT.match(raw.strip())
        if match:
            names[int(match.group(1))] = match.group(2)
    return names
