"""
Parser for analysis scripts, one statement per line::

    rep = load_cnf("mobile_phone.cnf")
    w = new_weighting(10)
    set_default_positive_weight(w, 1)
    opt = optimize (rep, w, "min")
    print get_weight(w, opt)

statement := 'print' expr | NAME '=' expr | call
expr      := call | NAME | INT | STRING | '(' expr ')'
call      := NAME '(' [expr {',' expr}] ')'

'#' starts a comment. A bare call is an assignment without a target.
"""
import re
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

KEYWORDS = ('print',)

_TOKEN = re.compile(r'''
    [ \t]*(?:
        (?P<int>-?[0-9]+)
      | (?P<str>"(?:[^"\\]|\\.)*")
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<op>[(),=])
      | (?P<comment>\#.*)
    )''', re.VERBOSE)


class ScriptError(Exception):
    """Base of every script failure. Carries the script line when known."""

    def __init__(self, message, line=None):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line is not None else message)

    def at(self, line):
        """Same error, located at line unless it already has a location."""
        if self.line is None:
            self.line = line
            self.args = (f"line {line}: {self.message}",)
        return self


class ScriptSyntaxError(ScriptError):
    def __init__(self, message, line=None, column=None):
        self.column = column
        super().__init__(message + (f" (column {column})" if column is not None else ''), line)


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class StrLit:
    value: str


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple['Expr', ...]


Expr = Union[IntLit, StrLit, VarRef, Call]


@dataclass(frozen=True)
class Assignment:
    target: Optional[str]
    expr: Expr
    line: int


@dataclass(frozen=True)
class Print:
    expr: Expr
    line: int


Statement = Union[Assignment, Print]


@dataclass(frozen=True)
class Script:
    statements: Tuple[Statement, ...]

    def __len__(self):
        return len(self.statements)


def _unquote(literal: str) -> str:
    return re.sub(r'\\(.)', r'\1', literal[1:-1])


def tokenize(line: str, line_no: int) -> List[Tuple[str, str, int]]:
    """(kind, text, column) triples of a single line; comments dropped."""
    tokens = []
    pos = 0
    while pos < len(line):
        if not line[pos:].strip():
            break
        match = _TOKEN.match(line, pos)
        if match is None or match.lastgroup is None:
            column = pos + len(line[pos:]) - len(line[pos:].lstrip()) + 1
            raise ScriptSyntaxError(f"unexpected character '{line[column - 1]}'", line_no, column)
        kind = match.lastgroup
        if kind == 'comment':
            break
        tokens.append((kind, match.group(kind), match.start(kind) + 1))
        pos = match.end()
    return tokens


class _LineParser(object):

    def __init__(self, tokens, line_no):
        self.tokens = tokens
        self.pos = 0
        self.line_no = line_no

    def peek(self, offset=0):
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def error(self, message):
        token = self.peek()
        return ScriptSyntaxError(message, self.line_no, token[2] if token else None)

    def take(self, kind=None, text=None):
        token = self.peek()
        if token is None:
            raise self.error("unexpected end of line" + (f", expected '{text}'" if text else ''))
        if (kind and token[0] != kind) or (text and token[1] != text):
            raise self.error(f"expected {text or kind}, found '{token[1]}'")
        self.pos += 1
        return token

    def at(self, kind, text=None):
        token = self.peek()
        return token is not None and token[0] == kind and (text is None or token[1] == text)

    def statement(self) -> Statement:
        if self.at('name', 'print'):
            self.take()
            expr = self.expr()
            self.end()
            return Print(expr, self.line_no)
        if self.at('name') and self.peek(1) is not None and self.peek(1)[1] == '=':
            target = self.take('name')[1]
            if target in KEYWORDS:
                raise self.error(f"'{target}' cannot be assigned")
            self.take('op', '=')
            expr = self.expr()
            self.end()
            return Assignment(target, expr, self.line_no)
        expr = self.expr()
        if not isinstance(expr, Call):
            raise ScriptSyntaxError("a statement must be a call, an assignment or a print", self.line_no, 1)
        self.end()
        return Assignment(None, expr, self.line_no)

    def end(self):
        if self.peek() is not None:
            raise self.error(f"unexpected '{self.peek()[1]}' after the statement")

    def expr(self) -> Expr:
        token = self.peek()
        if token is None:
            raise self.error("unexpected end of line, expected an expression")
        kind, text, _ = token
        if kind == 'int':
            self.take()
            return IntLit(int(text))
        if kind == 'str':
            self.take()
            return StrLit(_unquote(text))
        if kind == 'name':
            if text in KEYWORDS:
                raise self.error(f"'{text}' is not an expression")
            self.take()
            if self.at('op', '('):
                return Call(text, self.arguments())
            return VarRef(text)
        if text == '(':
            self.take()
            inner = self.expr()
            self.take('op', ')')
            return inner
        raise self.error(f"unexpected '{text}'")

    def arguments(self) -> Tuple[Expr, ...]:
        self.take('op', '(')
        args = []
        if self.at('op', ')'):
            self.take()
            return ()
        while True:
            args.append(self.expr())
            if self.at('op', ','):
                self.take()
                continue
            self.take('op', ')')
            return tuple(args)


def parse_script(text: str) -> Script:
    """Parse a script; syntax errors name the line. Unknown functions are only detected at run time.

    >>> s = parse_script('w = new_weighting(3)\\nprint w')
    >>> [type(x).__name__ for x in s.statements]
    ['Assignment', 'Print']
    """
    statements = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        tokens = tokenize(line, line_no)
        if tokens:
            statements.append(_LineParser(tokens, line_no).statement())
    return Script(tuple(statements))
