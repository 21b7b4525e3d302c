"""
Execution of analysis scripts. Every operation taking a representation dispatches on its kind:
CNF representations go to the solver-based reasoner, compiled ones to the d-DNNF queries.
Only the loading step differs between the two.
"""
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Optional, TextIO, Tuple

from cnf.formula import CnfFormula
from cnf.weighting import Weighting, WeightingError, new_weighting
from ddnnf.circuit import DdnnfCircuit
from ddnnf.compiler import compile as compile_circuit
from ddnnf.queries import count_models, enumerate_models, format_model, optimize as optimize_compiled
from ddnnf.sampling import sample_uniform
from ddnnf.topk import CONFIGURATIONS, VALUES, topk_transform
from dsl.parser import (Assignment, Call, IntLit, Print, Script, ScriptError, ScriptSyntaxError, StrLit, VarRef,
                        parse_script)
from featuremodel.model import NameMap
from solvers.direct import (OptResult, enumerate_direct, optimize_direct, topk_configs_direct,
                            topk_values_direct)
from solvers import new_solver
from utils.readers import read_circuit, read_formula
from utils.utils import NO_DEADLINE, Deadline, resolve_seed

log = logging.getLogger(__name__)


class ScriptTypeError(ScriptError):
    """An argument of the wrong kind, an unknown name, an invalid weight, or mismatched variable universes."""


class ArityError(ScriptError):
    pass


class UnsupportedOnRepresentation(ScriptError):
    """The operation needs a compiled representation."""


class ScriptFileNotFound(ScriptError):
    pass


@dataclass
class CnfRep:
    formula: CnfFormula
    names: Optional[NameMap] = None

    @property
    def num_vars(self):
        return self.formula.num_vars

    def __str__(self):
        return f"cnf {self.formula.num_vars} variables {len(self.formula.clauses)} clauses"


@dataclass
class DdnnfRep:
    circuit: DdnnfCircuit
    names: Optional[NameMap] = None

    @property
    def num_vars(self):
        return self.circuit.num_vars

    def __str__(self):
        return f"ddnnf {len(self.circuit.nodes)} nodes {self.circuit.num_vars} variables"


_KINDS = {
    'rep': (CnfRep, DdnnfRep),
    'cnf': (CnfRep,),
    'weighting': (Weighting,),
    'model': (tuple,),
    'int': (int,),
    'str': (str,),
}

# name -> (function, argument kinds, number of trailing optional arguments)
BUILTINS: Dict[str, Tuple[Callable, Tuple[str, ...], int]] = {}


def builtin(name, *kinds, optional=0):
    def register(fn):
        BUILTINS[name] = (fn, kinds, optional)
        return fn
    return register


def format_value(value) -> str:
    """Text of a value for print: models as literal lists, lists one entry per line."""
    if value is None:
        return 'UNSAT'
    if isinstance(value, tuple):
        return format_model(value)
    if isinstance(value, OptResult):
        return f"{value.value}\t{format_model(value.model)}"
    if isinstance(value, list):
        return '\n'.join(format_value(item) for item in value)
    if isinstance(value, Weighting):
        return ' '.join(f"{v}:{p}/{n}" for v, (p, n) in enumerate(zip(value.pos, value.neg), start=1))
    return str(value)


class Interpreter(object):
    """One environment per execution; statements run in order."""

    def __init__(self, out: TextIO = None, base_dir='.', seed: Optional[int] = None,
                 deadline: Deadline = NO_DEADLINE, algorithm: str = 'cdcl'):
        self.out = out if out is not None else sys.stdout
        self.base_dir = Path(base_dir)
        self.seed = resolve_seed(seed)
        self.deadline = deadline
        self.algorithm = algorithm
        self.env = {}

    def run(self, script: Script):
        for statement in script.statements:
            try:
                value = self.eval(statement.expr)
            except ScriptError as e:
                raise e.at(statement.line)
            if isinstance(statement, Print):
                self.out.write(format_value(value) + '\n')
            elif isinstance(statement, Assignment) and statement.target is not None:
                self.env[statement.target] = value
        return 0

    def eval(self, expr):
        if isinstance(expr, (IntLit, StrLit)):
            return expr.value
        if isinstance(expr, VarRef):
            if expr.name not in self.env:
                raise ScriptTypeError(f"undefined variable '{expr.name}'")
            return self.env[expr.name]
        if isinstance(expr, Call):
            return self.call(expr.name, [self.eval(arg) for arg in expr.args])
        raise ScriptSyntaxError(f"cannot evaluate {expr!r}")

    def call(self, name, args):
        if name not in BUILTINS:
            raise ScriptTypeError(f"unknown function '{name}'")
        fn, kinds, optional = BUILTINS[name]
        if not len(kinds) - optional <= len(args) <= len(kinds):
            expected = len(kinds) if not optional else f"{len(kinds) - optional} to {len(kinds)}"
            raise ArityError(f"{name}() takes {expected} arguments, got {len(args)}")
        for position, (kind, value) in enumerate(zip(kinds, args), start=1):
            if not isinstance(value, _KINDS[kind]) or isinstance(value, bool):
                raise ScriptTypeError(f"argument {position} of {name}() must be a {kind}, "
                                      f"got {type(value).__name__}")
        log.debug('Calling %s with %d arguments', name, len(args))
        try:
            return fn(self, *args)
        except WeightingError as e:
            raise ScriptTypeError(f"{name}(): {e}") from e

    def resolve(self, path: str) -> Path:
        resolved = Path(path)
        return resolved if resolved.is_absolute() else self.base_dir / resolved


def _direction(direction):
    if direction not in ('min', 'max'):
        raise ScriptTypeError(f"direction must be \"min\" or \"max\", got \"{direction}\"")
    return direction


def _positive(k, what='k'):
    if k < 1:
        raise ScriptTypeError(f"{what} must be positive, got {k}")
    return k


def _same_universe(rep, w: Weighting):
    if w.num_vars != rep.num_vars:
        raise ScriptTypeError(f"weighting covers {w.num_vars} variables, representation has {rep.num_vars}")


def _load(loader, path):
    try:
        return loader(path)
    except FileNotFoundError as e:
        raise ScriptFileNotFound(str(e))


@builtin('load_cnf', 'str')
def load_cnf(interp, path):
    return CnfRep(*_load(read_formula, interp.resolve(path)))


@builtin('load_fm', 'str')
def load_fm(interp, path):
    if not str(path).lower().endswith('.fm'):
        raise ScriptTypeError(f"load_fm expects a .fm file, got \"{path}\"")
    return CnfRep(*_load(read_formula, interp.resolve(path)))


@builtin('load_ddnnf', 'str')
def load_ddnnf(interp, path):
    return DdnnfRep(_load(read_circuit, interp.resolve(path)))


@builtin('compile', 'cnf')
def compile_rep(interp, rep):
    return DdnnfRep(compile_circuit(rep.formula, deadline=interp.deadline), rep.names)


@builtin('count', 'rep')
def count(interp, rep):
    if isinstance(rep, CnfRep):
        raise UnsupportedOnRepresentation("count() requires a compiled representation; use compile() first")
    return count_models(rep.circuit)


@builtin('sat', 'rep')
def sat(interp, rep):
    if isinstance(rep, CnfRep):
        return new_solver(rep.formula, interp.algorithm, deadline=interp.deadline).solve()
    return next(iter(enumerate_models(rep.circuit, 1)), None)


@builtin('enumerate', 'rep', 'int')
def enumerate_rep(interp, rep, k):
    _positive(k)
    if isinstance(rep, CnfRep):
        return enumerate_direct(rep.formula, k, interp.algorithm, deadline=interp.deadline)
    return list(enumerate_models(rep.circuit, k))


@builtin('sample', 'rep', 'int', 'int', optional=1)
def sample(interp, rep, k, seed=None):
    if isinstance(rep, CnfRep):
        raise UnsupportedOnRepresentation("sample() requires a compiled representation; use compile() first")
    _positive(k)
    return sample_uniform(rep.circuit, k, seed=interp.seed if seed is None else seed, deadline=interp.deadline)


@builtin('new_weighting', 'int', 'int', 'int', optional=2)
def new_weighting_(interp, n, default_pos=0, default_neg=0):
    return new_weighting(_positive(n, 'the number of variables'), default_pos, default_neg)


@builtin('set_default_positive_weight', 'weighting', 'int')
def set_default_positive_weight(interp, w, value):
    w.set_default_positive(value)
    return w


@builtin('set_default_negative_weight', 'weighting', 'int')
def set_default_negative_weight(interp, w, value):
    w.set_default_negative(value)
    return w


@builtin('set_weight', 'weighting', 'int', 'int', 'int')
def set_weight(interp, w, var, pos, neg):
    w.set_weight(var, pos, neg)
    return w


@builtin('get_weight', 'weighting', 'model')
def get_weight(interp, w, model):
    return w.value(model)


@builtin('optimize', 'rep', 'weighting', 'str')
def optimize(interp, rep, w, direction):
    _same_universe(rep, w)
    if isinstance(rep, CnfRep):
        best = optimize_direct(rep.formula, w, _direction(direction), algorithm=interp.algorithm,
                               deadline=interp.deadline)
    else:
        best = optimize_compiled(rep.circuit, w, _direction(direction), deadline=interp.deadline)
    return None if best is None else best.model


@builtin('top_k_values', 'rep', 'weighting', 'int', 'str')
def top_k_values(interp, rep, w, k, direction):
    _same_universe(rep, w)
    _positive(k)
    if isinstance(rep, CnfRep):
        return topk_values_direct(rep.formula, w, k, _direction(direction), interp.algorithm,
                                  deadline=interp.deadline)
    return topk_transform(rep.circuit, w, k, _direction(direction), VALUES, deadline=interp.deadline).values()


@builtin('top_k_configs', 'rep', 'weighting', 'int', 'str')
def top_k_configs(interp, rep, w, k, direction):
    _same_universe(rep, w)
    _positive(k)
    if isinstance(rep, CnfRep):
        return topk_configs_direct(rep.formula, w, k, _direction(direction), algorithm=interp.algorithm,
                                   deadline=interp.deadline)
    ranked = topk_transform(rep.circuit, w, k, _direction(direction), CONFIGURATIONS, deadline=interp.deadline)
    return [OptResult(model, value) for value, model in ranked.entries]


def execute_script(script: Script, io: TextIO = None, base_dir='.', seed: Optional[int] = None,
                   deadline: Deadline = NO_DEADLINE, algorithm: str = 'cdcl') -> int:
    """Run a parsed script, printing to io. Returns 0; failures raise ScriptError subclasses
    (or the underlying input/analysis error)."""
    return Interpreter(io, base_dir, seed, deadline, algorithm).run(script)


def run_script(text: str, io: TextIO = None, base_dir='.', seed: Optional[int] = None,
               deadline: Deadline = NO_DEADLINE) -> int:
    return execute_script(parse_script(text), io, base_dir, seed, deadline)
