"""
Command-line front-end: encode feature models, compile them, and run analyses either directly on the
CNF (solver-based) or on the compiled d-DNNF circuit.

Exit codes: 0 success, 1 usage error, 2 analysis failure or timeout, 3 input error.
"""
import argparse
import logging
import sys
from pathlib import Path

from cnf.dimacs import write_dimacs
from cnf.weighting import new_weighting, parse_weights
from ddnnf.circuit import NotDecisionDnnfError
from ddnnf.compiler import CompilationLimitExceeded, compile as compile_circuit
from ddnnf.formats import write_c2d_nnf, write_canonical
from ddnnf.queries import InconsistentCircuitError, count_models, enumerate_models, format_model, optimize
from ddnnf.sampling import sample_uniform
from ddnnf.topk import CONFIGURATIONS, VALUES, format_topk, topk_transform
from ddnnf.validation import validate
from dsl.interpreter import UnsupportedOnRepresentation, execute_script
from dsl.parser import ScriptError, parse_script
from solvers import ALGORITHMS, new_solver
from solvers.direct import (BudgetExceeded, enumerate_direct, optimize_direct, topk_configs_direct,
                            topk_values_direct)
from utils.readers import read_circuit, read_formula, read_parameters, read_text
from utils.utils import Deadline, DeadlineExceeded, instance_kind, resolve_seed

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_ANALYSIS, EXIT_INPUT = 0, 1, 2, 3

COMMANDS = ('encode', 'compile', 'count', 'sat', 'enum', 'sample', 'opt', 'topk-values', 'topk-configs', 'run',
            'bench', 'validate')
# commands that only exist on the compiled representation
COMPILED_ONLY = ('count', 'sample', 'validate')


class UsageError(Exception):
    pass


class CliParser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; usage errors here exit with 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> CliParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--input', '-i', required=True, help='Input file (.fm, .cnf, .ddnnf, .nnf, .win, .yaml)')
    common.add_argument('--mode', choices=('direct', 'compiled'), default=None,
                        help='Reason on the CNF (direct) or on the compiled circuit (compiled)')
    common.add_argument('--k', type=int, default=None, help='Number of models / values / samples')
    common.add_argument('--weights', default=None, help='Weights file; unit positive weights when omitted')
    common.add_argument('--dir', choices=('min', 'max'), default='min', help='Optimization direction')
    common.add_argument('--seed', type=int, default=None, help='Random seed (falls back to FMREASON_SEED)')
    common.add_argument('--timeout', type=float, default=None, help='Time budget in seconds')
    common.add_argument('--out', default=None, help='Output file instead of standard output')
    common.add_argument('--algorithm', choices=ALGORITHMS, default='cdcl', help='SAT algorithm of the direct mode')
    common.add_argument('--verbose', '-v', action='store_true', help='Debug logging on stderr')

    parser = CliParser(prog='fm_reason', description='Feature-model reasoning on CNF and d-DNNF')
    subparsers = parser.add_subparsers(dest='command', metavar='command', parser_class=CliParser)
    subparsers.required = True
    helps = {'encode': 'Encode a feature model as DIMACS CNF',
             'compile': 'Compile to d-DNNF (.nnf output path gives the c2d format)',
             'count': 'Count configurations', 'sat': 'Find one configuration',
             'enum': 'Enumerate configurations', 'sample': 'Draw uniform configurations',
             'opt': 'Optimal configuration', 'topk-values': 'k best objective values',
             'topk-configs': 'k best configurations', 'run': 'Execute an analysis script',
             'bench': 'Run the benchmark described by a yaml file', 'validate': 'Check a d-DNNF circuit'}
    for command in COMMANDS:
        subparsers.add_parser(command, parents=[common], help=helps[command])
    return parser


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text, encoding='utf-8')
    else:
        sys.stdout.write(text)


def _mode(args, kind):
    if args.mode is not None:
        return args.mode
    if args.command in COMPILED_ONLY or kind in ('c2d', 'ddnnf'):
        return 'compiled'
    return 'direct'


def load_representation(args, deadline):
    """(mode, formula or circuit) for the requested mode, compiling formulas when needed."""
    kind = instance_kind(args.input)
    mode = _mode(args, kind)
    if kind in ('c2d', 'ddnnf'):
        if mode == 'direct':
            raise UsageError(f"'{args.input}' is a compiled circuit; the direct mode needs a .fm or .cnf input")
        return mode, read_circuit(args.input)
    if kind not in ('fm', 'cnf'):
        raise UsageError(f"'{args.input}' is a {kind} file, expected a feature model, CNF or circuit")
    formula, _ = read_formula(args.input)
    if mode == 'compiled':
        return mode, compile_circuit(formula, deadline=deadline)
    return mode, formula


def load_weighting(args, num_vars):
    if args.weights is None:
        return new_weighting(num_vars, 1, 0)
    return parse_weights(read_text(args.weights), num_vars)


def run_command(args) -> int:
    deadline = Deadline(args.timeout)
    seed = resolve_seed(args.seed)

    if args.command == 'run':
        script = parse_script(read_text(args.input))
        return execute_script(script, sys.stdout, Path(args.input).parent, seed, deadline, args.algorithm)
    if args.command == 'bench':
        import benchmark
        benchmark.main(read_parameters(args.input), args.seed)
        return EXIT_OK
    if args.command == 'encode':
        formula, names = read_formula(args.input)
        _emit(args, write_dimacs(formula, names.as_dict() if names is not None else None))
        return EXIT_OK
    if args.command == 'validate':
        report = validate(read_circuit(args.input, strict=False, validate=False), strict=False)
        _emit(args, f"{report}\n")
        return EXIT_OK if report.valid else EXIT_ANALYSIS
    if args.command == 'count' and args.mode == 'direct':
        raise UsageError("count is only available in compiled mode")
    if args.command == 'sample' and args.mode == 'direct':
        raise UsageError("sample is only available in compiled mode")
    if args.command == 'compile':
        args.mode = 'compiled'

    mode, rep = load_representation(args, deadline)
    log.debug('Running %s in %s mode', args.command, mode)
    k = args.k
    if k is not None and k < 1:
        raise UsageError(f"--k must be positive, got {k}")

    if args.command == 'compile':
        text = write_c2d_nnf(rep) if args.out and args.out.endswith('.nnf') else write_canonical(rep)
        _emit(args, text)
    elif args.command == 'count':
        _emit(args, f"{count_models(rep)}\n")
    elif args.command == 'sat':
        if mode == 'direct':
            model = new_solver(rep, args.algorithm, deadline=deadline).solve()
        else:
            model = next(iter(enumerate_models(rep, 1)), None)
        _emit(args, format_model(model) + '\n')
    elif args.command == 'enum':
        if mode == 'direct':
            models = enumerate_direct(rep, k, args.algorithm, deadline)
        else:
            models = enumerate_models(rep, k)
        _emit(args, ''.join(format_model(m) + '\n' for m in models))
    elif args.command == 'sample':
        samples = sample_uniform(rep, k or 1, seed=seed, deadline=deadline)
        _emit(args, ''.join(format_model(m) + '\n' for m in samples))
    elif args.command == 'opt':
        w = load_weighting(args, rep.num_vars)
        if mode == 'direct':
            best = optimize_direct(rep, w, args.dir, algorithm=args.algorithm, deadline=deadline)
        else:
            best = optimize(rep, w, args.dir, deadline)
        _emit(args, 'UNSAT\n' if best is None else f"{best.value}\n{format_model(best.model)}\n")
    elif args.command == 'topk-values':
        w = load_weighting(args, rep.num_vars)
        if mode == 'direct':
            values = topk_values_direct(rep, w, k or 1, args.dir, args.algorithm, deadline)
            _emit(args, ''.join(f"{v}\n" for v in values))
        else:
            _emit(args, format_topk(topk_transform(rep, w, k or 1, args.dir, VALUES, deadline)))
    elif args.command == 'topk-configs':
        w = load_weighting(args, rep.num_vars)
        if mode == 'direct':
            results = topk_configs_direct(rep, w, k or 1, args.dir, algorithm=args.algorithm, deadline=deadline)
            _emit(args, ''.join(f"{r.value}\t{format_model(r.model)}\n" for r in results))
        else:
            _emit(args, format_topk(topk_transform(rep, w, k or 1, args.dir, CONFIGURATIONS, deadline)))
    return EXIT_OK


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    try:
        return run_command(args)
    except (UsageError, UnsupportedOnRepresentation, NotDecisionDnnfError) as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except (DeadlineExceeded, CompilationLimitExceeded, BudgetExceeded, InconsistentCircuitError, RecursionError) as e:
        sys.stderr.write(f"analysis failed: {e}\n")
        return EXIT_ANALYSIS
    except (ScriptError, OSError, ValueError) as e:
        sys.stderr.write(f"input error: {e}\n")
        return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(cli_main())
