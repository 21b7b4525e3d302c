from .circuit import (DdnnfCircuit, CircuitBuilder, LiteralNode, TrueNode, FalseNode, AndNode, DecisionNode, OrNode,
                      CircuitFormatError, NotDecisionDnnfError, evaluate_circuit)
from .validation import validate, ValidationReport, Violation, CircuitValidationError
from .formats import parse_canonical, write_canonical, parse_c2d_nnf, write_c2d_nnf
from .compiler import Compiler, CompilerStats, CompilationLimitExceeded, compile
from .queries import (is_consistent, count_models, commonality, enumerate_models, optimize, format_model,
                      InconsistentCircuitError, INFEASIBLE)
from .sampling import sample_uniform
from .topk import topk_transform, format_topk, TopKList
