from .formula import (CnfFormula, CnfError, Truth, evaluate, brute_force_models, blocking_clause,
                      model_from_assignment, as_assignment, var_of)
from .dimacs import parse_dimacs, write_dimacs, parse_dimacs_names, DimacsError
from .weighting import (Weighting, WeightingError, new_weighting, set_weight, model_value, random_weighting,
                        parse_weights, write_weights)
