from pathlib import Path

try:
    from ruamel_yaml import YAML
except ImportError:
    from ruamel.yaml import YAML

from utils.verifications import validate_input_file


def read_parameters(param_file):
    """Read and return parameters in .yaml file
    Args:
        param_file: Full file path of the parameters file
    Returns:
        YAML (Ruamel) CommentedMap dict-like object
    """
    yaml = YAML()
    with open(param_file) as yamlfile:
        params = yaml.load(yamlfile)
    return params


def read_text(path):
    """Read a UTF-8 input file. Missing files raise FileNotFoundError naming the path."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Could not locate input file '{path}'")
    return path.read_text(encoding='utf-8')


def read_formula(path):
    """Load a propositional input as (CnfFormula, NameMap or None).
    Feature models (.fm) are encoded on the fly; DIMACS files keep their 'c <index> <name>' comments when present.
    """
    from cnf.dimacs import parse_dimacs, parse_dimacs_names
    from featuremodel.encoding import NameMap, encode_fm
    from featuremodel.parser import parse_fm

    kind = validate_input_file(path, 'fm', 'cnf')
    text = read_text(path)
    if kind == 'fm':
        return encode_fm(parse_fm(text))
    formula = parse_dimacs(text)
    names = parse_dimacs_names(text)
    return formula, NameMap.from_dict(names) if names else None


def read_circuit(path, strict=True, validate=True):
    """Load a d-DNNF circuit from the canonical (.ddnnf) or c2d (.nnf) format."""
    from ddnnf.formats import parse_c2d_nnf, parse_canonical

    kind = validate_input_file(path, 'ddnnf', 'c2d')
    text = read_text(path)
    if kind == 'ddnnf':
        return parse_canonical(text, validate=validate)
    return parse_c2d_nnf(text, strict=strict, validate=validate)
