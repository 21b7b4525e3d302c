from .parser import (parse_script, tokenize, Script, Assignment, Print, Call, VarRef, IntLit, StrLit, ScriptError,
                     ScriptSyntaxError)
from .interpreter import (execute_script, run_script, Interpreter, CnfRep, DdnnfRep, BUILTINS, format_value,
                          ScriptTypeError, ArityError, UnsupportedOnRepresentation, ScriptFileNotFound)
