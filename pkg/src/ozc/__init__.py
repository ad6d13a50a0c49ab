"""ozc: compiles a textual Object-Z dialect into contract-checked Python."""

from .codegen import EmitOptions, TOOL_VERSION as __version__, transpile
from .diagnostics import Diagnostic, SourceSpan
from .lexer import tokenize
from .parser import ParseResult, parse, parse_source
from .printer import print_predicate, print_specification
from .sema import check_specification, classify_operation, plan_secondary_updates, resolve

__all__ = [
    "Diagnostic",
    "EmitOptions",
    "ParseResult",
    "SourceSpan",
    "__version__",
    "check_specification",
    "classify_operation",
    "parse",
    "parse_source",
    "plan_secondary_updates",
    "print_predicate",
    "print_specification",
    "resolve",
    "tokenize",
    "transpile",
]
