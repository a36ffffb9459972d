"""grimkit: a symbolic kernel and toolchain for a database of mathematical formulas."""

from .db import Database, EntryRecord, ValidationError, load, load_default, loads
from .evaluate import Context, Truth, check_truth, derive_facts, evaluate
from .expr import Call, Expr, Int, Symbol, Text, free_variables, serialize, substitute
from .latex import to_latex
from .numeric import Enclosure, Ordering, compare, enclose
from .parser import ParseError, parse, parse_file
from .rewrite import apply_entry, rewrite_once, search_rewrites
from .tester import TestConfig, test_database, test_entry

__version__ = "0.1.0"

__all__ = [
    "Expr", "Int", "Text", "Symbol", "Call", "serialize", "substitute", "free_variables",
    "parse", "parse_file", "ParseError", "to_latex", "enclose", "compare", "Enclosure",
    "Ordering", "evaluate", "check_truth", "derive_facts", "Context", "Truth",
    "Database", "EntryRecord", "ValidationError", "load", "loads", "load_default",
    "TestConfig", "test_entry", "test_database", "apply_entry", "rewrite_once",
    "search_rewrites",
]
