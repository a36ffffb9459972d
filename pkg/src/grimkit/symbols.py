"""Builtin symbol table.

Every builtin is exported as a module-level :class:`Symbol`, so formulas
can be written in Python directly::

    from grimkit.symbols import *
    Equal(Sin(2 * x), 2 * Sin(x) * Cos(x))

Symbols outside the table are legal; they are free variables or
uninterpreted heads.
"""

from dataclasses import dataclass

from .expr import Symbol

_CATEGORIES = {
    "logic": "And Or Not Equal NotEqual Implies",
    "order": "Less LessEqual Greater GreaterEqual",
    "arithmetic": "Add Sub Mul Div Neg Pos Pow Sqrt Abs Re Im",
    "function": "Exp Log Sin Cos",
    "constant": "Pi ConstE ConstI Undefined Infinity True_ False_",
    "set": ("ZZ QQ RR CC ZZGreaterEqual ZZLessEqual OpenInterval ClosedInterval "
            "Set SetMinus Union Intersection Element NotElement Subset HH SL2Z"),
    "structure": "Tuple Matrix2x2 Cases Otherwise CongruentMod",
    "binding": "For ForElement Where Def Sum",
    "metadata": "Entry ID Formula Variables Assumptions References Description Topics",
    "content": ("EisensteinG LambertW BernoulliB Hypergeometric2F1 Hypergeometric1F1 "
                "DedekindEta Gamma Zeros"),
}


@dataclass(frozen=True)
class SymbolInfo:
    name: str
    category: str
    symbol: Symbol


SYMBOL_TABLE = {}
for _cat, _names in _CATEGORIES.items():
    for _n in _names.split():
        assert _n not in SYMBOL_TABLE, _n
        SYMBOL_TABLE[_n] = SymbolInfo(_n, _cat, Symbol(_n))
        globals()[_n] = SYMBOL_TABLE[_n].symbol

__all__ = sorted(SYMBOL_TABLE)

# set-valued heads and constants
SET_HEADS = frozenset(
    "ZZ QQ RR CC ZZGreaterEqual ZZLessEqual OpenInterval ClosedInterval Set "
    "SetMinus Union Intersection HH SL2Z".split())

# heads whose value is a truth value
PREDICATE_HEADS = frozenset(
    "And Or Not Implies Equal NotEqual Less LessEqual Greater GreaterEqual "
    "Element NotElement Subset CongruentMod".split())


def lookup(name):
    """SymbolInfo for a builtin name; KeyError if not builtin."""
    return SYMBOL_TABLE[name]


def is_builtin(sym):
    return isinstance(sym, Symbol) and sym.name in SYMBOL_TABLE
