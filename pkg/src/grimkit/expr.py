"""Immutable Grim expression trees.

An expression is an integer atom, a text atom, a symbol atom, or a call
``head(args...)``. Nothing is ever simplified at construction time:
``Mul(2, Add(a, b))`` stays exactly as written until it is evaluated.
"""

import re

__all__ = [
    "Expr", "Int", "Text", "Symbol", "Call",
    "expr", "make_call", "structural_equal", "serialize",
    "substitute", "free_variables", "subexpressions", "replace_at",
]

_SYMBOL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def expr(x):
    """Coerce a Python value to an expression (int -> Int, str -> Text)."""
    if isinstance(x, Expr):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a Grim value; use True_ / False_")
    if isinstance(x, int):
        return Int(x)
    if isinstance(x, str):
        return Text(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Expr")


class Expr:
    __slots__ = ("_hash",)

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")

    def __delattr__(self, name):
        raise AttributeError("expressions are immutable")

    def __repr__(self):
        return serialize(self)

    __str__ = __repr__

    def __ne__(self, other):
        return not self == other

    # operator sugar; the same trees the parser produces
    def __add__(self, other):
        return Call(_sym("Add"), (self, expr(other)))

    def __radd__(self, other):
        return Call(_sym("Add"), (expr(other), self))

    def __sub__(self, other):
        return Call(_sym("Sub"), (self, expr(other)))

    def __rsub__(self, other):
        return Call(_sym("Sub"), (expr(other), self))

    def __mul__(self, other):
        return Call(_sym("Mul"), (self, expr(other)))

    def __rmul__(self, other):
        return Call(_sym("Mul"), (expr(other), self))

    def __truediv__(self, other):
        return Call(_sym("Div"), (self, expr(other)))

    def __rtruediv__(self, other):
        return Call(_sym("Div"), (expr(other), self))

    def __pow__(self, other):
        return Call(_sym("Pow"), (self, expr(other)))

    def __rpow__(self, other):
        return Call(_sym("Pow"), (expr(other), self))

    def __neg__(self):
        return Call(_sym("Neg"), (self,))

    def __pos__(self):
        return Call(_sym("Pos"), (self,))

    is_atom = True

    @property
    def is_call(self):
        return not self.is_atom


class Int(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError("Int atom needs an int")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "_hash", hash(("Int", value)))

    def __eq__(self, other):
        return isinstance(other, Int) and other.value == self.value

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (Int, (self.value,))


class Text(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        if not isinstance(value, str):
            raise TypeError("Text atom needs a str")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "_hash", hash(("Text", value)))

    def __eq__(self, other):
        return isinstance(other, Text) and other.value == self.value

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (Text, (self.value,))


class Symbol(Expr):
    __slots__ = ("name",)

    def __init__(self, name):
        if not isinstance(name, str) or not _SYMBOL_RE.match(name):
            raise ValueError(f"invalid symbol name: {name!r}")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", hash(("Symbol", name)))

    def __eq__(self, other):
        return isinstance(other, Symbol) and other.name == self.name

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (Symbol, (self.name,))

    def __call__(self, *args):
        return Call(self, tuple(expr(a) for a in args))


class Call(Expr):
    __slots__ = ("head", "args")
    is_atom = False

    def __init__(self, head, args=()):
        head = expr(head) if not isinstance(head, Expr) else head
        args = tuple(args)
        for a in args:
            if not isinstance(a, Expr):
                raise TypeError(f"call argument is not an Expr: {a!r}")
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "_hash", hash(("Call", head, args)))

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, Call) and other._hash == self._hash
                and other.head == self.head and other.args == self.args)

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (Call, (self.head, self.args))

    def __call__(self, *args):
        return Call(self, tuple(expr(a) for a in args))

    def head_is(self, name):
        return isinstance(self.head, Symbol) and self.head.name == name


def _sym(name, _cache={}):
    s = _cache.get(name)
    if s is None:
        s = _cache[name] = Symbol(name)
    return s


def make_call(head, args):
    """Build ``head(args...)`` verbatim."""
    return Call(expr(head), [expr(a) for a in args])


def structural_equal(a, b):
    return a == b


def head_name(e):
    """Name of a call's symbol head, or None."""
    if isinstance(e, Call) and isinstance(e.head, Symbol):
        return e.head.name
    return None


def _quote(s):
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def serialize(e):
    """Canonical text form, function-call notation only."""
    parts = []
    _serialize_into(e, parts)
    return "".join(parts)


def _serialize_into(e, out):
    if isinstance(e, Int):
        out.append(str(e.value))
    elif isinstance(e, Symbol):
        out.append(e.name)
    elif isinstance(e, Text):
        out.append(_quote(e.value))
    else:
        _serialize_into(e.head, out)
        out.append("(")
        for i, a in enumerate(e.args):
            if i:
                out.append(", ")
            _serialize_into(a, out)
        out.append(")")


# ---------------------------------------------------------------------------
# scoping

_BINDER_SLOTS = ("For", "ForElement")


def _binder_vars(args):
    """Variables introduced by For/ForElement arguments of a call."""
    bound = set()
    for a in args:
        if head_name(a) in _BINDER_SLOTS and a.args and isinstance(a.args[0], Symbol):
            bound.add(a.args[0])
    return bound


def _def_parts(d):
    """Split Def(lhs, rhs) into (defined name, formal args, rhs)."""
    if head_name(d) != "Def" or len(d.args) != 2:
        return None
    lhs, rhs = d.args
    if isinstance(lhs, Symbol):
        return lhs, (), rhs
    if isinstance(lhs, Call) and isinstance(lhs.head, Symbol):
        formals = tuple(a for a in lhs.args if isinstance(a, Symbol))
        return lhs.head, formals, rhs
    return None


def substitute(e, mapping):
    """Replace free occurrences of symbols according to ``mapping``."""
    if not mapping:
        return e
    mapping = {expr(k) if not isinstance(k, Expr) else k: expr(v)
               for k, v in mapping.items()}
    return _subst(e, mapping)


def _subst(e, m):
    if isinstance(e, Symbol):
        return m.get(e, e)
    if not isinstance(e, Call):
        return e
    name = head_name(e)
    if name == "Where" and e.args:
        defs = [_def_parts(d) for d in e.args[1:]]
        defined = {p[0] for p in defs if p is not None}
        inner = {k: v for k, v in m.items() if k not in defined}
        body = _subst(e.args[0], inner)
        new_defs = []
        for d, parts in zip(e.args[1:], defs):
            if parts is None:
                new_defs.append(_subst(d, inner))
                continue
            _, formals, rhs = parts
            rm = {k: v for k, v in inner.items() if k not in formals}
            new_defs.append(Call(d.head, (d.args[0], _subst(rhs, rm))))
        return Call(e.head, (body, *new_defs))
    bound = _binder_vars(e.args)
    head = _subst(e.head, m)
    if not bound:
        return Call(head, tuple(_subst(a, m) for a in e.args))
    inner = {k: v for k, v in m.items() if k not in bound}
    new_args = []
    for a in e.args:
        if head_name(a) in _BINDER_SLOTS and a.args and a.args[0] in bound:
            # binder slot untouched; range/set expressions live in the outer scope
            new_args.append(Call(a.head, (a.args[0], *(_subst(x, m) for x in a.args[1:]))))
        else:
            new_args.append(_subst(a, inner))
    return Call(head, tuple(new_args))


def free_variables(e):
    """Free symbol atoms of ``e`` that are not builtin symbols."""
    from .symbols import is_builtin
    out = set()
    _collect_free(e, frozenset(), out)
    return {s for s in out if not is_builtin(s)}


def _collect_free(e, bound, out):
    if isinstance(e, Symbol):
        if e not in bound:
            out.add(e)
        return
    if not isinstance(e, Call):
        return
    name = head_name(e)
    if name == "Where" and e.args:
        defs = [_def_parts(d) for d in e.args[1:]]
        defined = frozenset(p[0] for p in defs if p is not None)
        _collect_free(e.head, bound, out)
        _collect_free(e.args[0], bound | defined, out)
        for d, parts in zip(e.args[1:], defs):
            if parts is None:
                _collect_free(d, bound | defined, out)
            else:
                _, formals, rhs = parts
                _collect_free(rhs, bound | defined | frozenset(formals), out)
        return
    _collect_free(e.head, bound, out)
    binders = _binder_vars(e.args)
    inner = bound | binders
    for a in e.args:
        if head_name(a) in _BINDER_SLOTS and a.args and a.args[0] in binders:
            for x in a.args[1:]:
                _collect_free(x, bound, out)
        else:
            _collect_free(a, inner, out)


def subexpressions(e, path=()):
    """Pre-order walk yielding (path, subexpression); paths index call args."""
    yield path, e
    if isinstance(e, Call):
        for i, a in enumerate(e.args):
            yield from subexpressions(a, path + (i,))


def replace_at(e, path, new):
    if not path:
        return new
    i = path[0]
    args = list(e.args)
    args[i] = replace_at(args[i], path[1:], new)
    return Call(e.head, tuple(args))
