"""The formula database: loading, validation and indexes.

A database file holds top-level ``Entry(...)`` expressions::

    Entry(ID("0b5b04"),
        Formula(Equal(...)),
        Variables(k, tau),
        Assumptions(Element(k, ZZGreaterEqual(2))),
        References("..."),
        Topics("Modular forms"))

A directory is read as the concatenation of its ``*.grim`` files in sorted
filename order.
"""

import os
import random
import re
from dataclasses import dataclass, field
from importlib import resources

from .expr import Call, Symbol, Text, free_variables, head_name, serialize, subexpressions
from .parser import ParseError, parse_file
from .symbols import PREDICATE_HEADS

__all__ = ["EntryRecord", "Database", "ValidationError", "NotFound",
           "load", "loads", "dump", "format_entry", "new_id", "default_db_path",
           "load_default"]

ID_RE = re.compile(r"[0-9a-f]{6}\Z")

# binders outside the implemented scoping rules; accepting them would mis-scope
UNSUPPORTED_BINDERS = frozenset(
    "Integral Derivative Limit SequenceLimit RealLimit ComplexLimit LeftLimit "
    "RightLimit Product Minimum Maximum Supremum Infimum Solutions "
    "ComplexDerivative RealDerivative".split())

_METADATA = ("ID", "Formula", "Variables", "Assumptions", "References", "Topics", "Description")


class NotFound(KeyError):
    pass


class ValidationError(Exception):
    """All problems found while loading; ``errors`` is a list of (where, reason)."""

    def __init__(self, errors):
        self.errors = list(errors)
        lines = [f"{where}: {reason}" for where, reason in self.errors]
        super().__init__(f"{len(self.errors)} validation error(s):\n" + "\n".join(lines))


@dataclass(frozen=True)
class EntryRecord:
    id: str
    formula: object
    variables: tuple = ()
    assumptions: object = Symbol("True_")
    references: tuple = ()
    topics: tuple = ()
    description: str = ""

    def to_expr(self):
        items = [Call(Symbol("ID"), (Text(self.id),)),
                 Call(Symbol("Formula"), (self.formula,)),
                 Call(Symbol("Variables"), tuple(self.variables))]
        if self.assumptions != Symbol("True_"):
            items.append(Call(Symbol("Assumptions"), (self.assumptions,)))
        if self.references:
            items.append(Call(Symbol("References"), tuple(Text(r) for r in self.references)))
        if self.topics:
            items.append(Call(Symbol("Topics"), tuple(Text(t) for t in self.topics)))
        if self.description:
            items.append(Call(Symbol("Description"), (Text(self.description),)))
        return Call(Symbol("Entry"), tuple(items))

    @property
    def head(self):
        """Outermost head of the formula's left-hand side (or of the formula)."""
        return formula_head(self.formula)


def formula_head(f):
    target = f
    if head_name(f) == "Equal" and f.args:
        target = f.args[0]
    if isinstance(target, Call):
        return target.head if isinstance(target.head, Symbol) else None
    return target if isinstance(target, Symbol) else None


# operators too generic to find rules by; their operands' heads are indexed too
_ARITHMETIC = frozenset("Add Sub Mul Div Neg Pos Pow".split())


def index_heads(f):
    """Heads an entry is filed under: the outermost head first, then for an
    arithmetic operator the heads of its call operands (Sin for Sin(a)*Sin(b))."""
    h = formula_head(f)
    if h is None:
        return []
    heads = [h]
    side = f.args[0] if head_name(f) == "Equal" and f.args else f
    if h.name in _ARITHMETIC and isinstance(side, Call):
        for a in side.args:
            sub = head_name(a)
            if sub is not None and Symbol(sub) not in heads:
                heads.append(Symbol(sub))
    return heads


@dataclass
class Database:
    entries: tuple = ()
    _by_id: dict = field(default_factory=dict, repr=False)
    _by_head: dict = field(default_factory=dict, repr=False)
    _by_topic: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.entries = tuple(self.entries)
        for e in self.entries:
            self._by_id[e.id] = e
            for h in index_heads(e.formula):
                self._by_head.setdefault(h, []).append(e)
            for t in e.topics:
                self._by_topic.setdefault(t, []).append(e)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, entry_id):
        return entry_id in self._by_id

    def lookup(self, entry_id):
        try:
            return self._by_id[entry_id]
        except KeyError:
            raise NotFound(entry_id) from None

    def entries_for_head(self, head):
        if isinstance(head, str):
            head = Symbol(head)
        return list(self._by_head.get(head, ()))

    def topics(self):
        return sorted(self._by_topic)

    def entries_for_topic(self, topic):
        return list(self._by_topic.get(topic, ()))


def _record_from_expr(e, where):
    """(EntryRecord or None, list of errors)."""
    errors = []
    if head_name(e) != "Entry":
        return None, [(where, f"top-level expression is not an Entry: {serialize(e)[:60]}")]
    fields = {}
    for item in e.args:
        name = head_name(item)
        if name not in _METADATA:
            errors.append((where, f"unknown entry item {serialize(item)[:40]}"))
            continue
        if name in fields:
            errors.append((where, f"repeated {name}"))
            continue
        fields[name] = item.args
    eid = None
    if "ID" not in fields:
        errors.append((where, "missing ID"))
    else:
        args = fields["ID"]
        if len(args) != 1 or not isinstance(args[0], Text) or not ID_RE.match(args[0].value):
            errors.append((where, "ID must be a 6-character lowercase hex string"))
        else:
            eid = args[0].value
            where = eid
    formula = None
    if "Formula" not in fields:
        errors.append((where, "missing Formula"))
    elif len(fields["Formula"]) != 1:
        errors.append((where, "Formula takes exactly one expression"))
    else:
        formula = fields["Formula"][0]
        if head_name(formula) not in PREDICATE_HEADS:
            errors.append((where, f"formula head {head_name(formula) or serialize(formula)} "
                                  "is not boolean-valued"))
    variables = fields.get("Variables", ())
    for v in variables:
        if not isinstance(v, Symbol):
            errors.append((where, f"variable {serialize(v)} is not a symbol"))
    if len(set(variables)) != len(variables):
        errors.append((where, "repeated variable"))
    assumptions = fields.get("Assumptions", (Symbol("True_"),))
    if len(assumptions) != 1:
        errors.append((where, "Assumptions takes exactly one expression"))
        assumptions = (Symbol("True_"),)
    assumptions = assumptions[0]
    texts = {}
    for name in ("References", "Topics", "Description"):
        vals = fields.get(name, ())
        bad = [v for v in vals if not isinstance(v, Text)]
        if bad:
            errors.append((where, f"{name} must contain text atoms"))
        texts[name] = tuple(v.value for v in vals if isinstance(v, Text))
    declared = set(variables)
    for label, x in (("formula", formula), ("assumptions", assumptions)):
        if x is None:
            continue
        for sym in sorted(free_variables(x) - declared, key=lambda s: s.name):
            errors.append((where, f"undeclared variable {sym.name} in {label}"))
        for _, sub in subexpressions(x):
            if head_name(sub) in UNSUPPORTED_BINDERS:
                errors.append((where, f"unsupported binding construct {head_name(sub)}"))
                break
    if errors:
        return None, errors
    desc = texts["Description"][0] if texts["Description"] else ""
    rec = EntryRecord(eid, formula, tuple(variables), assumptions,
                      texts["References"], texts["Topics"], desc)
    return rec, []


def loads(text, source="<string>"):
    """Database from text; raises ValidationError listing every problem."""
    return _build([(source, text)])


def _build(sources):
    errors, records, seen = [], [], {}
    for source, text in sources:
        try:
            exprs = parse_file(text)
        except ParseError as err:
            errors.append((source, f"parse error: {err}"))
            continue
        for i, e in enumerate(exprs):
            rec, errs = _record_from_expr(e, f"{source}#{i + 1}")
            errors.extend(errs)
            if rec is None:
                continue
            if rec.id in seen:
                errors.append((rec.id, f"duplicate id (also in {seen[rec.id]})"))
                continue
            seen[rec.id] = source
            records.append(rec)
    if errors:
        raise ValidationError(errors)
    return Database(records)


def load(path):
    """Load a database file or a directory of ``*.grim`` files."""
    path = os.fspath(path)
    if os.path.isdir(path):
        names = sorted(n for n in os.listdir(path) if n.endswith(".grim"))
        files = [os.path.join(path, n) for n in names]
    else:
        files = [path]
    sources = []
    for f in files:
        with open(f, encoding="utf-8") as fh:
            sources.append((f, fh.read()))
    return _build(sources)


def format_entry(rec):
    """Canonical text for one entry, one metadata item per line."""
    items = [serialize(x) for x in rec.to_expr().args]
    return "Entry(" + ",\n    ".join(items) + ")\n"


def dump(db):
    return "\n".join(format_entry(e) for e in db.entries)


def new_id(existing, rng=None):
    """Fresh random 6-hex id not in ``existing``."""
    rng = rng or random.Random()
    while True:
        candidate = "%06x" % rng.randrange(16 ** 6)
        if candidate not in existing:
            return candidate


def default_db_path():
    """Path of the bundled seed database."""
    return str(resources.files("grimkit").joinpath("data/seed.grim"))


def load_default():
    return load(default_db_path())
