"""Value-preserving evaluation under explicit assumptions.

``evaluate`` rewrites an expression into one with the same value for every
assignment allowed by the context. Nothing is simplified unless it is safe:
arithmetic on exact constants folds, predicates fold to True_/False_ only when
decided, and the rewrite rules below fire only when their guards are proved.

Truth values are three-valued. Unknown means neither provable nor refutable
with the facts, the rules and the numeric precision at hand.
"""

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor

from . import numeric
from .exact import ExactUndefined, Quad, from_quad, quad_apply, to_quad
from .expr import Call, Int, Symbol, Text, free_variables, head_name, substitute, _def_parts
from .parser import parse

__all__ = [
    "Truth", "Context", "EMPTY", "derive_facts", "evaluate", "check_truth",
    "membership", "eval_cases", "RULES", "Rule", "DEFAULT_PRECISION",
]

DEFAULT_PRECISION = 256

True_ = Symbol("True_")
False_ = Symbol("False_")
Undefined = Symbol("Undefined")
Infinity = Symbol("Infinity")
Otherwise = Symbol("Otherwise")
ZERO = Int(0)


class Truth(enum.Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"

    def __and__(self, other):
        if self is Truth.FALSE or other is Truth.FALSE:
            return Truth.FALSE
        if self is Truth.TRUE and other is Truth.TRUE:
            return Truth.TRUE
        return Truth.UNKNOWN

    def __or__(self, other):
        if self is Truth.TRUE or other is Truth.TRUE:
            return Truth.TRUE
        if self is Truth.FALSE and other is Truth.FALSE:
            return Truth.FALSE
        return Truth.UNKNOWN

    def __invert__(self):
        if self is Truth.UNKNOWN:
            return self
        return Truth.FALSE if self is Truth.TRUE else Truth.TRUE

    @classmethod
    def of(cls, flag):
        return cls.TRUE if flag else cls.FALSE

    def to_expr(self, otherwise=None):
        if self is Truth.TRUE:
            return True_
        if self is Truth.FALSE:
            return False_
        return otherwise


T, F, U = Truth.TRUE, Truth.FALSE, Truth.UNKNOWN


def _all(thunks):
    """Lazy three-valued conjunction over callables."""
    result = T
    for th in thunks:
        v = th()
        if v is F:
            return F
        if v is U:
            result = U
    return result


def _any(thunks):
    result = F
    for th in thunks:
        v = th()
        if v is T:
            return T
        if v is U:
            result = U
    return result


# -- contexts ----------------------------------------------------------------

ZZ_, QQ_, RR_, CC_ = 0, 1, 2, 3
_RANKS = {"ZZ": ZZ_, "QQ": QQ_, "RR": RR_, "CC": CC_}


@dataclass(frozen=True)
class Context:
    """Facts derived from an assumptions expression; treat as read-only."""

    assumptions: object = True_
    conjuncts: tuple = ()
    facts: frozenset = frozenset()
    disjunctions: tuple = ()
    domains: dict = field(default_factory=dict)
    lower: dict = field(default_factory=dict)
    upper: dict = field(default_factory=dict)
    nonzero: frozenset = frozenset()
    precision: int = DEFAULT_PRECISION
    split: bool = True

    def with_precision(self, bits):
        return derive_facts(self.assumptions, precision=bits, split=self.split)

    def extended(self, extra):
        """Context for ``assumptions AND extra``."""
        if self.assumptions == True_:
            combined = extra
        else:
            combined = Call(Symbol("And"), (self.assumptions, extra))
        return derive_facts(combined, precision=self.precision, split=self.split)

    def describe(self):
        """Readable list of derived facts (used by the CLI)."""
        return sorted(str(f) for f in self.facts)


def _conjuncts(e, out):
    if head_name(e) == "And":
        for a in e.args:
            _conjuncts(a, out)
    elif e != True_:
        out.append(e)
    return out


def _closed(e):
    return not free_variables(e)


def derive_facts(assumptions=True_, precision=DEFAULT_PRECISION, split=True):
    """Context from an assumptions expression.

    Only top-level And chains are split into facts; Or clauses are kept whole
    and used for case splitting by check_truth.
    """
    b = _FactBuilder()
    conj = _conjuncts(assumptions, [])
    for c in conj:
        b.absorb(c)
    return Context(assumptions=assumptions, conjuncts=tuple(conj),
                   facts=frozenset(b.facts), disjunctions=tuple(b.disjunctions),
                   domains=b.domains, lower=b.lower, upper=b.upper,
                   nonzero=frozenset(b.nonzero), precision=precision, split=split)


class _FactBuilder:
    def __init__(self):
        self.facts = set()
        self.disjunctions = []
        self.domains = {}
        self.lower = {}
        self.upper = {}
        self.nonzero = set()

    def domain(self, t, rank):
        old = self.domains.get(t)
        self.domains[t] = rank if old is None else min(old, rank)

    def bound(self, t, value, strict, upper):
        table = self.upper if upper else self.lower
        table.setdefault(t, []).append((value, strict))
        self.domain(t, RR_)

    def absorb(self, c):
        name = head_name(c)
        self.facts.add(c)
        if name == "And":
            for a in c.args:
                self.absorb(a)
        elif name == "Or":
            self.disjunctions.append(c)
        elif name == "Element" and len(c.args) == 2:
            self.element(*c.args)
        elif name == "NotEqual" and len(c.args) == 2:
            a, b = c.args
            if b == ZERO:
                self.nonzero.add(a)
            elif a == ZERO:
                self.nonzero.add(b)
        elif name in ("Less", "LessEqual", "Greater", "GreaterEqual") and len(c.args) == 2:
            a, b = c.args
            if name in ("Greater", "GreaterEqual"):
                a, b = b, a
            strict = name in ("Less", "Greater")
            # now a < b (or <=)
            if _closed(b) and not _closed(a):
                self.bound(a, b, strict, upper=True)
            if _closed(a) and not _closed(b):
                self.bound(b, a, strict, upper=False)
        elif name == "Equal" and len(c.args) == 2:
            a, b = c.args
            if _closed(a) and not _closed(b):
                a, b = b, a
            if _closed(b) and not _closed(a):
                q = _safe_quad(b)
                if q is not None and q.is_real():
                    self.bound(a, b, False, upper=True)
                    self.bound(a, b, False, upper=False)
                    if q.is_rational() and q.a.denominator == 1:
                        self.domain(a, ZZ_)
                    elif q.is_rational():
                        self.domain(a, QQ_)
                if q is not None and not q.is_zero():
                    self.nonzero.add(a)

    def element(self, t, s):
        name = s.name if isinstance(s, Symbol) else head_name(s)
        args = s.args if isinstance(s, Call) else ()
        if name in _RANKS:
            self.domain(t, _RANKS[name])
        elif name in ("ZZGreaterEqual", "ZZLessEqual") and len(args) == 1:
            self.domain(t, ZZ_)
            upper = name == "ZZLessEqual"
            self.bound(t, args[0], False, upper=upper)
            self.domain(t, ZZ_)
            q = _safe_quad(args[0])
            if q is not None and q.is_rational() and ((q.a > 0) if not upper else (q.a < 0)):
                self.nonzero.add(t)
        elif name in ("OpenInterval", "ClosedInterval") and len(args) == 2:
            strict = name == "OpenInterval"
            lo, hi = args
            self.domain(t, RR_)
            if not _is_neg_inf(lo):
                self.bound(t, lo, strict, upper=False)
            if hi != Infinity:
                self.bound(t, hi, strict, upper=True)
        elif name == "SetMinus" and len(args) == 2:
            self.element(t, args[0])
            if head_name(args[1]) == "Set":
                for v in args[1].args:
                    self.facts.add(Call(Symbol("NotEqual"), (t, v)))
                    if v == ZERO:
                        self.nonzero.add(t)
        elif name == "Intersection":
            for a in args:
                self.element(t, a)
        elif name == "HH":
            self.domain(t, CC_)
            self.bound(Call(Symbol("Im"), (t,)), ZERO, True, upper=False)
            self.nonzero.add(t)
        elif name == "SL2Z" and head_name(t) == "Matrix2x2":
            for a in t.args:
                self.domain(a, ZZ_)


def _is_neg_inf(e):
    return head_name(e) == "Neg" and e.args == (Infinity,)


def _safe_quad(e):
    try:
        return to_quad(e, 12)
    except ExactUndefined:
        return None


EMPTY = derive_facts(True_)


# -- rules -------------------------------------------------------------------

@dataclass(frozen=True)
class Rule:
    name: str
    pattern: object
    result: object
    guard: object
    variables: tuple


_HALF_PLANE = ("Or(And(Element(x, RR), GreaterEqual(x, 0)), And(Element(x, CC), "
               "Or(Greater(Re(x), 0), And(Equal(Re(x), 0), Greater(Im(x), 0)))))")

_RULE_TEXT = [
    ("div-self", "Div(x, x)", "1", "And(Element(x, CC), NotEqual(x, 0))"),
    ("mul-zero-right", "Mul(x, 0)", "0", "Element(x, CC)"),
    ("mul-zero-left", "Mul(0, x)", "0", "Element(x, CC)"),
    ("add-zero-right", "Add(x, 0)", "x", "Element(x, CC)"),
    ("add-zero-left", "Add(0, x)", "x", "Element(x, CC)"),
    ("sub-zero", "Sub(x, 0)", "x", "Element(x, CC)"),
    ("mul-one-right", "Mul(x, 1)", "x", "Element(x, CC)"),
    ("mul-one-left", "Mul(1, x)", "x", "Element(x, CC)"),
    ("pos", "Pos(x)", "x", "Element(x, CC)"),
    ("sin-pi-multiple", "Sin(Mul(Pi, n))", "0", "Element(n, ZZ)"),
    ("sin-multiple-pi", "Sin(Mul(n, Pi))", "0", "Element(n, ZZ)"),
    ("cos-pi-multiple", "Cos(Mul(Pi, n))", "Pow(-1, n)", "Element(n, ZZ)"),
    ("cos-multiple-pi", "Cos(Mul(n, Pi))", "Pow(-1, n)", "Element(n, ZZ)"),
    ("sin-pi", "Sin(Pi)", "0", "True_"),
    ("cos-pi", "Cos(Pi)", "-1", "True_"),
    ("sin-zero", "Sin(0)", "0", "True_"),
    ("cos-zero", "Cos(0)", "1", "True_"),
    ("log-one", "Log(1)", "0", "True_"),
    ("log-e", "Log(ConstE)", "1", "True_"),
    ("exp-zero", "Exp(0)", "1", "True_"),
    ("sqrt-square", "Sqrt(Pow(x, 2))", "x", _HALF_PLANE),
    ("square-sqrt", "Pow(Sqrt(x), 2)", "x", "And(Element(x, RR), GreaterEqual(x, 0))"),
    ("abs-nonneg", "Abs(x)", "x", "And(Element(x, RR), GreaterEqual(x, 0))"),
    ("re-real", "Re(x)", "x", "Element(x, RR)"),
    ("im-real", "Im(x)", "0", "Element(x, RR)"),
]


def _make_rules():
    rules = []
    for name, pat, res, guard in _RULE_TEXT:
        p = parse(pat)
        rules.append(Rule(name, p, parse(res), parse(guard),
                          tuple(sorted(free_variables(p), key=lambda s: s.name))))
    return tuple(rules)


RULES = _make_rules()
_RULES_BY_HEAD = {}
for _r in RULES:
    _RULES_BY_HEAD.setdefault(head_name(_r.pattern), []).append(_r)


def _match(pattern, subject, variables, binding):
    if pattern in variables:
        prev = binding.get(pattern)
        if prev is None:
            binding[pattern] = subject
            return True
        return prev == subject
    if isinstance(pattern, Call):
        if not isinstance(subject, Call) or len(pattern.args) != len(subject.args):
            return False
        if not _match(pattern.head, subject.head, variables, binding):
            return False
        return all(_match(p, s, variables, binding) for p, s in zip(pattern.args, subject.args))
    return pattern == subject


# -- exact helpers -------------------------------------------------------------

_IRRATIONAL_ATOMS = frozenset({Symbol("Pi"), Symbol("ConstE")})


@lru_cache(maxsize=4096)
def _bernoulli_table(n):
    # B_0..B_n with B_1 = -1/2
    b = [Fraction(0)] * (n + 1)
    b[0] = Fraction(1)
    binom = [1]
    for m in range(1, n + 1):
        binom = [1] + [binom[i] + binom[i + 1] for i in range(len(binom) - 1)] + [1]
        # sum_{k<m} C(m+1, k) B_k = -(m+1) B_m
        row = [1]
        for i in range(m + 1):
            row.append(row[-1] * (m + 1 - i) // (i + 1))
        s = sum(row[k] * b[k] for k in range(m))
        b[m] = -s / (m + 1)
    return tuple(b)


def bernoulli(n):
    """Exact Bernoulli number B_n (B_1 = -1/2)."""
    if n < 0:
        raise ValueError("negative index")
    if n > 1 and n % 2:
        return Fraction(0)
    return _bernoulli_table(n)[n]


_BERNOULLI_MAX = 400
_SUM_MAX_TERMS = 2000


# -- evaluator ----------------------------------------------------------------

_ARITH = frozenset("Add Sub Mul Div Neg Pos Pow Sqrt Abs Re Im Exp Log Sin Cos".split())
_LAZY = frozenset("Where Cases Sum For ForElement Def And Or Implies".split())
_ORDER = {"Less": (False, True), "LessEqual": (False, False),
          "Greater": (True, True), "GreaterEqual": (True, False)}


class _Evaluator:
    def __init__(self, ctx):
        self.ctx = ctx
        self.cache = {}
        self.qcache = {}
        self.ncache = {}

    # exact values of already evaluated subterms
    def q(self, e):
        try:
            return self.qcache[e]
        except KeyError:
            pass
        try:
            v = to_quad(e, 10)
        except ExactUndefined:
            v = None
        self.qcache[e] = v
        return v

    def eval(self, e):
        if not isinstance(e, Call):
            return e
        hit = self.cache.get(e)
        if hit is not None:
            return hit
        out = self._eval_call(e)
        self.cache[e] = out
        return out

    def _eval_call(self, e):
        name = head_name(e)
        if name is None:
            return Call(self.eval(e.head), tuple(self.eval(a) for a in e.args))
        if name in _LAZY:
            return self._lazy(name, e)
        if any(head_name(a) in ("For", "ForElement") for a in e.args):
            return e  # unknown binding construct: leave alone
        args = tuple(self.eval(a) for a in e.args)
        e = Call(e.head, args)
        if name in _ARITH:
            if any(a == Undefined for a in args):
                return Undefined
            if name == "Div" and len(args) == 2 and self.q(args[1]) is not None \
                    and self.q(args[1]).is_zero():
                return Undefined
            qs = [self.q(a) for a in args]
            if all(x is not None for x in qs):
                try:
                    v = quad_apply(name, qs)
                except ExactUndefined:
                    return Undefined
                if v is not None:
                    return from_quad(v)
        elif name in _PREDICATES:
            t = _PREDICATES[name](self, args)
            if t is U:
                t = self.lookup(e)
            return t.to_expr(e)
        elif name == "BernoulliB" and len(args) == 1:
            q = self.q(args[0])
            if q is not None and q.is_rational() and q.a.denominator == 1 \
                    and 0 <= q.a <= _BERNOULLI_MAX:
                return from_quad(Quad(bernoulli(int(q.a))))
        return self.rules(e)

    def rules(self, e):
        for rule in _RULES_BY_HEAD.get(head_name(e), ()):
            binding = {}
            if not _match(rule.pattern, e, rule.variables, binding):
                continue
            if rule.guard != True_ and self.truth(substitute(rule.guard, binding)) is not T:
                continue
            return self.eval(substitute(rule.result, binding))
        return e

    def lookup(self, p):
        if p in self.ctx.facts:
            return T
        if Call(Symbol("Not"), (p,)) in self.ctx.facts:
            return F
        return U

    def truth(self, p):
        v = self.eval(p)
        if v == True_:
            return T
        if v == False_:
            return F
        return self.lookup(v)

    # -- lazy heads --

    def _lazy(self, name, e):
        args = e.args
        if name == "And":
            out = []
            for a in args:
                v = self.eval(a)
                if v == False_:
                    return False_
                if v != True_:
                    out.append(v)
            if not out:
                return True_
            t = self.lookup(Call(e.head, tuple(out)))
            return t.to_expr(Call(e.head, tuple(out)))
        if name == "Or":
            out = []
            for a in args:
                v = self.eval(a)
                if v == True_:
                    return True_
                if v != False_:
                    out.append(v)
            if not out:
                return False_
            res = Call(e.head, tuple(out))
            return self.lookup(res).to_expr(res)
        if name == "Implies" and len(args) == 2:
            a = self.eval(args[0])
            if a == False_:
                return True_
            b = self.eval(args[1])
            if b == True_:
                return True_
            if a == True_:
                return b
            res = Call(e.head, (a, b))
            return self.lookup(res).to_expr(res)
        if name == "Cases":
            return self.cases(e)
        if name == "Where":
            return self.where(e)
        if name == "Sum":
            return self.sum(e)
        return e

    def cases(self, e):
        kept = []
        for br in e.args:
            if head_name(br) != "Tuple" or len(br.args) != 2:
                return e
            val, cond = br.args
            if cond == Otherwise:
                if not kept:
                    return self.eval(val)
                kept.append(Call(br.head, (self.eval(val), Otherwise)))
                break
            t = self.truth(cond)
            if t is F:
                continue
            if t is T and not kept:
                return self.eval(val)
            kept.append(Call(br.head, (self.eval(val), self.eval(cond))))
            if t is T:
                break
        if not kept:
            return Undefined
        return Call(e.head, tuple(kept))

    def where(self, e):
        if not e.args:
            return e
        body = e.args[0]
        for d in e.args[1:]:
            parts = _def_parts(d)
            if parts is None:
                return e
            fname, formals, rhs = parts
            if formals:
                body = _expand_def(body, fname, formals, rhs)
            else:
                body = substitute(body, {fname: self.eval(rhs)})
        return self.eval(body)

    def sum(self, e):
        if len(e.args) not in (2, 3) or head_name(e.args[1]) != "For" or len(e.args[1].args) != 3:
            return e
        body, rng = e.args[0], e.args[1]
        cond = e.args[2] if len(e.args) == 3 else None
        var = rng.args[0]
        lo, hi = self.q(self.eval(rng.args[1])), self.q(self.eval(rng.args[2]))
        if not isinstance(var, Symbol) or lo is None or hi is None \
                or not (lo.is_rational() and hi.is_rational()):
            return e
        start, stop = ceil(lo.a), floor(hi.a)
        if stop - start + 1 > _SUM_MAX_TERMS:
            return e
        acc = ZERO
        for i in range(start, stop + 1):
            m = {var: Int(i)}
            if cond is not None:
                t = self.truth(substitute(cond, m))
                if t is U:
                    return e
                if t is F:
                    continue
            term = self.eval(substitute(body, m))
            acc = term if acc == ZERO else self.eval(Call(Symbol("Add"), (acc, term)))
        return acc

    # -- numerics --

    def enclosures(self, x):
        """Enclosures of a closed term at doubling precision, or [] if not numeric."""
        hit = self.ncache.get(x)
        if hit is not None:
            return hit
        out = []
        p = 64
        try:
            while True:
                enc = numeric.enclose(x, p)
                if enc.status == "undefined":
                    out = []
                    break
                out.append(enc)
                if p >= self.ctx.precision:
                    break
                p = min(2 * p, self.ctx.precision)
        except (numeric.NotNumeric, RecursionError):
            out = []
        self.ncache[x] = out
        return out

    def real_cmp(self, a, b):
        """Sign of a - b for real closed a, b; None if undecided."""
        if a == b:
            return 0
        if a == Infinity or b == Infinity or _is_neg_inf(a) or _is_neg_inf(b):
            return self._inf_cmp(a, b)
        qa, qb = self.q(a), self.q(b)
        if qa is not None and qb is not None:
            if qa.is_real() and qb.is_real():
                d = qa - qb
                if d is not None:
                    return d.sign()
                # different fields: fall through to numerics
        ea, eb = self.enclosures(a), self.enclosures(b)
        for x, y in zip(ea, eb):
            if not x.ok or not y.ok:
                continue
            if not (self._real_enc(x, a) and self._real_enc(y, b)):
                return None
            if x.re.hi < y.re.lo:
                return -1
            if y.re.hi < x.re.lo:
                return 1
        return None

    def _real_enc(self, enc, x):
        if enc.is_real():
            return True
        return self.is_real(x) is T

    def _inf_cmp(self, a, b):
        def rank(x):
            if x == Infinity:
                return 1
            if _is_neg_inf(x):
                return -1
            return 0 if self.is_real(x) is T else None
        ra, rb = rank(a), rank(b)
        if ra is None or rb is None or ra == rb == 0:
            return None
        return (ra > rb) - (ra < rb)

    # -- domains --

    def is_real(self, x):
        return self.in_numbers(x, RR_)

    def domain(self, x):
        """Smallest known rank among ZZ, QQ, RR, CC containing x, or None."""
        q = self.q(x)
        if q is not None:
            if not q.is_real():
                return CC_
            if not q.is_rational():
                return RR_
            return ZZ_ if q.a.denominator == 1 else QQ_
        if isinstance(x, Symbol):
            if x in _IRRATIONAL_ATOMS:
                return RR_
            return self.ctx.domains.get(x)
        if not isinstance(x, Call):
            return None
        known = self.ctx.domains.get(x)
        if known is not None:
            return known
        name = head_name(x)
        args = x.args
        r = None
        if name in ("Add", "Sub", "Mul", "Neg", "Pos") and args:
            ranks = [self.domain(a) for a in args]
            if None not in ranks:
                r = max(ranks)
        elif name == "Div" and len(args) == 2:
            ranks = [self.domain(a) for a in args]
            if None not in ranks and self.nonzero(args[1]) is T:
                r = max(max(ranks), QQ_)
        elif name == "Pow" and len(args) == 2:
            rb, rn = self.domain(args[0]), self.domain(args[1])
            if rb is not None and rn == ZZ_:
                if self.sign_at_least(args[1], 0):
                    r = rb
                elif self.nonzero(args[0]) is T:
                    r = max(rb, QQ_)
            elif rb is not None and rn is not None and rb <= RR_ and rn <= RR_ \
                    and self.positive(args[0]):
                r = RR_
            elif rb is not None and rn is not None and self.nonzero(args[0]) is T:
                r = CC_
        elif name == "Sqrt" and len(args) == 1:
            ra = self.domain(args[0])
            if ra is not None:
                r = RR_ if ra <= RR_ and self.sign_at_least(args[0], 0) else CC_
        elif name in ("Exp", "Sin", "Cos") and len(args) == 1:
            ra = self.domain(args[0])
            if ra is not None:
                r = RR_ if ra <= RR_ else CC_
        elif name == "Log" and len(args) == 1:
            ra = self.domain(args[0])
            if ra is not None and self.nonzero(args[0]) is T:
                r = RR_ if ra <= RR_ and self.positive(args[0]) else CC_
        elif name in ("Abs", "Re", "Im") and len(args) == 1:
            if self.domain(args[0]) is not None:
                r = RR_
        elif name == "BernoulliB" and len(args) == 1:
            if self.domain(args[0]) == ZZ_ and self.sign_at_least(args[0], 0):
                r = QQ_
        if r is None and _closed(x):
            encs = self.enclosures(x)
            if encs:
                r = RR_ if encs[0].is_real() else CC_
        return r

    def sign_at_least(self, x, c):
        """Provably x >= c (c an int)."""
        return self.compare_const(x, Int(c)) in ("gt", "ge", "eq")

    def positive(self, x):
        return self.compare_const(x, ZERO) == "gt"

    def compare_const(self, x, c):
        """Relation of x to closed real c: 'gt', 'ge', 'lt', 'le', 'eq' or None."""
        if _closed(x):
            if self.is_real(x) is not T:
                return None
            s = self.real_cmp(x, c)
            return {1: "gt", 0: "eq", -1: "lt"}.get(s)
        gt = ge = lt = le = False
        for bound, strict in self.ctx.lower.get(x, ()):
            s = self.real_cmp(bound, c) if _closed(bound) else None
            if s is None:
                continue
            if s > 0 or (s == 0 and strict):
                gt = True
            elif s == 0:
                ge = True
        for bound, strict in self.ctx.upper.get(x, ()):
            s = self.real_cmp(bound, c) if _closed(bound) else None
            if s is None:
                continue
            if s < 0 or (s == 0 and strict):
                lt = True
            elif s == 0:
                le = True
        if gt:
            return "gt"
        if lt:
            return "lt"
        if ge and le:
            return "eq"
        if ge:
            return "ge"
        if le:
            return "le"
        return None

    def nonzero(self, x):
        q = self.q(x)
        if q is not None:
            return Truth.of(not q.is_zero())
        if x in self.ctx.nonzero or x in _IRRATIONAL_ATOMS:
            return T
        if x == Symbol("ConstI"):
            return T
        name = head_name(x)
        if name == "Exp" and len(x.args) == 1 and self.domain(x.args[0]) is not None:
            return T
        if name in ("Mul", "Neg", "Pos") and x.args:
            return _all(lambda a=a: self.nonzero(a) for a in x.args)
        if name == "Pow" and len(x.args) == 2 and self.nonzero(x.args[0]) is T \
                and self.domain(x.args[1]) == ZZ_:
            return T
        rel = self.compare_const(x, ZERO) if not _closed(x) else None
        if rel in ("gt", "lt"):
            return T
        if rel == "eq":
            return F
        if _closed(x):
            for enc in self.enclosures(x):
                if enc.ok and not (enc.re.contains_zero() and enc.im.contains_zero()):
                    return T
        return U

    def in_numbers(self, x, rank):
        if isinstance(x, Text) or x in (Infinity, Undefined, True_, False_, Otherwise):
            return F
        if _is_neg_inf(x):
            return F
        name = head_name(x)
        if name in ("Tuple", "Matrix2x2", "Set") or (isinstance(x, Symbol) and x.name in _SET_NAMES):
            return F
        d = self.domain(x)
        if d is not None and d <= rank:
            return T
        q = self.q(x)
        if q is not None:
            return F  # exact value with a larger domain
        if rank <= QQ_ and _known_irrational(x, self):
            return F
        if _closed(x):
            encs = self.enclosures(x)
            if not encs:
                return U
            enc = encs[-1]
            if rank <= RR_ and not enc.im.contains_zero():
                return F
            if rank == ZZ_ and enc.is_real():
                lo, hi = enc.re.lo.to_fraction(), enc.re.hi.to_fraction()
                if ceil(lo) > floor(hi):
                    return F
        return U

    # -- membership --

    def member(self, x, s):
        fact = self.lookup(Call(Symbol("Element"), (x, s)))
        if fact is T:
            return T
        name = s.name if isinstance(s, Symbol) else head_name(s)
        args = s.args if isinstance(s, Call) else ()
        if name in _RANKS and isinstance(s, Symbol):
            return self.in_numbers(x, _RANKS[name])
        if name == "HH" and isinstance(s, Symbol):
            return _all([lambda: self.in_numbers(x, CC_),
                         lambda: self.less(ZERO, self.eval(Call(Symbol("Im"), (x,))), True)])
        if name == "SL2Z" and isinstance(s, Symbol):
            if head_name(x) == "Matrix2x2" and len(x.args) == 4:
                a, b, c, d = x.args
                det = self.eval(Call(Symbol("Sub"), (Call(Symbol("Mul"), (a, d)),
                                                     Call(Symbol("Mul"), (b, c)))))
                return _all([lambda: _all(lambda v=v: self.in_numbers(v, ZZ_) for v in x.args),
                             lambda: self.equal(det, Int(1))])
            if self.in_numbers(x, CC_) is T or isinstance(x, Text):
                return F
            return U
        if name == "ZZGreaterEqual" and len(args) == 1:
            return _all([lambda: self.in_numbers(x, ZZ_), lambda: self.less(args[0], x, False)])
        if name == "ZZLessEqual" and len(args) == 1:
            return _all([lambda: self.in_numbers(x, ZZ_), lambda: self.less(x, args[0], False)])
        if name in ("OpenInterval", "ClosedInterval") and len(args) == 2:
            strict = name == "OpenInterval"
            return _all([lambda: self.in_numbers(x, RR_),
                         lambda: self.less(args[0], x, strict),
                         lambda: self.less(x, args[1], strict)])
        if name == "Set":
            return _any(lambda v=v: self.equal(x, v) for v in args)
        if name == "SetMinus" and len(args) == 2:
            return _all([lambda: self.member(x, args[0]), lambda: ~self.member(x, args[1])])
        if name == "Union":
            return _any(lambda a=a: self.member(x, a) for a in args)
        if name == "Intersection":
            return _all(lambda a=a: self.member(x, a) for a in args)
        return fact

    def subset(self, a, b):
        if a == b:
            return T
        na = a.name if isinstance(a, Symbol) else head_name(a)
        nb = b.name if isinstance(b, Symbol) else head_name(b)
        if isinstance(a, Symbol) and isinstance(b, Symbol) and na in _RANKS and nb in _RANKS:
            return Truth.of(_RANKS[na] <= _RANKS[nb])
        if na in ("ZZGreaterEqual", "ZZLessEqual") and isinstance(b, Symbol) and nb in _RANKS:
            return T
        if na == "Set":
            return _all(lambda v=v: self.member(v, b) for v in a.args)
        return U

    # -- comparisons --

    def equal(self, a, b):
        if a == b:
            return T
        qa, qb = self.q(a), self.q(b)
        if qa is not None and qb is not None:
            diff = qa - qb
            if diff is not None:
                return Truth.of(diff.is_zero())
        if isinstance(a, Text) or isinstance(b, Text):
            return F if isinstance(a, Text) and isinstance(b, Text) else self._distinct_kinds(a, b)
        if a == Undefined or b == Undefined:
            other = b if a == Undefined else a
            return F if self.in_numbers(other, CC_) is T else U
        ha, hb = head_name(a), head_name(b)
        if ha in ("Tuple", "Matrix2x2") and ha == hb:
            if len(a.args) != len(b.args):
                return F
            return _all(lambda x=x, y=y: self.equal(x, y) for x, y in zip(a.args, b.args))
        fact = self.lookup(Call(Symbol("Equal"), (a, b)))
        if fact is T:
            return T
        if self.lookup(Call(Symbol("NotEqual"), (a, b))) is T:
            return F
        ca, cb = _closed(a), _closed(b)
        if ca and cb:
            ea, eb = self.enclosures(a), self.enclosures(b)
            for x, y in zip(ea, eb):
                if x.ok and y.ok and not x.overlaps(y):
                    return F
            return U
        if cb and not ca:
            return self._sym_equal(a, b)
        if ca and not cb:
            return self._sym_equal(b, a)
        return U

    def _distinct_kinds(self, a, b):
        other = b if isinstance(a, Text) else a
        return F if self.in_numbers(other, CC_) is T else U

    def _sym_equal(self, t, c):
        if c == ZERO and t in self.ctx.nonzero:
            return F
        rel = self.compare_const(t, c) if self.is_real(c) is T else None
        if rel in ("gt", "lt"):
            return F
        if rel == "eq":
            return T
        return U

    def less(self, a, b, strict):
        """a < b (strict) or a <= b."""
        if a == b:
            if strict:
                return F if self.is_real(a) is T or a in (Infinity,) or _is_neg_inf(a) else U
            return T if self.is_real(a) is T or a == Infinity or _is_neg_inf(a) else U
        ca, cb = _closed(a), _closed(b)
        if ca and cb:
            s = self.real_cmp(a, b)
            if s is None:
                return U
            if s < 0:
                return T
            if s > 0:
                return F
            return F if strict else T
        if cb:
            rel = self.compare_const(a, b)
            if rel == "lt" or (rel in ("le", "eq") and not strict):
                return T
            if rel == "gt" or (rel in ("ge", "eq") and strict):
                return F
            return U
        if ca:
            rel = self.compare_const(b, a)
            if rel == "gt" or (rel in ("ge", "eq") and not strict):
                return T
            if rel == "lt" or (rel in ("le", "eq") and strict):
                return F
            return U
        return U


def _expand_def(body, fname, formals, rhs):
    if isinstance(body, Call):
        args = tuple(_expand_def(a, fname, formals, rhs) for a in body.args)
        head = body.head
        if head == fname and len(args) == len(formals):
            return substitute(rhs, dict(zip(formals, args)))
        return Call(_expand_def(head, fname, formals, rhs), args)
    return body


def _known_irrational(x, ev):
    """Finite table of irrationality facts: Pi, ConstE and simple rational shifts/scalings."""
    if x in _IRRATIONAL_ATOMS:
        return True
    q = ev.q(x)
    if q is not None:
        return q.is_real() and not q.is_rational()
    name = head_name(x)
    if name is None:
        return False
    args = x.args

    def rational(e):
        v = ev.q(e)
        return v is not None and v.is_rational()

    if name in ("Neg", "Pos") and len(args) == 1:
        return _known_irrational(args[0], ev)
    if name in ("Add", "Sub") and len(args) == 2:
        a, b = args
        return (rational(a) and _known_irrational(b, ev)) or \
            (rational(b) and _known_irrational(a, ev))
    if name in ("Mul", "Div") and len(args) == 2:
        a, b = args
        if rational(a) and ev.q(a).a != 0 and _known_irrational(b, ev):
            return True
        return rational(b) and ev.q(b).a != 0 and _known_irrational(a, ev)
    if name == "Pow" and len(args) == 2 and args[0] in _IRRATIONAL_ATOMS:
        k = ev.q(args[1])
        return k is not None and k.is_rational() and k.a.denominator == 1 and k.a != 0
    if name == "Exp" and len(args) == 1:
        k = ev.q(args[0])
        return k is not None and k.is_rational() and k.a != 0
    if name == "Log" and len(args) == 1:
        k = ev.q(args[0])
        return k is not None and k.is_rational() and k.a > 0 and k.a != 1
    return False


_SET_NAMES = frozenset("ZZ QQ RR CC HH SL2Z".split())


def _p_equal(ev, args):
    if len(args) != 2:
        return U
    return ev.equal(*args)


def _p_not_equal(ev, args):
    return ~_p_equal(ev, args)


def _p_order(name):
    flip, strict = _ORDER[name]

    def decide(ev, args):
        if len(args) != 2:
            return U
        a, b = args
        if flip:
            a, b = b, a
        return ev.less(a, b, strict)
    return decide


def _p_not(ev, args):
    if len(args) != 1:
        return U
    a = args[0]
    if a == True_:
        return F
    if a == False_:
        return T
    return ~ev.lookup(a)


def _p_element(ev, args):
    if len(args) != 2:
        return U
    return ev.member(*args)


def _p_not_element(ev, args):
    return ~_p_element(ev, args)


def _p_subset(ev, args):
    if len(args) != 2:
        return U
    return ev.subset(*args)


def _p_congruent(ev, args):
    if len(args) != 3:
        return U
    a, b, m = (ev.q(x) for x in args)
    if None not in (a, b, m) and all(v.is_rational() and v.a.denominator == 1 for v in (a, b, m)):
        a, b, m = (int(v.a) for v in (a, b, m))
        if m == 0:
            return Truth.of(a == b)
        return Truth.of((a - b) % m == 0)
    if args[0] == args[1] and ev.in_numbers(args[0], ZZ_) is T:
        return T
    return U


_PREDICATES = {
    "Equal": _p_equal, "NotEqual": _p_not_equal, "Not": _p_not,
    "Element": _p_element, "NotElement": _p_not_element, "Subset": _p_subset,
    "CongruentMod": _p_congruent,
}
for _n in _ORDER:
    _PREDICATES[_n] = _p_order(_n)


# -- public API ---------------------------------------------------------------

def _ctx(ctx, assumptions):
    if assumptions is not None:
        return derive_facts(assumptions) if ctx is None else ctx.extended(assumptions)
    return EMPTY if ctx is None else ctx


def evaluate(e, ctx=None, assumptions=None):
    """Evaluate ``e`` under ``ctx`` (or an assumptions expression)."""
    return _Evaluator(_ctx(ctx, assumptions)).eval(e)


def check_truth(p, ctx=None, assumptions=None):
    """Three-valued truth of a predicate; may case-split on Or assumptions."""
    ctx = _ctx(ctx, assumptions)
    t = _Evaluator(ctx).truth(p)
    if t is U and ctx.split and ctx.disjunctions:
        clause = ctx.disjunctions[0]
        rest = [c for c in ctx.conjuncts if c != clause]
        verdicts = []
        for d in clause.args:
            parts = rest + [d]
            sub = derive_facts(Call(Symbol("And"), tuple(parts)) if len(parts) > 1 else parts[0],
                               precision=ctx.precision, split=False)
            v = _Evaluator(sub).truth(p)
            verdicts.append(v)
            if v is U:
                break
        if verdicts and all(v is T for v in verdicts) and len(verdicts) == len(clause.args):
            return T
        if verdicts and all(v is F for v in verdicts) and len(verdicts) == len(clause.args):
            return F
    return t


def membership(x, s, ctx=None):
    ev = _Evaluator(_ctx(ctx, None))
    return ev.member(ev.eval(x), ev.eval(s))


def eval_cases(c, ctx=None):
    if head_name(c) != "Cases":
        raise ValueError("expected a Cases expression")
    return _Evaluator(_ctx(ctx, None)).cases(c)
