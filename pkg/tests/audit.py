"""Value-preservation checks for eval rules and database rewrites.

Each check instantiates both sides with tester-generated assignments and
requires their enclosures at 128 bits to overlap.
"""

from grimkit.evaluate import derive_facts, evaluate
from grimkit.expr import free_variables, substitute
from grimkit.numeric import NotNumeric, enclose
from grimkit.parser import parse
from grimkit.rewrite import rewrite_once
from grimkit.tester import TestConfig, generate_assignments

AUDIT_PRECISION = 128
AUDIT_INSTANCES = 20

# (subject, entry id, context assumptions, reverse)
REWRITE_FIXTURES = [
    ("Mul(Sin(2), Sin(Sqrt(2)))", "ad6c1c", "True_", False),
    ("Mul(Sin(x), Sin(y))", "ad6c1c", "And(Element(x, CC), Element(y, CC))", False),
    ("Add(Pow(Sin(z), 2), Pow(Cos(z), 2))", "7f1c2e", "Element(z, CC)", False),
    ("Sin(Mul(2, z))", "3a90d4", "Element(z, CC)", False),
    ("Cos(Mul(2, z))", "c5e812", "Element(z, CC)", False),
    ("Sin(Add(x, y))", "e04f6a", "And(Element(x, RR), Element(y, CC))", False),
    ("Div(Add(Cos(Sub(a, b)), Cos(Add(a, b))), 2)", "8e6d01",
     "And(Element(a, CC), Element(b, CC))", True),
    ("Exp(Add(x, y))", "47a0c6", "And(Element(x, CC), Element(y, CC))", False),
    ("Exp(Log(z))", "3f6e1b", "Element(z, SetMinus(CC, Set(0)))", False),
    ("Log(Mul(a, b))", "d6f0a5",
     "And(Element(a, OpenInterval(0, Infinity)), Element(b, OpenInterval(0, Infinity)))", False),
    ("Sqrt(Pow(x, 2))", "0e9a6d", "Element(x, RR)", False),
    ("Sqrt(Pow(x, 2))", "8f47b2",
     "And(Element(x, CC), Or(Greater(Re(x), 0), And(Equal(Re(x), 0), Greater(Im(x), 0))))", False),
    ("Pow(Add(a, b), 2)", "b2c7e4", "And(Element(a, CC), Element(b, CC))", False),
    ("Pow(x, Add(a, b))", "d8e1b6",
     "And(Element(x, OpenInterval(0, Infinity)), Element(a, RR), Element(b, RR))", False),
    ("Pow(z, -1)", "70f4a3", "Element(z, SetMinus(CC, Set(0)))", False),
    ("Sum(Pow(k, 2), For(k, 1, n))", "a3d6f1", "Element(n, ZZGreaterEqual(0))", False),
    ("Sum(Pow(x, k), For(k, 0, n))", "e9f3c4",
     "And(Element(x, SetMinus(CC, Set(1))), Element(n, ZZGreaterEqual(0)))", False),
    ("Add(Cos(Mul(Pi, m)), 1)", "b7e2d5", "Element(m, ZZ)", False),
]


def _value(e):
    try:
        enc = enclose(e, AUDIT_PRECISION)
    except NotNumeric:
        enc = None
    if enc is None or not enc.ok:
        # sums and other non-numeric heads: fold exactly first
        enc = enclose(evaluate(e), AUDIT_PRECISION)
    return enc


def _assignments(variables, assumptions, key):
    if not variables:
        return [{}]
    cfg = TestConfig(max_instances=AUDIT_INSTANCES, precision=AUDIT_PRECISION)
    return list(generate_assignments(sorted(variables, key=lambda s: s.name), assumptions, cfg, key))


def check_pair(lhs, rhs, variables, assumptions, key):
    """(instances checked, list of violating assignments)."""
    checked, bad = 0, []
    for m in _assignments(variables, assumptions, key):
        a, b = _value(substitute(lhs, m)), _value(substitute(rhs, m))
        if not (a.ok and b.ok):
            continue
        checked += 1
        if not a.overlaps(b):
            bad.append(m)
    return checked, bad


def audit_rule(rule):
    return check_pair(rule.pattern, rule.result, rule.variables, rule.guard, rule.name)


def audit_rewrite(db, subject, entry_id, assumptions, reverse=False):
    """(rewritten expression, instances checked, violations)."""
    e = parse(subject)
    ctx_assume = parse(assumptions)
    out = rewrite_once(e, db.lookup(entry_id), derive_facts(ctx_assume), reverse)
    if not out.changed:
        return None, 0, []
    checked, bad = check_pair(e, out.expr, free_variables(e), ctx_assume, subject)
    return out.expr, checked, bad

