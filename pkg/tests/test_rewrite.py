import logging

import pytest

from grimkit.db import EntryRecord, load_default
from grimkit.evaluate import derive_facts
from grimkit.expr import Symbol, free_variables, serialize, subexpressions, substitute
from grimkit.parser import parse
from grimkit.rewrite import apply_entry, find_matches, match_pattern, rewrite_once, search_rewrites
from grimkit.tester import DEFAULT_POOL

from audit import REWRITE_FIXTURES, audit_rewrite

a, b = Symbol("a"), Symbol("b")
PRODUCT_TO_SUM = parse("Div(Sub(Cos(Sub(2, Sqrt(2))), Cos(Add(2, Sqrt(2)))), 2)")


@pytest.fixture(scope="module")
def db():
    return load_default()


def test_match_pattern_examples():
    subject = parse("Mul(Sin(2), Sin(Sqrt(2)))")
    assert match_pattern(parse("Mul(Sin(a), Sin(b))"), subject, {a, b}) == {
        a: parse("2"), b: parse("Sqrt(2)")}
    assert match_pattern(parse("Mul(Sin(a), Sin(a))"), subject, {a}) is None
    assert match_pattern(parse("Sin(a)"), parse("Cos(2)"), {a}) is None
    assert match_pattern(parse("Sin(a)"), parse("Sin(2, 3)"), {a}) is None


def test_match_correctness_on_subterms(db):
    e = parse("Add(Mul(Sin(1), Sin(x)), Mul(Sin(Mul(Sin(2), Sin(3))), Sin(4)))")
    pattern = parse("Mul(Sin(a), Sin(b))")
    matches = list(find_matches(e, pattern, {a, b}))
    assert len(matches) == 3
    subs = dict(subexpressions(e))
    for m in matches:
        assert substitute(pattern, m.assignment) == subs[m.path]


def test_product_to_sum_transcript(db):
    e = parse("Mul(Sin(2), Sin(Sqrt(2)))")
    assert apply_entry(e, db.lookup("ad6c1c")) == PRODUCT_TO_SUM


def test_guard_blocks_when_unproved():
    entry = EntryRecord("aaaaaa", parse("Equal(Mul(Sin(a), Sin(b)), Div(Sub(Cos(Sub(a, b)), "
                                        "Cos(Add(a, b))), 2))"),
                        (a, b), parse("And(Element(a, ZZ), Element(b, ZZ))"))
    e = parse("Mul(Sin(2), Sin(Sqrt(2)))")
    out = rewrite_once(e, entry)
    assert out.expr == e and not out.changed


def test_no_match_anywhere(db):
    e = parse("Cos(2)")
    assert apply_entry(e, db.lookup("ad6c1c")) == e


def test_context_enables_rewrite(db):
    e = parse("Mul(Sin(x), Sin(y))")
    entry = db.lookup("ad6c1c")
    assert apply_entry(e, entry) == e
    ctx = derive_facts(parse("And(Element(x, RR), Element(y, RR))"))
    assert apply_entry(e, entry, ctx) == parse("Div(Sub(Cos(Sub(x, y)), Cos(Add(x, y))), 2)")


def test_leftmost_outermost_single_site(db):
    e = parse("Add(Mul(Sin(1), Sin(2)), Mul(Sin(3), Sin(4)))")
    out = rewrite_once(e, db.lookup("ad6c1c"))
    assert out.match.path == (0,)
    assert out.expr.args[1] == e.args[1]


def test_reverse(db):
    e = parse("Div(Sub(Cos(Sub(1, 2)), Cos(Add(1, 2))), 2)")
    assert apply_entry(e, db.lookup("ad6c1c"), reverse=True) == parse("Mul(Sin(1), Sin(2))")


def test_non_equal_entry_gives_diagnostic(db, caplog):
    with caplog.at_level(logging.WARNING):
        out = rewrite_once(parse("Sin(1)"), db.lookup("2c94f1"))
    assert not out.changed and "not an equality" in out.diagnostic
    assert "not an equality" in caplog.text


def test_unbindable_rhs_variable():
    entry = EntryRecord("bbbbbb", parse("Equal(Mul(x, 0), Mul(y, 0))"), (Symbol("x"), Symbol("y")),
                        parse("True_"))
    out = rewrite_once(parse("Mul(3, 0)"), entry)
    assert not out.changed and "y" in out.diagnostic


def test_search_finds_transcript_rewrite(db):
    results = search_rewrites(parse("Mul(Sin(2), Sin(Sqrt(2)))"), db)
    assert ("ad6c1c", PRODUCT_TO_SUM) in results


def test_search_atom_and_two_sites(db):
    assert search_rewrites(parse("Pi"), db) == []
    e = parse("Mul(Mul(Sin(1), Sin(2)), Mul(Sin(3), Sin(4)))")
    hits = [(i, r) for i, r in search_rewrites(e, db) if i == "ad6c1c"]
    assert len(hits) >= 2
    assert len({r for _, r in hits}) == len(hits)


def test_search_budget(db):
    e = parse("Mul(Mul(Sin(1), Sin(2)), Mul(Sin(3), Sin(4)))")
    assert len(search_rewrites(e, db, budget=1)) == 1
    with pytest.raises(ValueError):
        search_rewrites(e, db, budget=0)


def _blocking_subject(entry, lhs):
    """Instance of lhs on which the guard is not proved."""
    from grimkit.evaluate import Truth, check_truth
    variables = list(entry.variables)
    for value in DEFAULT_POOL:
        m = {v: value for v in variables}
        if check_truth(substitute(entry.assumptions, m)) is not Truth.TRUE:
            return substitute(lhs, m)
    # unconstrained fresh symbols never satisfy a nontrivial guard
    return substitute(lhs, {v: Symbol("free_" + v.name) for v in variables})


def test_guards_are_necessary(db):
    checked = 0
    for entry in db:
        f = entry.formula
        if entry.assumptions == Symbol("True_") or serialize(f)[:6] != "Equal(":
            continue
        lhs = f.args[0]
        if not (free_variables(f.args[1]) & set(entry.variables)) <= free_variables(lhs):
            continue
        subject = _blocking_subject(entry, lhs)
        assert apply_entry(subject, entry) == subject, entry.id
        checked += 1
    assert checked >= 30


@pytest.mark.parametrize("subject, entry_id, assume, reverse", REWRITE_FIXTURES)
def test_rewrites_preserve_value(db, subject, entry_id, assume, reverse):
    new, checked, bad = audit_rewrite(db, subject, entry_id, assume, reverse)
    assert new is not None, "fixture rewrite did not fire"
    assert checked >= (1 if not free_variables(parse(subject)) else 20)
    assert bad == []
