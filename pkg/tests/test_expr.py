import pickle

import pytest

from grimkit.expr import (Call, Int, Symbol, Text, expr, free_variables, make_call,
                          replace_at, serialize, subexpressions, substitute)
from grimkit.parser import parse

x, y, n, N = Symbol("x"), Symbol("y"), Symbol("n"), Symbol("N")
Add, Mul, Sin = Symbol("Add"), Symbol("Mul"), Symbol("Sin")


def test_atoms_compare_by_value():
    assert Int(3) == Int(3)
    assert Int(3) != Text("3")
    assert Symbol("x") == x
    assert hash(Add(x, 1)) == hash(Call(Add, (x, Int(1))))


def test_no_simplification_on_construction():
    e = Mul(2, Add(x, y))
    assert serialize(e) == "Mul(2, Add(x, y))"
    assert x + 0 == Call(Add, (x, Int(0)))
    assert -x == Call(Symbol("Neg"), (x,))


def test_immutable():
    e = Add(x, 1)
    with pytest.raises(AttributeError):
        e.args = ()
    with pytest.raises(AttributeError):
        x.name = "y"


def test_invalid_construction():
    with pytest.raises(ValueError):
        Symbol("1x")
    with pytest.raises(TypeError):
        Int(True)
    with pytest.raises(TypeError):
        expr(1.5)


def test_make_call_coerces():
    assert make_call("f", [1, "s"]) == Call(Text("f"), (Int(1), Text("s")))
    assert make_call(Symbol("f"), [1]) == Call(Symbol("f"), (Int(1),))


def test_pickle_roundtrip():
    e = parse('Sum(f(n), For(n, 1, N), NotEqual(n, "a"))')
    assert pickle.loads(pickle.dumps(e)) == e


def test_free_variables_respects_binders():
    e = parse("Sum(Pow(n, 2), For(n, 1, N))")
    assert free_variables(e) == {N}
    e = parse("Where(Add(f(1), a), Def(f(n), Mul(n, b)), Def(a, 3))")
    assert free_variables(e) == {Symbol("b")}
    e = parse("Sum(n, ForElement(n, Set(1, m)))")
    assert free_variables(e) == {Symbol("m")}


def test_free_variables_skips_constants():
    assert free_variables(parse("Add(Pi, Mul(ConstI, x))")) == {x}
    assert free_variables(parse("Element(x, ZZ)")) == {x}


def test_substitute_avoids_bound():
    e = parse("Add(n, Sum(n, For(n, 1, 3)))")
    assert substitute(e, {n: Int(5)}) == parse("Add(5, Sum(n, For(n, 1, 3)))")


def test_substitute_is_simultaneous():
    e = parse("f(x, y)")
    assert substitute(e, {x: y, y: x}) == parse("f(y, x)")


def test_subexpressions_and_replace():
    e = parse("Add(Sin(x), Mul(2, x))")
    paths = {p: s for p, s in subexpressions(e)}
    assert paths[()] == e
    assert paths[(0,)] == parse("Sin(x)")
    assert paths[(1, 1)] == x
    assert replace_at(e, (1, 1), y) == parse("Add(Sin(x), Mul(2, y))")
    assert replace_at(e, (), y) == y
