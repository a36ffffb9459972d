import pytest

from grimkit.expr import Call, Int, Symbol, Text, serialize
from grimkit.parser import ParseError, parse, parse_file

from gen import random_trees


@pytest.mark.parametrize("text, core", [
    ("2*(a+b)", "Mul(2, Add(a, b))"),
    ("a-3", "Sub(a, 3)"),
    ("-3", "-3"),
    ("--3", "Neg(-3)"),
    ("-x", "Neg(x)"),
    ("-3**2", "Pow(-3, 2)"),
    ("-x**2", "Neg(Pow(x, 2))"),
    ("a**b**c", "Pow(a, Pow(b, c))"),
    ("a/b/c", "Div(Div(a, b), c)"),
    ("a-b-c", "Sub(Sub(a, b), c)"),
    ("a+b*c", "Add(a, Mul(b, c))"),
    ("f(x)(y)", "f(x)(y)"),
    ("f()", "f()"),
    ('"a\\"b"', '"a\\"b"'),
    ("Sin(Pi*n)", "Sin(Mul(Pi, n))"),
])
def test_sugar(text, core):
    assert serialize(parse(text)) == core


def test_integers_are_arbitrary_precision():
    assert parse("123456789012345678901234567890") == Int(123456789012345678901234567890)


def test_comments_and_whitespace():
    assert parse("  Add( x ,  # a comment\n 1 )  ") == Call(Symbol("Add"), (Symbol("x"), Int(1)))


def test_parse_file_multiple():
    exprs = parse_file("f(1)\n# c\ng(2)\n\nh")
    assert [serialize(e) for e in exprs] == ["f(1)", "g(2)", "h"]
    assert parse_file("") == []


@pytest.mark.parametrize("bad", ["f(", "f(1,,2)", ")", "", "3x", '"open', "a $ b", "f(1) g"])
def test_errors_are_positioned(bad):
    with pytest.raises(ParseError) as info:
        parse(bad)
    err = info.value
    assert err.line >= 1 and err.column >= 1
    assert 0 <= err.offset <= len(bad)


def test_error_position_detail():
    with pytest.raises(ParseError) as info:
        parse("Add(x,\n  1 2)")
    assert (info.value.line, info.value.column) == (2, 5)


def test_text_escapes_roundtrip():
    t = Text('say "hi" \\ there')
    assert parse(serialize(t)) == t


def test_roundtrip_random_trees():
    for e in random_trees(2000, seed=11):
        s = serialize(e)
        assert parse(s) == e, s
        assert serialize(parse(s)) == s
