"""Seeded random expression generators shared by the property tests."""

import random
from fractions import Fraction

from grimkit.expr import Call, Int, Symbol, Text

_NAMES = ["x", "y", "z", "n", "tau", "Pi", "ConstI", "f", "g", "Add", "Mul", "Sin",
          "For", "Where", "Def", "Sum", "a_1", "_h", "ZZ", "Lambda2", "True_"]
_TEXTS = ["", "abc", 'q"uote', "back\\slash", "tab\tnew\nline", "ünïcode ∑", "#not a comment"]


def random_tree(rng, depth=8):
    """Arbitrary expression, including call-headed calls and text atoms."""
    if depth <= 0 or rng.random() < 0.3:
        k = rng.randrange(4)
        if k == 0:
            return Int(rng.choice([0, 1, -1, 7, -42, 10 ** 30, -(2 ** 70)]) + rng.randrange(-3, 4))
        if k == 1:
            return Text(rng.choice(_TEXTS))
        return Symbol(rng.choice(_NAMES))
    head = Symbol(rng.choice(_NAMES))
    if rng.random() < 0.1:
        head = Call(head, (random_tree(rng, 1),))
    nargs = rng.choice([0, 1, 1, 2, 2, 3, 4])
    return Call(head, tuple(random_tree(rng, depth - 1) for _ in range(nargs)))


def random_trees(count, seed=0, depth=8):
    rng = random.Random(seed)
    return [random_tree(rng, rng.randint(0, depth)) for _ in range(count)]


# -- arithmetic trees with exact rational values ---------------------------------

def _c(name, *args):
    return Call(Symbol(name), args)


def random_arith(rng, depth=5):
    """Integer-leaf tree over Add/Sub/Mul/Div/Neg/Pow with small exponents."""
    if depth <= 0 or rng.random() < 0.25:
        return Int(rng.randint(-9, 12))
    k = rng.randrange(8)
    if k == 0:
        return _c("Add", *(random_arith(rng, depth - 1) for _ in range(rng.randint(2, 3))))
    if k == 1:
        return _c("Mul", *(random_arith(rng, depth - 1) for _ in range(rng.randint(2, 3))))
    if k == 2:
        return _c("Sub", random_arith(rng, depth - 1), random_arith(rng, depth - 1))
    if k == 3:
        return _c("Div", random_arith(rng, depth - 1), random_arith(rng, depth - 1))
    if k == 4:
        return _c("Neg", random_arith(rng, depth - 1))
    if k == 5:
        return _c("Pow", random_arith(rng, min(depth - 1, 2)), Int(rng.randint(-2, 3)))
    return _c(rng.choice(["Add", "Mul"]), random_arith(rng, depth - 1),
              random_arith(rng, depth - 1))


def exact_value(e):
    """Fraction value of an arithmetic tree; ZeroDivisionError at poles."""
    if isinstance(e, Int):
        return Fraction(e.value)
    name = e.head.name
    vals = [exact_value(a) for a in e.args]
    if name == "Add":
        return sum(vals, Fraction(0))
    if name == "Mul":
        out = Fraction(1)
        for v in vals:
            out *= v
        return out
    if name == "Sub":
        return vals[0] - vals[1]
    if name == "Div":
        return vals[0] / vals[1]
    if name == "Neg":
        return -vals[0]
    if name == "Pow":
        base, ex = vals
        if ex.denominator != 1:
            raise ValueError("non-integer exponent")
        if base == 0 and ex < 0:
            raise ZeroDivisionError
        return base ** int(ex)
    raise ValueError(name)


# -- numeric trees over supported heads ------------------------------------------

def random_rational(rng):
    n = rng.randint(-40, 40)
    d = rng.choice([1, 1, 2, 3, 7, 10, 64])
    return Int(n) if d == 1 else _c("Div", Int(n), Int(d))


def random_numeric(rng, depth=4):
    """Closed expression over the heads the enclosure code supports."""
    if depth <= 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.7:
            return random_rational(rng)
        return Symbol(rng.choice(["Pi", "ConstE", "ConstI"]))
    k = rng.randrange(10)
    sub = lambda: random_numeric(rng, depth - 1)  # noqa: E731
    if k == 0:
        return _c("Add", sub(), sub())
    if k == 1:
        return _c("Mul", sub(), sub())
    if k == 2:
        return _c("Sub", sub(), sub())
    if k == 3:
        return _c("Div", sub(), sub())
    if k == 4:
        return _c("Neg", sub())
    if k == 5:
        return _c("Pow", sub(), Int(rng.randint(-3, 4)))
    if k == 6:
        return _c(rng.choice(["Sin", "Cos"]), sub())
    if k == 7:
        return _c(rng.choice(["Sqrt", "Abs", "Re", "Im"]), sub())
    if k == 8:
        return _c("Log", sub())
    # keep Exp arguments small so values stay representable
    return _c("Exp", _c("Div", sub(), Int(rng.choice([4, 8]))))
