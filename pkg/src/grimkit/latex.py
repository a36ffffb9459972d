"""Presentation LaTeX for expressions.

Parentheses are inserted from a precedence table, never copied from the
input: a child gets ``\\left( ... \\right)`` exactly when its own precedence
is lower than the slot it sits in requires.
"""

from .expr import Call, Int, Symbol, Text, head_name

__all__ = ["to_latex", "to_latex_display", "RENDER_RULES"]

# precedence levels
LOWEST, IMPLIES, OR, AND, NOT, REL, SUM, NEG, PROD, FRAC, POW, ATOM = (
    0, 1, 2, 3, 4, 5, 10, 15, 20, 90, 30, 100)

_GREEK = set(
    "alpha beta gamma delta epsilon zeta eta theta iota kappa lambda mu nu xi "
    "pi rho sigma tau upsilon phi chi psi omega varepsilon vartheta varphi "
    "Gamma Delta Theta Lambda Xi Pi Sigma Upsilon Phi Psi Omega".split())

_CONSTANTS = {
    "Pi": r"\pi", "ConstE": "e", "ConstI": "i", "Infinity": r"\infty",
    "Undefined": r"\mathfrak{u}", "True_": r"\operatorname{True}",
    "False_": r"\operatorname{False}", "ZZ": r"\mathbb{Z}", "QQ": r"\mathbb{Q}",
    "RR": r"\mathbb{R}", "CC": r"\mathbb{C}", "HH": r"\mathbb{H}",
    "SL2Z": r"\operatorname{SL}_2(\mathbb{Z})", "Otherwise": r"\text{otherwise}",
}

# standard function macros
_FUNCTIONS = {"Sin": r"\sin", "Cos": r"\cos", "Log": r"\log", "Gamma": r"\Gamma",
              "DedekindEta": r"\eta", "Re": r"\operatorname{Re}", "Im": r"\operatorname{Im}"}

# heads whose leading arguments become a subscript: name -> (symbol, count)
_SUBSCRIPTED = {"EisensteinG": ("G", 1), "BernoulliB": ("B", 1)}

_RELATIONS = {"Equal": "=", "NotEqual": r"\ne", "Less": "<", "LessEqual": r"\le",
              "Greater": ">", "GreaterEqual": r"\ge", "Element": r"\in",
              "NotElement": r"\notin", "Subset": r"\subseteq"}

_CONNECTIVES = {"And": (AND, r" \;\mathbin{\operatorname{and}}\; "),
                "Or": (OR, r" \;\mathbin{\operatorname{or}}\; "),
                "Implies": (IMPLIES, r" \;\implies\; ")}

_SET_OPS = {"SetMinus": r"\setminus", "Union": r"\cup", "Intersection": r"\cap"}


def _paren(s):
    return r"\left(" + s + r"\right)"


def _symbol(name):
    if name in _CONSTANTS:
        return _CONSTANTS[name]
    if name in _GREEK:
        return "\\" + name
    base, _, sub = name.partition("_")
    if sub and base and sub.strip("_"):
        return _symbol(base) + "_{" + _symbol(sub) + "}"
    # trailing digits become a subscript: x1 -> x_{1}
    stripped = name.rstrip("0123456789")
    if stripped and stripped != name and len(stripped) == 1:
        return stripped + "_{" + name[len(stripped):] + "}"
    if len(name) == 1:
        return name
    return r"\operatorname{" + name.replace("_", r"\_") + "}"


def _text(s):
    out = []
    for ch in s:
        if ch in "\\":
            out.append(r"\textbackslash{}")
        elif ch in "{}$&#%_":
            out.append("\\" + ch)
        elif ch == "^":
            out.append(r"\^{}")
        elif ch == "~":
            out.append(r"\~{}")
        else:
            out.append(ch)
    return r"\text{" + "".join(out) + "}"


def to_latex(e):
    """LaTeX math-mode source for ``e``; total over all expressions."""
    return _render(e)[0]


def to_latex_display(e):
    return "$$" + to_latex(e) + "$$"


def _wrap(e, minimum, signless=False):
    """Render e, parenthesized below ``minimum`` precedence.

    With ``signless`` a rendering that opens with a sign is also wrapped,
    so that no operator is ever followed directly by a minus sign.
    """
    s, p = _render(e)
    if p < minimum or (signless and s[:1] in "-+"):
        return _paren(s)
    return s


def _args(args):
    return ", ".join(to_latex(a) for a in args)


def _call_form(head_tex, args):
    return head_tex + r"\!\left(" + _args(args) + r"\right)"


def _leading_numeric(e):
    """Does the rendering of e begin with a digit, a minus sign or a fraction?"""
    if isinstance(e, Int):
        return True
    name = head_name(e)
    if name in ("Div", "Neg"):
        return True
    if name == "Pow" and e.args:
        return _leading_numeric(e.args[0])
    if name in ("Mul", "Add", "Sub") and e.args:
        return _leading_numeric(e.args[0])
    return False


def _render(e):
    """(latex, precedence)."""
    if isinstance(e, Int):
        return str(e.value), (NEG if e.value < 0 else ATOM)
    if isinstance(e, Text):
        return _text(e.value), ATOM
    if isinstance(e, Symbol):
        return _symbol(e.name), ATOM
    name = head_name(e)
    args = e.args
    n = len(args)
    if name is None:
        return _wrap(e.head, ATOM) + r"\!\left(" + _args(args) + r"\right)", ATOM
    rule = RENDER_RULES.get((name, n)) or RENDER_RULES.get((name, None))
    if rule is not None:
        out = rule(args)
        if out is not None:
            return out
    return _fallback(e.head, name, args), ATOM


def _fallback(head, name, args):
    if len(name) == 1 or name in _GREEK:
        return _symbol(name) + "(" + _args(args) + ")"
    return _call_form(r"\operatorname{" + name.replace("_", r"\_") + "}", args)


# -- rules -------------------------------------------------------------------

def _add(args):
    if not args:
        return None
    parts = [_wrap(args[0], SUM)]
    for a in args[1:]:
        s, p = _render(a)
        parts.append("+ " + (_paren(s) if p <= SUM or s[:1] in "-+" else s))
    return " ".join(parts), SUM


def _sub(args):
    left = _wrap(args[0], SUM)
    right = _wrap(args[1], PROD, signless=True)
    return left + " - " + right, SUM


def _neg(args):
    return "-" + _wrap(args[0], PROD, signless=True), NEG


def _pos(args):
    return "+" + _wrap(args[0], PROD, signless=True), NEG


def _mul(args):
    if not args:
        return None
    out = _wrap(args[0], NEG)
    for a in args[1:]:
        s, p = _render(a)
        if p < PROD or s[:1] in "-+":
            s = _paren(s)
            out += " " + s
        elif _leading_numeric(a):
            out += r" \cdot " + s
        else:
            out += " " + s
    return out, PROD


def _div(args):
    return r"\frac{" + to_latex(args[0]) + "}{" + to_latex(args[1]) + "}", FRAC


def _pow(args):
    base, exp = args
    return "{" + _wrap(base, ATOM) + "}^{" + to_latex(exp) + "}", POW


def _sqrt(args):
    return r"\sqrt{" + to_latex(args[0]) + "}", ATOM


def _abs(args):
    return r"\left|" + to_latex(args[0]) + r"\right|", ATOM


def _exp(args):
    return "e^{" + to_latex(args[0]) + "}", POW


def _function(macro):
    def render(args):
        return _call_form(macro, args), ATOM
    return render


def _subscripted(sym, count):
    def render(args):
        sub = ", ".join(to_latex(a) for a in args[:count])
        head = sym + "_{" + sub + "}"
        rest = args[count:]
        if not rest:
            return head, ATOM
        return _call_form(head, rest), ATOM
    return render


def _lambert(args):
    if len(args) == 1:
        return _call_form("W_{0}", args), ATOM
    if len(args) != 2:
        return None
    return _call_form("W_{" + to_latex(args[1]) + "}", args[:1]), ATOM


def _hypergeometric(p, q):
    def render(args):
        return _call_form(r"\,{}_{%d}F_{%d}" % (p, q), args), ATOM
    return render


def _relation(op):
    def render(args):
        if len(args) < 2:
            return None
        return (" " + op + " ").join(_wrap(a, REL + 1) for a in args), REL
    return render


def _connective(name):
    prec, op = _CONNECTIVES[name]

    def render(args):
        if not args:
            return None
        return op.join(_wrap(a, prec + 1) for a in args), prec
    return render


def _not(args):
    return r"\operatorname{not}\, " + _wrap(args[0], ATOM), NOT


def _congruent(args):
    a, b, m = args
    return (_wrap(a, REL + 1) + r" \equiv " + _wrap(b, REL + 1)
            + r" \pmod {" + to_latex(m) + "}"), REL


def _set_op(name):
    op = _SET_OPS[name]

    def render(args):
        if not args:
            return None
        return (" " + op + " ").join(_wrap(a, PROD) for a in args), SUM
    return render


def _zz_bound(op):
    def render(args):
        return r"\mathbb{Z}_{" + op + " " + to_latex(args[0]) + "}", ATOM
    return render


def _interval(left, right):
    def render(args):
        return r"\left" + left + _args(args) + r"\right" + right, ATOM
    return render


def _set(args):
    return r"\left\{" + _args(args) + r"\right\}", ATOM


def _tuple(args):
    return r"\left(" + _args(args) + r"\right)", ATOM


def _matrix(args):
    a, b, c, d = (to_latex(x) for x in args)
    return r"\begin{pmatrix} " + a + " & " + b + r" \\ " + c + " & " + d + r" \end{pmatrix}", ATOM


def _cases(args):
    rows = []
    for br in args:
        if head_name(br) != "Tuple" or len(br.args) != 2:
            return None
        val, cond = br.args
        rows.append(to_latex(val) + ", & " + to_latex(cond) + r"\\")
    return r"\begin{cases} " + "".join(rows) + r" \end{cases}", ATOM


def _sum(args):
    if len(args) not in (2, 3):
        return None
    body, rng = args[0], args[1]
    rn = head_name(rng)
    if rn == "For" and len(rng.args) == 3:
        var, lo, hi = rng.args
        lower = to_latex(var) + "=" + to_latex(lo)
        upper = "^{" + to_latex(hi) + "}"
    elif rn == "ForElement" and len(rng.args) == 2:
        lower = to_latex(rng.args[0]) + r" \in " + to_latex(rng.args[1])
        upper = ""
    else:
        return None
    if len(args) == 3:
        lower = r"\textstyle{" + lower + r" \atop " + to_latex(args[2]) + "}"
    return r"\sum_{" + lower + "}" + upper + " " + _wrap(body, PROD), SUM


def _def(args):
    return to_latex(args[0]) + " = " + to_latex(args[1]), REL


def _where(args):
    if not args:
        return None
    body = to_latex(args[0])
    defs = ", ".join(to_latex(d) for d in args[1:])
    return body + r"\; \text{ where } " + defs, LOWEST


RENDER_RULES = {
    ("Add", None): _add, ("Sub", 2): _sub, ("Neg", 1): _neg, ("Pos", 1): _pos,
    ("Mul", None): _mul, ("Div", 2): _div, ("Pow", 2): _pow, ("Sqrt", 1): _sqrt,
    ("Abs", 1): _abs, ("Exp", 1): _exp, ("LambertW", None): _lambert,
    ("Hypergeometric2F1", 4): _hypergeometric(2, 1),
    ("Hypergeometric1F1", 3): _hypergeometric(1, 1),
    ("Not", 1): _not, ("CongruentMod", 3): _congruent,
    ("ZZGreaterEqual", 1): _zz_bound(r"\ge"), ("ZZLessEqual", 1): _zz_bound(r"\le"),
    ("OpenInterval", 2): _interval("(", ")"), ("ClosedInterval", 2): _interval("[", "]"),
    ("Set", None): _set, ("Tuple", None): _tuple, ("Matrix2x2", 4): _matrix,
    ("Cases", None): _cases, ("Sum", None): _sum, ("Def", 2): _def,
    ("Where", None): _where,
}
for _name, _macro in _FUNCTIONS.items():
    RENDER_RULES[(_name, None)] = _function(_macro)
for _name, (_sym, _count) in _SUBSCRIPTED.items():
    RENDER_RULES[(_name, None)] = _subscripted(_sym, _count)
for _name, _op in _RELATIONS.items():
    RENDER_RULES[(_name, None)] = _relation(_op)
for _name in _CONNECTIVES:
    RENDER_RULES[(_name, None)] = _connective(_name)
for _name in _SET_OPS:
    RENDER_RULES[(_name, None)] = _set_op(_name)
