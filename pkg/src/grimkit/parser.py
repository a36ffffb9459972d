"""Parser for the textual Grim language.

Grammar (this package's definition; Grim is usually embedded in a host
language and has no standalone grammar of its own)::

    file     := expr*
    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := '-' unary | '+' unary | power
    power    := postfix ('**' unary)?
    postfix  := primary ('(' [expr (',' expr)*] ')')*
    primary  := INT | '-' INT | STRING | SYMBOL | '(' expr ')'

A minus sign glued to a digit in operand position is part of the integer
literal, so ``-3`` is the atom -3, ``a-3`` is ``Sub(a, 3)`` and ``--3`` is
``Neg(-3)``. Comments run from ``#`` to the end of the line.
"""

from .expr import Call, Int, Symbol, Text

__all__ = ["ParseError", "parse", "parse_file"]


class ParseError(Exception):
    def __init__(self, message, text, offset, expected=""):
        self.message = message or "syntax error"
        self.offset = offset
        self.line = text.count("\n", 0, offset) + 1
        self.column = offset - (text.rfind("\n", 0, offset) + 1) + 1
        self.expected = expected
        detail = f"; expected {expected}" if expected else ""
        super().__init__(f"line {self.line}, column {self.column} (offset {offset}): "
                         f"{self.message}{detail}")


# token kinds
INT, STR, SYM, OP, EOF = "int", "string", "symbol", "op", "end of input"

_OPS = ("**", "+", "-", "*", "/", "(", ")", ",")


def _tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and (text[j].isalpha() or text[j] == "_"):
                raise ParseError("malformed number (implicit multiplication is not allowed)",
                                 text, j)
            toks.append((INT, text[i:j], i))
            i = j
        elif c.isascii() and (c.isalpha() or c == "_"):
            j = i
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append((SYM, text[i:j], i))
            i = j
        elif c == '"':
            j = i + 1
            buf = []
            while True:
                if j >= n:
                    raise ParseError("unterminated string", text, n, '"')
                ch = text[j]
                if ch == '"':
                    break
                if ch == "\\":
                    if j + 1 < n and text[j + 1] in '"\\':
                        buf.append(text[j + 1])
                        j += 2
                        continue
                    raise ParseError("invalid escape in string", text, j, '\\" or \\\\')
                buf.append(ch)
                j += 1
            toks.append((STR, "".join(buf), i))
            i = j + 1
        else:
            for op in _OPS:
                if text.startswith(op, i):
                    toks.append((OP, op, i))
                    i += len(op)
                    break
            else:
                raise ParseError(f"unexpected character {c!r}", text, i)
    toks.append((EOF, "", n))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self, k=0):
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def at(self, kind, value=None):
        t = self.peek()
        return t[0] == kind and (value is None or t[1] == value)

    def error(self, message, expected=""):
        kind, value, off = self.peek()
        if not message:
            message = "unexpected end of input" if kind == EOF else f"unexpected {value!r}"
        raise ParseError(message, self.text, off, expected)

    def expect(self, value):
        if not self.at(OP, value):
            self.error("", repr(value))
        return self.next()

    def expr(self):
        left = self.term()
        while self.at(OP, "+") or self.at(OP, "-"):
            op = self.next()[1]
            right = self.term()
            left = Call(Symbol("Add" if op == "+" else "Sub"), (left, right))
        return left

    def term(self):
        left = self.unary()
        while self.at(OP, "*") or self.at(OP, "/"):
            op = self.next()[1]
            right = self.unary()
            left = Call(Symbol("Mul" if op == "*" else "Div"), (left, right))
        return left

    def unary(self):
        if self.at(OP, "-"):
            _, _, off = self.peek()
            kind, value, off2 = self.peek(1)
            if kind == INT and off2 == off + 1:
                self.pos += 2
                return self.power(self.postfix(Int(-int(value))))
            self.next()
            return Call(Symbol("Neg"), (self.unary(),))
        if self.at(OP, "+"):
            self.next()
            return Call(Symbol("Pos"), (self.unary(),))
        return self.power(self.postfix(self.primary()))

    def power(self, base):
        if self.at(OP, "**"):
            self.next()
            return Call(Symbol("Pow"), (base, self.unary()))
        return base

    def postfix(self, e):
        while self.at(OP, "("):
            self.next()
            args = []
            if not self.at(OP, ")"):
                args.append(self.expr())
                while self.at(OP, ","):
                    self.next()
                    args.append(self.expr())
            if not self.at(OP, ")"):
                self.error("" if not self.at(EOF) else "unclosed call", "',' or ')'")
            self.next()
            e = Call(e, tuple(args))
        return e

    def primary(self):
        kind, value, _ = self.peek()
        if kind == INT:
            self.next()
            return Int(int(value))
        if kind == STR:
            self.next()
            return Text(value)
        if kind == SYM:
            self.next()
            return Symbol(value)
        if self.at(OP, "("):
            self.next()
            e = self.expr()
            if not self.at(OP, ")"):
                self.error("" if not self.at(EOF) else "unclosed parenthesis", "')'")
            self.next()
            return e
        self.error("", "an expression")


def parse(text):
    """Parse a single expression; raises ParseError."""
    p = _Parser(text)
    e = p.expr()
    if not p.at(EOF):
        p.error("trailing input after expression", "end of input")
    return e


def parse_file(text):
    """Parse a sequence of top-level expressions."""
    p = _Parser(text)
    out = []
    while not p.at(EOF):
        out.append(p.expr())
    return out
