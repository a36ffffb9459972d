"""Exact arithmetic in quadratic fields Q(sqrt(d)).

Values are ``a + b*sqrt(d)`` with rational a, b and squarefree d != 1.
``sqrt(-1)`` is the imaginary unit, so Gaussian rationals are covered too.
This is the whole of the exact equality engine: rational canonicalization
plus single square-root surds.
"""

from fractions import Fraction
from math import gcd, isqrt

from .expr import Call, Int, Symbol, head_name

__all__ = ["Quad", "ExactUndefined", "to_quad", "from_quad", "quad_apply", "squarefree_split"]


class ExactUndefined(Exception):
    """Exact computation hit a pole (division by zero)."""


def _small_factor_split(n):
    # n > 0; returns (s, f) with n = s*s*f and f squarefree
    s, f = 1, 1
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            n //= p * p
            s *= p
            continue
        if n % p == 0:
            n //= p
            f *= p
        p += 1 if p == 2 else 2
    return s, f * n


def squarefree_split(n):
    """Write nonzero int n as s*s*f with f squarefree (sign kept in f)."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    r = isqrt(n)
    if r * r == n:
        return r, sign
    if n > 10 ** 12:
        raise OverflowError("integer too large to factor")
    s, f = _small_factor_split(n)
    return s, sign * f


class Quad:
    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=Fraction(0), d=1):
        a, b = Fraction(a), Fraction(b)
        if b == 0:
            d = 1
        self.a, self.b, self.d = a, b, d

    @classmethod
    def rational(cls, q):
        return cls(q)

    @classmethod
    def surd(cls, coeff, n):
        """coeff * sqrt(n) for integer n."""
        if n == 0 or coeff == 0:
            return cls(0)
        s, f = squarefree_split(n)
        if f == 1:
            return cls(Fraction(coeff) * s)
        return cls(0, Fraction(coeff) * s, f)

    def is_rational(self):
        return self.b == 0

    def is_real(self):
        return self.b == 0 or self.d > 0

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def key(self):
        return (self.a, self.b, self.d)

    def __eq__(self, other):
        return isinstance(other, Quad) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Quad({self.a}, {self.b}, {self.d})"

    def _field(self, other):
        if self.b == 0:
            return other.d
        if other.b == 0 or other.d == self.d:
            return self.d
        return None

    def __add__(self, other):
        d = self._field(other)
        if d is None:
            return None
        return Quad(self.a + other.a, self.b + other.b, d)

    def __neg__(self):
        return Quad(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        d = self._field(other)
        if d is not None:
            return Quad(self.a * other.a + self.b * other.b * d,
                        self.a * other.b + self.b * other.a, d)
        if self.a == 0 and other.a == 0:
            # pure surds from different fields
            sign = -1 if (self.d < 0 and other.d < 0) else 1
            return Quad.surd(sign * self.b * other.b, abs(self.d * other.d)
                             * (-1 if (self.d < 0) != (other.d < 0) else 1))
        return None

    def conj(self):
        return Quad(self.a, -self.b, self.d)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self):
        if self.is_zero():
            raise ExactUndefined("division by zero")
        n = self.norm()
        c = self.conj()
        return Quad(c.a / n, c.b / n, c.d)

    def __truediv__(self, other):
        inv = other.inverse()
        return self * inv

    def pow_int(self, n):
        if n < 0:
            return self.inverse().pow_int(-n)
        result = Quad(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def sign(self):
        """Sign of a real value, exactly."""
        if not self.is_real():
            raise ValueError("sign of a non-real number")
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 against b^2 d
        lhs, rhs = self.a * self.a, self.b * self.b * self.d
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def re(self):
        return Quad(self.a) if self.d < 0 else self

    def im(self):
        if self.d < 0:
            return Quad.surd(self.b, -self.d)
        return Quad(0)

    def abs(self):
        if self.is_real():
            return -self if self.sign() < 0 else self
        return Quad(self.a * self.a - self.b * self.b * self.d).sqrt()

    def sqrt(self):
        """Principal square root when it stays in a quadratic field, else None."""
        if self.b == 0:
            q = self.a
            if q == 0:
                return Quad(0)
            num, den = q.numerator, q.denominator
            try:
                return Quad.surd(Fraction(1, den), num * den)
            except OverflowError:
                return None
        disc = self.norm()
        if disc < 0:
            return None
        r = Quad(disc).sqrt()
        if r is None or not r.is_rational():
            return None
        # same field: (u + v sqrt d)^2 with u^2 = (a + r)/2, 2uv = b, u > 0
        u = Quad((self.a + r.a) / 2).sqrt()
        if u is not None and u.is_rational() and u.a > 0:
            return Quad(u.a, self.b / (2 * u.a), self.d)
        if self.d < 0:
            return None
        # sqrt(a + b sqrt d) = sqrt(x) + sign(b) sqrt(y) with x + y = a, 4xy = b^2 d
        x, y = (self.a + r.a) / 2, (self.a - r.a) / 2
        if x < 0 or y < 0:
            return None
        sx, sy = Quad(x).sqrt(), Quad(y).sqrt()
        if sx is None or sy is None:
            return None
        res = sx + (sy if self.b > 0 else -sy)
        return res


def quad_apply(name, qs):
    """Apply an arithmetic head to exact operands; None if not exact."""
    if any(q is None for q in qs):
        return None
    n = len(qs)
    if name in ("Add", "Mul") and n:
        acc = qs[0]
        for q in qs[1:]:
            acc = acc + q if name == "Add" else acc * q
            if acc is None:
                return None
        return acc
    if name == "Sub" and n == 2:
        return qs[0] - qs[1]
    if name == "Div" and n == 2:
        if qs[1].is_zero():
            raise ExactUndefined("division by zero")
        return qs[0] / qs[1]
    if name == "Neg" and n == 1:
        return -qs[0]
    if name == "Pos" and n == 1:
        return qs[0]
    if name == "Sqrt" and n == 1:
        return qs[0].sqrt()
    if name == "Pow" and n == 2:
        x, e = qs
        if not e.is_rational():
            return None
        e = e.a
        if e.denominator == 1:
            if abs(e.numerator) > 4096:
                return None
            if e < 0 and x.is_zero():
                raise ExactUndefined("zero to a negative power")
            return x.pow_int(e.numerator)
        if e.denominator == 2:
            r = x.sqrt()
            if r is None:
                return None
            if e < 0 and r.is_zero():
                raise ExactUndefined("zero to a negative power")
            return r.pow_int(e.numerator)
        return None
    if name in ("Re", "Im", "Abs") and n == 1:
        x = qs[0]
        return x.re() if name == "Re" else x.im() if name == "Im" else x.abs()
    return None


EXACT_HEADS = frozenset("Add Mul Sub Div Neg Pos Sqrt Pow Re Im Abs".split())


def to_quad(e, depth=64):
    """Exact value of a constant built from integers, ConstI and arithmetic.

    Returns None when the value is not in a single quadratic field (or the
    tree is deeper than ``depth``); raises ExactUndefined on a pole.
    """
    if isinstance(e, Int):
        return Quad(e.value)
    if isinstance(e, Symbol):
        return Quad(0, 1, -1) if e.name == "ConstI" else None
    name = head_name(e)
    if name not in EXACT_HEADS or depth <= 0:
        return None
    qs = []
    for a in e.args:
        q = to_quad(a, depth - 1)
        if q is None:
            return None
        qs.append(q)
    return quad_apply(name, qs)


_I = Symbol("ConstI")


def _rational_expr(q):
    if q.denominator == 1:
        return Int(q.numerator)
    return Call(Symbol("Div"), (Int(q.numerator), Int(q.denominator)))


def _surd_magnitude(b, d):
    """|b| * sqrt(d) for d > 1 as Div/Mul/Sqrt."""
    root = Call(Symbol("Sqrt"), (Int(d),))
    num, den = abs(b.numerator), b.denominator
    top = root if num == 1 else Call(Symbol("Mul"), (Int(num), root))
    return top if den == 1 else Call(Symbol("Div"), (top, Int(den)))


def _unit_magnitude(b, d):
    """|b| * sqrt(d) as canonical expression, d squarefree."""
    if d > 0:
        return _surd_magnitude(b, d)
    if d == -1:
        unit = _I
    else:
        unit = Call(Symbol("Mul"), (Call(Symbol("Sqrt"), (Int(-d),)), _I))
    num, den = abs(b.numerator), b.denominator
    top = unit if num == 1 else Call(Symbol("Mul"), (Int(num), unit))
    return top if den == 1 else Call(Symbol("Div"), (top, Int(den)))


def from_quad(q):
    """Canonical expression for an exact value."""
    if q.b == 0:
        return _rational_expr(q.a)
    mag = _unit_magnitude(q.b, q.d)
    if q.a == 0:
        return mag if q.b > 0 else Call(Symbol("Neg"), (mag,))
    head = "Add" if q.b > 0 else "Sub"
    return Call(Symbol(head), (_rational_expr(q.a), mag))
