"""Verified numeric enclosures of constant expressions.

Real numbers are bounded by intervals with dyadic endpoints, rounded
outward after every operation; complex numbers by rectangular boxes of two
such intervals. Transcendental functions use argument reduction plus Taylor
series whose truncation error is bounded by a geometric majorant, so every
result provably contains the exact value.
"""

import enum
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .expr import Call, Int, Symbol, head_name

__all__ = [
    "Dyadic", "Interval", "Enclosure", "NotNumeric", "Ordering",
    "enclose", "compare", "DEFAULT_PRECISION", "MAX_PRECISION",
]

DEFAULT_PRECISION = 64
MAX_PRECISION = 4096


class NotNumeric(Exception):
    """Expression is outside the numerically supported subset."""


class _Indeterminate(Exception):
    # enclosure too wide to decide (e.g. divisor interval straddles zero)
    pass


class _UndefinedValue(Exception):
    # provably undefined (division by exact zero, log of exact zero)
    pass


class Dyadic:
    """Exact number ``man * 2**exp`` kept with an odd (or zero) mantissa."""

    __slots__ = ("man", "exp")

    def __init__(self, man, exp=0):
        if man == 0:
            exp = 0
        else:
            tz = (man & -man).bit_length() - 1
            if tz:
                man >>= tz
                exp += tz
        self.man = man
        self.exp = exp

    @classmethod
    def from_int(cls, n):
        return cls(n, 0)

    def __add__(self, other):
        if self.man == 0:
            return other
        if other.man == 0:
            return self
        if self.exp <= other.exp:
            return Dyadic(self.man + (other.man << (other.exp - self.exp)), self.exp)
        return Dyadic((self.man << (self.exp - other.exp)) + other.man, other.exp)

    def __neg__(self):
        return Dyadic(-self.man, self.exp)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return Dyadic(self.man * other.man, self.exp + other.exp)

    def sign(self):
        return (self.man > 0) - (self.man < 0)

    def _cmp(self, other):
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        return isinstance(other, Dyadic) and self.man == other.man and self.exp == other.exp

    def __hash__(self):
        return hash((self.man, self.exp))

    def __abs__(self):
        return self if self.man >= 0 else -self

    def __repr__(self):
        return f"Dyadic({self.man}, {self.exp})"

    def to_fraction(self):
        if self.exp >= 0:
            return Fraction(self.man << self.exp)
        return Fraction(self.man, 1 << -self.exp)

    def is_integer(self):
        return self.exp >= 0

    def mag(self):
        """Smallest m with |self| < 2**m (for nonzero values)."""
        return self.man.bit_length() + self.exp if self.man else -(1 << 60)

    def floor(self, prec):
        bl = self.man.bit_length()
        if bl <= prec:
            return self
        shift = bl - prec
        return Dyadic(self.man >> shift, self.exp + shift)

    def ceil(self, prec):
        bl = self.man.bit_length()
        if bl <= prec:
            return self
        shift = bl - prec
        return Dyadic(-((-self.man) >> shift), self.exp + shift)


ZERO = Dyadic(0)
ONE = Dyadic(1)


def _div_round(a, b, prec, up):
    if a.man == 0:
        return ZERO
    shift = max(0, prec + 2 + b.man.bit_length() - a.man.bit_length())
    q, r = divmod(a.man << shift, b.man)
    if up and r:
        q += 1
    d = Dyadic(q, a.exp - shift - b.exp)
    return d.ceil(prec) if up else d.floor(prec)


def _sqrt_round(a, prec, up):
    if a.man == 0:
        return ZERO
    m, e = a.man, a.exp
    shift = max(0, 2 * prec + 4 - m.bit_length())
    if (e - shift) % 2:
        shift += 1
    n = m << shift
    r = isqrt(n)
    if up and r * r != n:
        r += 1
    d = Dyadic(r, (e - shift) // 2)
    return d.ceil(prec) if up else d.floor(prec)


class Interval:
    """Closed real interval [lo, hi] with dyadic endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        if hi < lo:
            raise ValueError("empty interval")
        self.lo = lo
        self.hi = hi

    @classmethod
    def point(cls, d):
        return cls(d, d)

    @classmethod
    def from_int(cls, n):
        d = Dyadic(n)
        return cls(d, d)

    @classmethod
    def from_fraction(cls, q, prec):
        a, b = Dyadic(q.numerator), Dyadic(q.denominator)
        return cls(_div_round(a, b, prec, False), _div_round(a, b, prec, True))

    def is_point(self):
        return self.lo == self.hi

    def is_zero(self):
        return self.lo.man == 0 and self.hi.man == 0

    def contains_zero(self):
        return self.lo.sign() <= 0 <= self.hi.sign()

    def contains(self, other):
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other):
        return not (self.hi < other.lo or other.hi < self.lo)

    def width(self):
        return self.hi - self.lo

    def mid(self):
        return Dyadic((self.lo + self.hi).man, (self.lo + self.hi).exp - 1)

    def mag(self):
        """Upper bound for |x| over the interval."""
        return max(abs(self.lo), abs(self.hi))

    def __repr__(self):
        return f"[{float(self.lo.to_fraction())}, {float(self.hi.to_fraction())}]"


IZERO = Interval.point(ZERO)
IONE = Interval.point(ONE)


def _rnd(lo, hi, p):
    return Interval(lo.floor(p), hi.ceil(p))


def iv_add(x, y, p):
    return _rnd(x.lo + y.lo, x.hi + y.hi, p)


def iv_sub(x, y, p):
    return _rnd(x.lo - y.hi, x.hi - y.lo, p)


def iv_neg(x):
    return Interval(-x.hi, -x.lo)


def iv_mul(x, y, p):
    if x.is_point() and y.is_point():
        v = x.lo * y.lo
        return _rnd(v, v, p)
    prods = (x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi)
    return _rnd(min(prods), max(prods), p)


def iv_sqr(x, p):
    a, b = x.lo * x.lo, x.hi * x.hi
    if x.lo.sign() >= 0:
        return _rnd(a, b, p)
    if x.hi.sign() <= 0:
        return _rnd(b, a, p)
    return _rnd(ZERO, max(a, b), p)


def iv_div(x, y, p):
    if y.is_zero():
        raise _UndefinedValue("division by zero")
    if y.contains_zero():
        raise _Indeterminate("divisor straddles zero")
    lows = [_div_round(a, b, p, False) for a in (x.lo, x.hi) for b in (y.lo, y.hi)]
    highs = [_div_round(a, b, p, True) for a in (x.lo, x.hi) for b in (y.lo, y.hi)]
    return Interval(min(lows), max(highs))


def iv_div_int(x, n, p):
    d = Dyadic(n)
    if n > 0:
        return Interval(_div_round(x.lo, d, p, False), _div_round(x.hi, d, p, True))
    return iv_div(x, Interval.point(d), p)


def iv_scale2(x, k):
    """Exact multiplication by 2**k."""
    return Interval(Dyadic(x.lo.man, x.lo.exp + k), Dyadic(x.hi.man, x.hi.exp + k))


def iv_abs(x):
    if x.lo.sign() >= 0:
        return x
    if x.hi.sign() <= 0:
        return iv_neg(x)
    return Interval(ZERO, max(-x.lo, x.hi))


def iv_sqrt(x, p):
    if x.hi.sign() < 0:
        raise _Indeterminate("sqrt of negative interval")
    lo = x.lo if x.lo.sign() > 0 else ZERO
    return Interval(_sqrt_round(lo, p, False), _sqrt_round(x.hi, p, True))


def iv_widen(x, t, p):
    """x + [-t, t]."""
    return _rnd(x.lo - t, x.hi + t, p)


def _eps(wp):
    return Dyadic(1, -wp)


# -- exponential -------------------------------------------------------------

def _exp_point(x, p):
    if x.man == 0:
        return IONE
    mag = x.mag()
    if mag > 40:
        raise NotNumeric("exponent argument too large")
    s = max(0, mag + 8)
    wp = p + s + 16
    r = Interval.point(Dyadic(x.man, x.exp - s))
    term = IONE
    total = IONE
    eps = _eps(wp + 2)
    k = 0
    while True:
        k += 1
        term = iv_div_int(iv_mul(term, r, wp), k, wp)
        total = iv_add(total, term, wp)
        if term.mag() < eps:
            break
    # |r| < 2**-8, so the remainder is bounded by the last term
    total = iv_widen(total, term.mag(), wp)
    for _ in range(s):
        total = iv_sqr(total, wp)
    return _rnd(total.lo, total.hi, p)


def iv_exp(x, p):
    if x.is_point():
        return _exp_point(x.lo, p)
    return Interval(_exp_point(x.lo, p).lo, _exp_point(x.hi, p).hi)


# -- logarithm ---------------------------------------------------------------

def _atanh_series(z, wp):
    # requires |z|**2 <= 1/2 so the tail is bounded by the last term
    z2 = iv_sqr(z, wp)
    term = z
    total = z
    eps = _eps(wp + 2)
    k = 0
    while True:
        k += 1
        term = iv_mul(term, z2, wp)
        total = iv_add(total, iv_div_int(term, 2 * k + 1, wp), wp)
        if term.mag() < eps:
            break
    return iv_widen(total, term.mag(), wp)


@lru_cache(maxsize=64)
def _ln2(wp):
    z = Interval.from_fraction(Fraction(1, 3), wp + 4)
    return iv_scale2(_atanh_series(z, wp + 4), 1)


def _log_point(x, p):
    if x.sign() <= 0:
        raise _Indeterminate("log of nonpositive")
    if x == ONE:
        return IZERO
    wp = p + 24
    k = x.mag() - 1
    t = Dyadic(x.man, x.exp - k)          # t in [1, 2)
    if t > Dyadic(3, -1):
        k += 1
        t = Dyadic(t.man, t.exp - 1)      # t in [3/4, 3/2)
    T = Interval.point(t)
    z = iv_div(iv_sub(T, IONE, wp), iv_add(T, IONE, wp), wp)
    res = iv_scale2(_atanh_series(z, wp), 1)
    if k:
        res = iv_add(res, iv_mul(Interval.from_int(k), _ln2(wp + k.bit_length()), wp), wp)
    return _rnd(res.lo, res.hi, p)


def iv_log(x, p):
    if x.lo.sign() <= 0:
        if x.is_zero():
            raise _UndefinedValue("log(0)")
        raise _Indeterminate("log of interval touching zero")
    if x.is_point():
        return _log_point(x.lo, p)
    return Interval(_log_point(x.lo, p).lo, _log_point(x.hi, p).hi)


# -- arctangent and pi -------------------------------------------------------

def _atan_series(z, wp):
    # requires |z| <= 1: alternating series, remainder below the last term
    z2 = iv_sqr(z, wp)
    term = z
    total = z
    eps = _eps(wp + 2)
    k = 0
    while True:
        k += 1
        term = iv_mul(term, z2, wp)
        t = iv_div_int(term, 2 * k + 1, wp)
        total = iv_sub(total, t, wp) if k % 2 else iv_add(total, t, wp)
        if term.mag() < eps:
            break
    return iv_widen(total, term.mag(), wp)


@lru_cache(maxsize=64)
def _pi(wp):
    w = wp + 8
    a = _atan_series(Interval.from_fraction(Fraction(1, 5), w), w)
    b = _atan_series(Interval.from_fraction(Fraction(1, 239), w), w)
    return iv_sub(iv_scale2(a, 4), iv_scale2(b, 2), w)


def pi_interval(p):
    r = _pi(p)
    return _rnd(r.lo, r.hi, p)


def _atan_point(x, p):
    if x.man == 0:
        return IZERO
    wp = p + 24
    X = Interval.point(x)
    flip = abs(x) > ONE
    if flip:
        X = iv_div(IONE, X, wp)
    for _ in range(3):
        # atan(x) = 2 atan(x / (1 + sqrt(1 + x^2)))
        X = iv_div(X, iv_add(IONE, iv_sqrt(iv_add(IONE, iv_sqr(X, wp), wp), wp), wp), wp)
    res = iv_scale2(_atan_series(X, wp), 3)
    if flip:
        half_pi = iv_scale2(_pi(wp), -1)
        res = iv_sub(half_pi, res, wp) if x.sign() > 0 else iv_sub(iv_neg(half_pi), res, wp)
    return _rnd(res.lo, res.hi, p)


def iv_atan(x, p):
    if x.is_point():
        return _atan_point(x.lo, p)
    return Interval(_atan_point(x.lo, p).lo, _atan_point(x.hi, p).hi)


def iv_atan2(y, x, p):
    """Principal argument of the box x + iy; raises if it meets the cut or 0."""
    if y.is_zero():
        if x.lo.sign() > 0:
            return IZERO
        if x.hi.sign() < 0:
            return pi_interval(p)
        raise _Indeterminate("argument near zero")
    wp = p + 8
    if x.lo.sign() > 0:
        # right half plane: atan(y/x) is monotone in each variable, corners suffice
        vals = [iv_atan(iv_div(Interval.point(b), Interval.point(a), wp), wp)
                for a in (x.lo, x.hi) for b in (y.lo, y.hi)]
    elif y.lo.sign() > 0:
        vals = [iv_sub(iv_scale2(_pi(wp), -1),
                       iv_atan(iv_div(Interval.point(a), Interval.point(b), wp), wp), wp)
                for a in (x.lo, x.hi) for b in (y.lo, y.hi)]
    elif y.hi.sign() < 0:
        vals = [iv_sub(iv_neg(iv_scale2(_pi(wp), -1)),
                       iv_atan(iv_div(Interval.point(a), Interval.point(b), wp), wp), wp)
                for a in (x.lo, x.hi) for b in (y.lo, y.hi)]
    else:
        raise _Indeterminate("box meets the branch cut")
    return _rnd(min(v.lo for v in vals), max(v.hi for v in vals), p)


# -- sine and cosine ---------------------------------------------------------

def _sin_cos_series(r, wp):
    """(sin r, cos r) for an interval r with |r| <= 1."""
    r2 = iv_sqr(r, wp)
    eps = _eps(wp + 2)
    s_term, s = r, r
    c_term, c = IONE, IONE
    k = 0
    while True:
        k += 1
        s_term = iv_div_int(iv_mul(s_term, r2, wp), (2 * k) * (2 * k + 1), wp)
        c_term = iv_div_int(iv_mul(c_term, r2, wp), (2 * k - 1) * (2 * k), wp)
        if k % 2:
            s, c = iv_sub(s, s_term, wp), iv_sub(c, c_term, wp)
        else:
            s, c = iv_add(s, s_term, wp), iv_add(c, c_term, wp)
        if s_term.mag() < eps and c_term.mag() < eps:
            break
    return iv_widen(s, s_term.mag(), wp), iv_widen(c, c_term.mag(), wp)


_UNIT = Interval(Dyadic(-1), Dyadic(1))


def _clamp_unit(x):
    lo = x.lo if x.lo > Dyadic(-1) else Dyadic(-1)
    hi = x.hi if x.hi < ONE else ONE
    return Interval(lo, hi)


def iv_sin_cos(x, p):
    if x.is_zero():
        return IZERO, IONE
    if x.width() > Dyadic(1):
        return _UNIT, _UNIT
    mag = max(0, x.mag().mag())
    if mag > 40:
        raise NotNumeric("trigonometric argument too large")
    wp = p + 24 + mag
    half_pi = iv_scale2(_pi(wp), -1)
    k = round(x.mid().to_fraction() / half_pi.mid().to_fraction())
    r = iv_sub(x, iv_mul(Interval.from_int(k), half_pi, wp), wp)
    s, c = _sin_cos_series(r, wp)
    q = k % 4
    if q == 1:
        s, c = c, iv_neg(s)
    elif q == 2:
        s, c = iv_neg(s), iv_neg(c)
    elif q == 3:
        s, c = iv_neg(c), s
    s, c = _clamp_unit(s), _clamp_unit(c)
    return _rnd(s.lo, s.hi, p), _rnd(c.lo, c.hi, p)


# -- complex boxes -----------------------------------------------------------

class Enclosure:
    """Rectangular complex enclosure ``re + i*im``.

    ``status`` is "ok", "undefined" (provably a function evaluated outside its
    domain) or "unknown" (precision insufficient to decide anything).
    """

    __slots__ = ("re", "im", "status")

    def __init__(self, re, im=IZERO, status="ok"):
        self.re = re
        self.im = im
        self.status = status

    @classmethod
    def undefined(cls):
        return cls(IZERO, IZERO, "undefined")

    @classmethod
    def unknown(cls):
        return cls(IZERO, IZERO, "unknown")

    @property
    def ok(self):
        return self.status == "ok"

    def is_real(self):
        """True when the imaginary part is provably zero."""
        return self.im.is_zero()

    def is_point(self):
        return self.re.is_point() and self.im.is_point()

    def contains(self, other):
        return self.re.contains(other.re) and self.im.contains(other.im)

    def contains_value(self, re, im=Fraction(0)):
        def inside(iv, q):
            return iv.lo.to_fraction() <= q <= iv.hi.to_fraction()
        return inside(self.re, Fraction(re)) and inside(self.im, Fraction(im))

    def overlaps(self, other):
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def midpoint(self):
        return self.re.mid().to_fraction(), self.im.mid().to_fraction()

    def radius(self):
        return max((self.re.width().to_fraction() / 2), (self.im.width().to_fraction() / 2))

    def __repr__(self):
        if not self.ok:
            return f"Enclosure({self.status})"
        return f"Enclosure(re={self.re!r}, im={self.im!r})"

    def to_decimal(self, digits=20):
        if not self.ok:
            return self.status
        mre, mim = self.midpoint()
        rad = self.radius()
        s = _fmt_decimal(mre, digits)
        if not self.is_real():
            sign = "+" if mim >= 0 else "-"
            s = f"{s} {sign} {_fmt_decimal(abs(mim), digits)}*I"
        return f"{s} +/- {float(rad):.3e}"


def _fmt_decimal(q, digits):
    sign = "-" if q < 0 else ""
    q = abs(q)
    scaled = round(q * 10 ** digits)
    ip, fp = divmod(scaled, 10 ** digits)
    return f"{sign}{ip}.{fp:0{digits}d}".rstrip("0").rstrip(".") if fp else f"{sign}{ip}"


def _real(x):
    return Enclosure(x, IZERO)


def c_add(a, b, p):
    return Enclosure(iv_add(a.re, b.re, p), iv_add(a.im, b.im, p))


def c_sub(a, b, p):
    return Enclosure(iv_sub(a.re, b.re, p), iv_sub(a.im, b.im, p))


def c_neg(a):
    return Enclosure(iv_neg(a.re), iv_neg(a.im))


def c_mul(a, b, p):
    if a.is_real() and b.is_real():
        return _real(iv_mul(a.re, b.re, p))
    if a.is_real():
        return Enclosure(iv_mul(a.re, b.re, p), iv_mul(a.re, b.im, p))
    if b.is_real():
        return Enclosure(iv_mul(a.re, b.re, p), iv_mul(a.im, b.re, p))
    re = iv_sub(iv_mul(a.re, b.re, p), iv_mul(a.im, b.im, p), p)
    im = iv_add(iv_mul(a.re, b.im, p), iv_mul(a.im, b.re, p), p)
    return Enclosure(re, im)


def c_sqr(a, p):
    if a.is_real():
        return _real(iv_sqr(a.re, p))
    re = iv_sub(iv_sqr(a.re, p), iv_sqr(a.im, p), p)
    im = iv_scale2(iv_mul(a.re, a.im, p), 1)
    return Enclosure(re, im)


def c_div(a, b, p):
    if b.is_real():
        return Enclosure(iv_div(a.re, b.re, p), iv_div(a.im, b.re, p))
    if b.re.contains_zero() and b.im.contains_zero():
        raise _Indeterminate("divisor box contains zero")
    den = iv_add(iv_sqr(b.re, p), iv_sqr(b.im, p), p)
    re = iv_add(iv_mul(a.re, b.re, p), iv_mul(a.im, b.im, p), p)
    im = iv_sub(iv_mul(a.im, b.re, p), iv_mul(a.re, b.im, p), p)
    return Enclosure(iv_div(re, den, p), iv_div(im, den, p))


def c_abs(a, p):
    if a.is_real():
        return iv_abs(a.re)
    if a.re.is_zero():
        return iv_abs(a.im)
    return iv_sqrt(iv_add(iv_sqr(a.re, p), iv_sqr(a.im, p), p), p)


def c_exp(a, p):
    if a.is_real():
        return _real(iv_exp(a.re, p))
    m = iv_exp(a.re, p)
    s, c = iv_sin_cos(a.im, p)
    return Enclosure(iv_mul(m, c, p), iv_mul(m, s, p))


def c_log(a, p):
    if a.is_real():
        if a.re.lo.sign() > 0:
            return _real(iv_log(a.re, p))
        if a.re.hi.sign() < 0:
            return Enclosure(iv_log(iv_neg(a.re), p), pi_interval(p))
        if a.re.is_zero():
            raise _UndefinedValue("log(0)")
        raise _Indeterminate("log near zero")
    wp = p + 4
    modulus2 = iv_add(iv_sqr(a.re, wp), iv_sqr(a.im, wp), wp)
    re = iv_scale2(iv_log(modulus2, wp), -1)
    return Enclosure(_rnd(re.lo, re.hi, p), iv_atan2(a.im, a.re, p))


def c_sqrt(a, p):
    if a.is_real():
        if a.re.lo.sign() >= 0:
            return _real(iv_sqrt(a.re, p))
        if a.re.hi.sign() <= 0:
            return Enclosure(IZERO, iv_sqrt(iv_neg(a.re), p))
        # tiny interval around zero: the root is small in both directions
        return Enclosure(iv_sqrt(Interval(ZERO, a.re.hi), p),
                         iv_sqrt(Interval(ZERO, -a.re.lo), p))
    wp = p + 8
    r = c_abs(a, wp)
    if a.re.lo.sign() > 0:
        re = iv_sqrt(iv_scale2(iv_add(r, a.re, wp), -1), wp)
        im = iv_div(a.im, iv_scale2(re, 1), wp)
    elif a.im.lo.sign() > 0 or a.im.hi.sign() < 0:
        im = iv_sqrt(iv_scale2(iv_sub(r, a.re, wp), -1), wp)
        if a.im.hi.sign() < 0:
            im = iv_neg(im)
        re = iv_div(a.im, iv_scale2(im, 1), wp)
    else:
        raise _Indeterminate("sqrt box meets the branch cut")
    return Enclosure(_rnd(re.lo, re.hi, p), _rnd(im.lo, im.hi, p))


def c_sin_cos(a, p):
    if a.is_real():
        s, c = iv_sin_cos(a.re, p)
        return _real(s), _real(c)
    s, c = iv_sin_cos(a.re, p)
    eb = iv_exp(a.im, p + 4)
    emb = iv_exp(iv_neg(a.im), p + 4)
    ch = iv_scale2(iv_add(eb, emb, p + 4), -1)
    sh = iv_scale2(iv_sub(eb, emb, p + 4), -1)
    sin = Enclosure(iv_mul(s, ch, p), iv_mul(c, sh, p))
    cos = Enclosure(iv_mul(c, ch, p), iv_neg(iv_mul(s, sh, p)))
    return sin, cos


def c_pow_int(a, n, p):
    if n == 0:
        return _real(IONE)
    if n < 0:
        return c_div(_real(IONE), c_pow_int(a, -n, p), p)
    result = None
    base = a
    while n:
        if n & 1:
            result = base if result is None else c_mul(result, base, p)
        n >>= 1
        if n:
            base = c_sqr(base, p)
    return result


# -- expressions -------------------------------------------------------------

def _as_int_point(enc):
    if enc.ok and enc.is_real() and enc.re.is_point() and enc.re.lo.is_integer():
        return enc.re.lo.man << enc.re.lo.exp
    return None


_GUARD = 16


@lru_cache(maxsize=8192)
def _enc_cached(e, p):
    try:
        return _enc(e, p)
    except _UndefinedValue:
        return Enclosure.undefined()
    except _Indeterminate:
        return Enclosure.unknown()


def _sub(e, p):
    r = _enc_cached(e, p)
    if r.status == "undefined":
        raise _UndefinedValue()
    if r.status == "unknown":
        raise _Indeterminate()
    return r


def _enc(e, p):
    if isinstance(e, Int):
        d = Dyadic(e.value)
        return _real(_rnd(d, d, p))
    if isinstance(e, Symbol):
        name = e.name
        if name == "Pi":
            return _real(pi_interval(p))
        if name == "ConstE":
            return _real(iv_exp(IONE, p))
        if name == "ConstI":
            return Enclosure(IZERO, IONE)
        if name == "Undefined":
            raise _UndefinedValue()
        raise NotNumeric(f"symbol {name} has no numeric value")
    if not isinstance(e, Call):
        raise NotNumeric("text atoms are not numbers")
    name = head_name(e)
    args = e.args
    wp = p + _GUARD
    if name in ("Add", "Mul") and args:
        acc = _sub(args[0], wp)
        for a in args[1:]:
            b = _sub(a, wp)
            acc = c_add(acc, b, wp) if name == "Add" else c_mul(acc, b, wp)
        return _round_enc(acc, p)
    n = len(args)
    if name == "Sub" and n == 2:
        return _round_enc(c_sub(_sub(args[0], wp), _sub(args[1], wp), wp), p)
    if name == "Div" and n == 2:
        return _round_enc(c_div(_sub(args[0], wp), _sub(args[1], wp), wp), p)
    if name == "Neg" and n == 1:
        return c_neg(_sub(args[0], p))
    if name == "Pos" and n == 1:
        return _sub(args[0], p)
    if name == "Pow" and n == 2:
        return _round_enc(_pow(args[0], args[1], wp), p)
    if n != 1 or name is None:
        raise NotNumeric(f"unsupported expression {e}")
    x = _sub(args[0], wp)
    if name == "Sqrt":
        r = c_sqrt(x, wp)
    elif name == "Abs":
        r = _real(c_abs(x, wp))
    elif name == "Re":
        r = _real(x.re)
    elif name == "Im":
        r = _real(x.im)
    elif name == "Exp":
        r = c_exp(x, wp)
    elif name == "Log":
        r = c_log(x, wp)
    elif name == "Sin":
        r = c_sin_cos(x, wp)[0]
    elif name == "Cos":
        r = c_sin_cos(x, wp)[1]
    else:
        raise NotNumeric(f"no numeric evaluation for {name}")
    return _round_enc(r, p)


def _pow(base_e, exp_e, wp):
    b = _sub(base_e, wp)
    x = _sub(exp_e, wp)
    n = _as_int_point(x)
    if n is not None:
        if abs(n) > 1_000_000:
            raise NotNumeric("exponent too large")
        if n < 0 and b.re.is_zero() and b.im.is_zero():
            raise _UndefinedValue("zero to a negative power")
        return c_pow_int(b, n, wp)
    if b.re.is_zero() and b.im.is_zero():
        if x.is_real() and x.re.lo.sign() > 0:
            return _real(IZERO)
        raise NotNumeric("zero to a non-integer power")
    if not (b.re.lo.sign() > 0):
        # principal branch only where it cannot meet the cut
        raise NotNumeric("non-integer power of a base not in the right half-plane")
    return c_exp(c_mul(x, c_log(b, wp), wp), wp)


def _round_enc(r, p):
    return Enclosure(_rnd(r.re.lo, r.re.hi, p), _rnd(r.im.lo, r.im.hi, p), r.status)


def enclose(e, precision_bits=DEFAULT_PRECISION):
    """Rigorous enclosure of a closed expression.

    Raises NotNumeric for unsupported heads or free symbols. Poles give an
    enclosure with status "undefined".
    """
    if precision_bits < 2:
        raise ValueError("precision must be at least 2 bits")
    return _enc_cached(e, precision_bits)


class Ordering(enum.Enum):
    LESS = "Less"
    GREATER = "Greater"
    OVERLAPPING = "Overlapping"


def compare(a, b, max_precision_bits=MAX_PRECISION):
    """Order two real constants by refining enclosures.

    Precision doubles from 64 bits up to the cap. Equal numbers always end
    up OVERLAPPING. Raises NotNumeric for unsupported or undefined inputs
    and ValueError when a value is provably non-real.
    """
    p = DEFAULT_PRECISION
    while True:
        x = enclose(a, p)
        y = enclose(b, p)
        for z in (x, y):
            if z.status == "undefined":
                raise NotNumeric("undefined value")
            if z.ok and not z.im.contains_zero():
                raise ValueError("comparison of a non-real value")
        if x.ok and y.ok:
            if x.re.hi < y.re.lo:
                return Ordering.LESS
            if y.re.hi < x.re.lo:
                return Ordering.GREATER
        if p >= max_precision_bits:
            return Ordering.OVERLAPPING
        p = min(2 * p, max_precision_bits)
