"""Exact arithmetic in the field Q(q) of rational functions in one variable.

Elements are stored as ``q**val * num(q) / den(q)`` where ``num`` and ``den``
are integer polynomials (coefficient tuples, lowest degree first) that are
coprime in Z[q], have nonzero constant terms, and ``den`` has a positive
leading coefficient.  That makes the representation canonical, so values can
be compared and hashed structurally.

Almost every coefficient that shows up in the realization is a Laurent
polynomial (``den == (1,)``); addition and multiplication have fast paths for
that case and only fall back to polynomial gcds when a genuine denominator is
present.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

__all__ = [
    "RationalQ",
    "NotSpecializableError",
    "QParseError",
    "ZERO",
    "ONE",
    "Q",
    "qpow",
    "q_number",
    "q_factorial",
    "q_binomial",
    "evaluate_at",
    "parse",
    "format_q",
]


class NotSpecializableError(ArithmeticError):
    """Raised when a value has a pole at the requested specialization point."""


class QParseError(ValueError):
    """Syntax error in a coefficient expression."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


# -- integer polynomial helpers (tuples, lowest degree first) -----------------

def _trim(p):
    n = len(p)
    while n and p[n - 1] == 0:
        n -= 1
    return tuple(p[:n])


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _pneg(a):
    return tuple(-c for c in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    if len(a) == 1:
        c = a[0]
        return tuple(c * x for x in b)
    if len(b) == 1:
        c = b[0]
        return tuple(c * x for x in a)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _shift(p, k):
    return (0,) * k + tuple(p) if k else tuple(p)


def _content(p):
    g = 0
    for c in p:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _pdiv_exact(a, b):
    """Quotient a / b in Z[q]; raises if the division is not exact."""
    db = len(b) - 1
    if len(a) - 1 < db:
        if any(a):
            raise ArithmeticError("inexact polynomial division")
        return ()
    rem = list(a)
    lb = b[-1]
    quo = [0] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c, r = divmod(rem[i + db], lb)
        if r:
            raise ArithmeticError("inexact polynomial division")
        quo[i] = c
        if c:
            for j in range(db + 1):
                rem[i + j] -= c * b[j]
    if any(rem[:db]):
        raise ArithmeticError("inexact polynomial division")
    return _trim(quo)


def _prem(a, b):
    """Pseudo-remainder of a by b."""
    rem = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(rem) - 1 >= db and rem:
        c = rem[-1]
        k = len(rem) - 1 - db
        rem = [lb * x for x in rem]
        for j in range(db + 1):
            rem[k + j] -= c * b[j]
        rem = list(_trim(rem))
    return tuple(rem)


def _primitive(p):
    c = _content(p)
    if p[-1] < 0:
        c = -c
    return tuple(x // c for x in p) if c != 1 else tuple(p)


def _pgcd(a, b):
    """gcd in Z[q], normalized to a positive leading coefficient."""
    ca, cb = _content(a), _content(b)
    g = gcd(ca, cb)
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while len(b) > 1:
        r = _prem(a, b)
        if not r:
            break
        a, b = b, _primitive(r)
    else:
        # b is a nonzero constant: primitive part is 1
        return (g,)
    return tuple(g * x for x in b)


def _horner(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


# -- the field element ----------------------------------------------------------

class RationalQ:
    """An element of Q(q) in canonical reduced form."""

    __slots__ = ("num", "den", "val", "_hash")

    def __init__(self, value=0):
        if isinstance(value, RationalQ):
            self.num, self.den, self.val = value.num, value.den, value.val
        elif isinstance(value, Fraction):
            other = _make((value.numerator,), (value.denominator,), 0)
            self.num, self.den, self.val = other.num, other.den, other.val
        elif isinstance(value, int):
            if value:
                self.num, self.den, self.val = (value,), (1,), 0
            else:
                self.num, self.den, self.val = (), (1,), 0
        else:
            raise TypeError(f"cannot build RationalQ from {type(value).__name__}")
        self._hash = None

    @classmethod
    def _raw(cls, num, den, val):
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj.val = val
        obj._hash = None
        return obj

    # structural queries
    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    @property
    def is_laurent(self) -> bool:
        """True when the value is a Laurent polynomial in q."""
        return self.den == (1,)

    def laurent_terms(self) -> dict[int, int]:
        """Exponent -> integer coefficient; only valid for Laurent polynomials."""
        if not self.is_laurent:
            raise ValueError("not a Laurent polynomial")
        return {self.val + i: c for i, c in enumerate(self.num) if c}

    def __eq__(self, other):
        if isinstance(other, RationalQ):
            return self.val == other.val and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == RationalQ(other)
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            if self.den == (1,) and self.val == 0 and len(self.num) <= 1:
                h = hash(self.num[0] if self.num else 0)
            else:
                h = hash((self.num, self.den, self.val))
            self._hash = h
        return h

    # arithmetic
    def __neg__(self):
        if not self.num:
            return self
        return RationalQ._raw(_pneg(self.num), self.den, self.val)

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, RationalQ):
            if isinstance(other, (int, Fraction)):
                other = RationalQ(other)
            else:
                return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        a, b = (self, other) if self.val <= other.val else (other, self)
        s = b.val - a.val
        if a.den == b.den:
            num = list(a.num)
            need = s + len(b.num)
            if need > len(num):
                num.extend([0] * (need - len(num)))
            for i, c in enumerate(b.num):
                num[s + i] += c
            if a.den == (1,):
                num = _trim(num)
                if not num:
                    return ZERO
                k = 0
                while num[k] == 0:
                    k += 1
                if k:
                    num = num[k:]
                return RationalQ._raw(num, (1,), a.val + k)
            return _make(tuple(num), a.den, a.val)
        num = _padd(_pmul(a.num, b.den), _shift(_pmul(b.num, a.den), s))
        return _make(num, _pmul(a.den, b.den), a.val)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, RationalQ):
            if isinstance(other, (int, Fraction)):
                other = RationalQ(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RationalQ):
            if isinstance(other, int):
                if other == 0 or not self.num:
                    return ZERO
                if other == 1:
                    return self
                if self.den == (1,):
                    return RationalQ._raw(tuple(other * c for c in self.num), (1,), self.val)
                other = RationalQ(other)
            elif isinstance(other, Fraction):
                other = RationalQ(other)
            else:
                return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if self.den == (1,) and other.den == (1,):
            return RationalQ._raw(_pmul(self.num, other.num), (1,), self.val + other.val)
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if d2 != (1,):
            g = _pgcd(n1, d2)
            if g != (1,):
                n1, d2 = _pdiv_exact(n1, g), _pdiv_exact(d2, g)
        if d1 != (1,):
            g = _pgcd(n2, d1)
            if g != (1,):
                n2, d1 = _pdiv_exact(n2, g), _pdiv_exact(d1, g)
        return RationalQ._raw(_pmul(n1, n2), _pmul(d1, d2), self.val + other.val)

    __rmul__ = __mul__

    def inverse(self) -> RationalQ:
        if not self.num:
            raise ZeroDivisionError("division by zero in Q(q)")
        num, den = self.den, self.num
        if den[-1] < 0:
            num, den = _pneg(num), _pneg(den)
        return RationalQ._raw(num, den, -self.val)

    def __truediv__(self, other):
        if not isinstance(other, RationalQ):
            if isinstance(other, (int, Fraction)):
                other = RationalQ(other)
            else:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if self.den == (1,) and len(self.num) == 1:
            return RationalQ._raw((self.num[0] ** k,), (1,), self.val * k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def evaluate_at(self, q0) -> Fraction:
        return evaluate_at(self, q0)

    def __repr__(self):
        return f"RationalQ({format_q(self)!r})"

    def __str__(self):
        return format_q(self)


def _make(num, den, val):
    """Canonicalize q**val * num / den (num, den integer coefficient tuples)."""
    num = _trim(num)
    den = _trim(den)
    if not den:
        raise ZeroDivisionError("zero denominator in Q(q)")
    if not num:
        return ZERO
    k = 0
    while num[k] == 0:
        k += 1
    if k:
        num = num[k:]
        val += k
    k = 0
    while den[k] == 0:
        k += 1
    if k:
        den = den[k:]
        val -= k
    if den != (1,):
        g = _pgcd(num, den)
        if g != (1,):
            num = _pdiv_exact(num, g)
            den = _pdiv_exact(den, g)
        if den[-1] < 0:
            num, den = _pneg(num), _pneg(den)
    return RationalQ._raw(tuple(num), tuple(den), val)


ZERO = RationalQ._raw((), (1,), 0)
ONE = RationalQ._raw((1,), (1,), 0)
Q = RationalQ._raw((1,), (1,), 1)


@lru_cache(maxsize=None)
def qpow(k: int) -> RationalQ:
    """The monomial q**k."""
    return RationalQ._raw((1,), (1,), k)


def laurent(terms: dict[int, int]) -> RationalQ:
    """Build a Laurent polynomial from {exponent: integer coefficient}."""
    terms = {e: c for e, c in terms.items() if c}
    if not terms:
        return ZERO
    lo, hi = min(terms), max(terms)
    return RationalQ._raw(tuple(terms.get(e, 0) for e in range(lo, hi + 1)), (1,), lo)


# -- q-numbers -------------------------------------------------------------------

@lru_cache(maxsize=None)
def q_number(v: int) -> RationalQ:
    """[v]_q = (q^v - q^-v) / (q - q^-1), computed by exact division."""
    out = (qpow(v) - qpow(-v)) / (Q - qpow(-1))
    assert out.is_laurent
    return out


@lru_cache(maxsize=None)
def q_factorial(n: int) -> RationalQ:
    if n < 0:
        raise ValueError("q_factorial needs n >= 0")
    out = ONE
    for k in range(1, n + 1):
        out = out * q_number(k)
    return out


@lru_cache(maxsize=None)
def q_binomial(n: int, k: int) -> RationalQ:
    if n < 0 or k < 0:
        raise ValueError("q_binomial needs nonnegative arguments")
    if k > n:
        raise ValueError(f"q_binomial({n}, {k}): k exceeds n")
    out = q_factorial(n) / (q_factorial(k) * q_factorial(n - k))
    if not out.is_laurent:
        raise ArithmeticError("q-binomial division left a remainder")
    return out


@lru_cache(maxsize=None)
def q_falling(r: int, d: int) -> RationalQ:
    """[r]_q [r-1]_q ... [r-d+1]_q, the eigenvalue of x^d d_q^d on x^r."""
    out = ONE
    for i in range(d):
        out = out * q_number(r - i)
    return out


def evaluate_at(a: RationalQ, q0) -> Fraction:
    """Specialize q -> q0 (an exact rational)."""
    q0 = Fraction(q0)
    if not a.num:
        return Fraction(0)
    d = _horner(a.den, q0)
    if d == 0 or (q0 == 0 and a.val < 0):
        raise NotSpecializableError(f"{format_q(a)} has a pole at q = {q0}")
    return Fraction(_horner(a.num, q0)) * q0 ** a.val / d


# -- parsing and formatting ----------------------------------------------------

def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j]), i))
            i = j
        elif ch in "+-*/^()q":
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise QParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise QParseError(f"expected {kind!r}, found {tok[1] if tok[1] is not None else 'end'!r}", tok[2])
        self.pos += 1
        return tok

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise QParseError(f"unexpected token {tok[1]!r}", tok[2])
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, at = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if not rhs:
                    raise QParseError("division by zero", at)
                value = value / rhs
        return value

    def unary(self):
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            _, _, at = self.take()
            exp = self.exponent()
            if exp < 0 and not base:
                raise QParseError("zero raised to a negative power", at)
            base = base ** exp
        return base

    def exponent(self):
        sign = 1
        paren = False
        if self.peek()[0] == "(":
            self.take()
            paren = True
        while self.peek()[0] in "+-":
            if self.take()[0] == "-":
                sign = -sign
        value = self.take("int")[1] * sign
        if paren:
            self.take(")")
        return value

    def atom(self):
        kind, value, at = self.peek()
        if kind == "int":
            self.take()
            return RationalQ(value)
        if kind == "q":
            self.take()
            return Q
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        raise QParseError(f"unexpected token {value if value is not None else 'end'!r}", at)


def parse(text: str) -> RationalQ:
    """Parse a coefficient expression such as ``"(q^2 + 1 - q^-1) / (q - q^-1)"``."""
    return _Parser(text).parse()


def _fmt_poly(terms) -> str:
    """terms: list of (exponent, coefficient), highest exponent first."""
    out = []
    for exp, c in terms:
        mag = abs(c)
        if exp == 0:
            body = str(mag)
        else:
            qs = "q" if exp == 1 else f"q^{exp}"
            body = qs if mag == 1 else f"{mag}*{qs}"
        if not out:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(out)


def format_q(a: RationalQ) -> str:
    """Canonical text form; ``parse(format_q(a)) == a``."""
    if not a.num:
        return "0"
    num_terms = [(a.val + i, c) for i, c in enumerate(a.num) if c][::-1]
    num_s = _fmt_poly(num_terms)
    if a.den == (1,):
        return num_s
    den_terms = [(i, c) for i, c in enumerate(a.den) if c][::-1]
    den_s = _fmt_poly(den_terms)
    if len(num_terms) > 1:
        num_s = f"({num_s})"
    if len(den_terms) > 1:
        den_s = f"({den_s})"
    return f"{num_s}/{den_s}"


def to_q(value) -> RationalQ:
    """Coerce int, Fraction, str or RationalQ to RationalQ."""
    if isinstance(value, RationalQ):
        return value
    if isinstance(value, str):
        return parse(value)
    return RationalQ(value)
