"""The quantum Weyl algebra on the m x n variables x_{j,k}.

Operators are finite sums of ordered monomials ``x^a gamma^g del^d`` (all
multiplications, then all scalings, then all q-derivatives), stored per
variable as three flat exponent tuples in row-major order.  Products are
computed with the defining commutation rules

    gamma x = q x gamma,   gamma del = q^-1 del gamma,   del x = q x del + gamma^-1,

and written products act right to left (the rightmost factor is applied
first).  Ordered monomials are not linearly independent as operators
(``x del = (gamma - gamma^-1) / (q - q^-1)``), so equality and hashing go
through :meth:`WeylOperator.canonical`, which removes every ``x del`` pair
of a single variable.  The canonical terms form a basis over Q(q) of the
operator algebra acting on C[x].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product as cartesian

from .qcoeff import ONE, Q, ZERO, RationalQ, format_q, parse, q_falling, q_number, qpow, to_q

__all__ = [
    "Shape",
    "WeylOperator",
    "ShapeMismatchError",
    "identity",
    "scalar",
    "xop",
    "dop",
    "gop",
    "op_product",
    "weyl_mul",
    "weyl_apply",
    "matrix_on_degree",
    "DegreeMatrix",
    "monomials_upto",
    "unit_exponent",
    "to_matrix",
    "from_matrix",
    "poly_add",
    "poly_scale",
    "format_monomial",
]


class ShapeMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Shape:
    """Block sizes of the parabolic: n columns (first block), m rows (second block)."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError(f"shape needs n, m >= 1, got ({self.n}, {self.m})")

    @property
    def nvars(self) -> int:
        return self.n * self.m

    @property
    def rank(self) -> int:
        """Number of simple roots of sl_{n+m}."""
        return self.n + self.m - 1

    def index(self, j: int, k: int) -> int:
        """Flat position of x_{j,k} (1-based row j <= m, column k <= n)."""
        if not (1 <= j <= self.m and 1 <= k <= self.n):
            raise IndexError(f"x_{{{j},{k}}} outside shape {self}")
        return (j - 1) * self.n + (k - 1)

    def label(self, idx: int) -> tuple[int, int]:
        return idx // self.n + 1, idx % self.n + 1

    def variables(self):
        return [(j, k) for j in range(1, self.m + 1) for k in range(1, self.n + 1)]

    def zero_exponent(self) -> tuple:
        return (0,) * self.nvars


def unit_exponent(shape: Shape, j: int, k: int) -> tuple:
    """The exponent matrix 1_{j,k}, flattened."""
    r = [0] * shape.nvars
    r[shape.index(j, k)] = 1
    return tuple(r)


def to_matrix(shape: Shape, r) -> list[list[int]]:
    return [list(r[i * shape.n:(i + 1) * shape.n]) for i in range(shape.m)]


def from_matrix(shape: Shape, rows) -> tuple:
    if len(rows) != shape.m or any(len(row) != shape.n for row in rows):
        raise ShapeMismatchError(f"expected a {shape.m}x{shape.n} matrix")
    return tuple(int(c) for row in rows for c in row)


@lru_cache(maxsize=None)
def _compositions(total: int, parts: int) -> tuple:
    """All exponent tuples of the given length and total degree, lex descending."""
    if parts == 1:
        return ((total,),)
    out = []
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return tuple(out)


def monomials_of_degree(shape: Shape, d: int) -> tuple:
    return _compositions(d, shape.nvars)


def monomials_upto(shape: Shape, d: int) -> list:
    """Monomials of total degree <= d ordered by degree, then row-major lex."""
    out = []
    for k in range(d + 1):
        out.extend(_compositions(k, shape.nvars))
    return out


def format_monomial(shape: Shape, r) -> str:
    parts = []
    for idx, e in enumerate(r):
        if e:
            j, k = shape.label(idx)
            parts.append(f"x_{{{j},{k}}}" + (f"^{e}" if e > 1 else ""))
    return "".join(parts) if parts else "1"


# -- polynomials: dict exponent-tuple -> RationalQ ------------------------------

def poly_add(p: dict, other: dict, scale: RationalQ = ONE) -> dict:
    out = dict(p)
    for r, c in other.items():
        v = out.get(r, ZERO) + c * scale
        if v:
            out[r] = v
        else:
            out.pop(r, None)
    return out


def poly_scale(p: dict, c) -> dict:
    c = to_q(c)
    if not c:
        return {}
    return {r: v * c for r, v in p.items()}


# -- single-variable kernels -------------------------------------------------------

@lru_cache(maxsize=None)
def _del_pow_x_pow(d: int, b: int) -> tuple:
    """Ordered normal form of del^d x^b for one variable: ((a, g, e, coeff), ...)."""
    if d == 0 or b == 0:
        return ((b, 0, d, ONE),)
    acc: dict = {}
    for a, g, e, c in _del_pow_x_pow(d - 1, b):
        # del . x^a gamma^g del^e = q^{a+g} x^a gamma^g del^{e+1} + [a] x^{a-1} gamma^{g-1} del^e
        key = (a, g, e + 1)
        acc[key] = acc.get(key, ZERO) + c * qpow(a + g)
        if a:
            key = (a - 1, g - 1, e)
            acc[key] = acc.get(key, ZERO) + c * q_number(a)
    return tuple((a, g, e, c) for (a, g, e), c in sorted(acc.items()) if c)


@lru_cache(maxsize=None)
def _var_mul(a, g, d, b, h, e) -> tuple:
    """(x^a gamma^g del^d)(x^b gamma^h del^e) for one variable, ordered form."""
    out = []
    for b2, g2, d2, c in _del_pow_x_pow(d, b):
        out.append((a + b2, g + g2 + h, d2 + e, c * qpow(g * b2 + h * d2)))
    return tuple(out)


@lru_cache(maxsize=None)
def _number_poly(t: int) -> tuple:
    """prod_{i<t} (q^-i Q - q^i Q^-1) as ((power of Q, coeff), ...)."""
    acc = {0: ONE}
    for i in range(t):
        nxt: dict = {}
        for h, c in acc.items():
            nxt[h + 1] = nxt.get(h + 1, ZERO) + c * qpow(-i)
            nxt[h - 1] = nxt.get(h - 1, ZERO) - c * qpow(i)
        acc = {h: c for h, c in nxt.items() if c}
    return tuple(sorted(acc.items()))


_INV_QDIFF = ONE / (Q - qpow(-1))


@lru_cache(maxsize=None)
def _var_canonical(a, g, d) -> tuple:
    """Rewrite x^a gamma^g del^d (one variable) without an x del pair."""
    t = min(a, d)
    if t == 0:
        return ((a, g, d, ONE),)
    pref = qpow(-g * t) * _INV_QDIFF ** t
    return tuple((a - t, g + h, d - t, pref * c) for h, c in _number_poly(t))


# -- operators ---------------------------------------------------------------------

class WeylOperator:
    """Finite sum of ordered monomials x^a gamma^g del^d with Q(q) coefficients."""

    __slots__ = ("shape", "terms", "_canon", "_hash", "_cache")

    def __init__(self, shape: Shape, terms=None):
        self.shape = shape
        self.terms = {k: v for k, v in (terms or {}).items() if v}
        self._canon = None
        self._hash = None
        self._cache = {}

    # construction helpers
    @classmethod
    def _from_clean(cls, shape, terms):
        obj = cls.__new__(cls)
        obj.shape = shape
        obj.terms = terms
        obj._canon = None
        obj._hash = None
        obj._cache = {}
        return obj

    def _check(self, other):
        if self.shape != other.shape:
            raise ShapeMismatchError(f"shapes differ: {self.shape} vs {other.shape}")

    def is_zero(self) -> bool:
        return not self.canonical()

    def __bool__(self):
        return not self.is_zero()

    def __len__(self):
        return len(self.terms)

    # linear structure
    def __add__(self, other):
        if not isinstance(other, WeylOperator):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, ZERO) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return WeylOperator._from_clean(self.shape, out)

    def __neg__(self):
        return WeylOperator._from_clean(self.shape, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, WeylOperator):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> WeylOperator:
        c = to_q(c)
        if not c:
            return WeylOperator._from_clean(self.shape, {})
        return WeylOperator._from_clean(self.shape, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, WeylOperator):
            return weyl_mul(self, other)
        if isinstance(other, (RationalQ, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (RationalQ, int)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = identity(self.shape)
        for _ in range(k):
            out = out * self
        return out

    # canonical form, equality
    def canonical(self) -> dict:
        if self._canon is None:
            acc: dict = {}
            for (x, g, d), c in self.terms.items():
                for key, cc in _term_canonical(x, g, d):
                    v = acc.get(key, ZERO) + c * cc
                    if v:
                        acc[key] = v
                    else:
                        acc.pop(key, None)
            self._canon = acc
        return self._canon

    def canonical_operator(self) -> WeylOperator:
        return WeylOperator._from_clean(self.shape, dict(self.canonical()))

    def __eq__(self, other):
        if not isinstance(other, WeylOperator):
            return NotImplemented
        return self.shape == other.shape and self.canonical() == other.canonical()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, frozenset(self.canonical().items())))
        return self._hash

    # action on C[x]
    def apply_monomial(self, r: tuple) -> dict:
        """Image of x^r; cached per operator since operators are immutable."""
        hit = self._cache.get(r)
        if hit is not None:
            return hit
        out: dict = {}
        for (x, g, d), c in self.terms.items():
            coeff = c
            qexp = 0
            ok = True
            for v, dv in enumerate(d):
                rv = r[v]
                if dv:
                    if rv < dv:
                        ok = False
                        break
                    coeff = coeff * q_falling(rv, dv)
                gv = g[v]
                if gv:
                    qexp += gv * (rv - dv)
            if not ok:
                continue
            if qexp:
                coeff = coeff * qpow(qexp)
            key = tuple(rv - dv + xv for rv, dv, xv in zip(r, d, x))
            s = out.get(key, ZERO) + coeff
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        self._cache[r] = out
        return out

    def apply(self, p: dict) -> dict:
        out: dict = {}
        for r, c in p.items():
            for key, v in self.apply_monomial(r).items():
                s = out.get(key, ZERO) + c * v
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return out

    def raising_degree(self) -> int:
        """max over terms of (#x - #del); 0 for the zero operator."""
        if not self.terms:
            return 0
        return max(sum(x) - sum(d) for (x, g, d) in self.terms)

    def specialize_classical(self, q0=1) -> dict:
        """Evaluate coefficients at q0 and drop the gammas (classical limit at q0=1)."""
        from fractions import Fraction

        out: dict = {}
        for (x, g, d), c in self.terms.items():
            key = (x, d)
            out[key] = out.get(key, Fraction(0)) + c.evaluate_at(q0)
        return {k: v for k, v in out.items() if v}

    # presentation
    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self):
        return f"WeylOperator({self.shape.n},{self.shape.m}: {format_operator(self)})"

    def __str__(self):
        return format_operator(self)


def _term_canonical(x, g, d):
    """Canonical expansion of one ordered monomial: list of (key, coeff)."""
    clash = [v for v in range(len(x)) if x[v] and d[v]]
    if not clash:
        return [((x, g, d), ONE)]
    options = [_var_canonical(x[v], g[v], d[v]) for v in clash]
    out = []
    for combo in cartesian(*options):
        xx, gg, dd = list(x), list(g), list(d)
        c = ONE
        for v, (a, h, e, cc) in zip(clash, combo):
            xx[v], gg[v], dd[v] = a, h, e
            c = c * cc
        out.append(((tuple(xx), tuple(gg), tuple(dd)), c))
    return out


def _term_mul(t1, t2):
    x1, g1, d1 = t1
    x2, g2, d2 = t2
    qexp = 0
    x, g, d = list(x1), list(g1), list(d1)
    branching = []
    for v in range(len(x1)):
        if d1[v] and x2[v]:
            branching.append(v)
            continue
        qexp += g1[v] * x2[v] + g2[v] * d1[v]
        x[v] += x2[v]
        g[v] += g2[v]
        d[v] += d2[v]
    base = qpow(qexp)
    if not branching:
        return [((tuple(x), tuple(g), tuple(d)), base)]
    options = [_var_mul(x1[v], g1[v], d1[v], x2[v], g2[v], d2[v]) for v in branching]
    out = []
    for combo in cartesian(*options):
        c = base
        for v, (a, h, e, cc) in zip(branching, combo):
            x[v], g[v], d[v] = a, h, e
            c = c * cc
        out.append(((tuple(x), tuple(g), tuple(d)), c))
    return out


def weyl_mul(a: WeylOperator, b: WeylOperator) -> WeylOperator:
    """Composition a o b (b acts first), in ordered normal form."""
    a._check(b)
    acc: dict = {}
    for k1, c1 in a.terms.items():
        for k2, c2 in b.terms.items():
            c12 = c1 * c2
            for key, c in _term_mul(k1, k2):
                s = acc.get(key, ZERO) + c12 * c
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
    return WeylOperator._from_clean(a.shape, acc)


def weyl_apply(a: WeylOperator, p: dict) -> dict:
    return a.apply(p)


# -- basic operators ---------------------------------------------------------------

def _key(shape, x=None, g=None, d=None):
    z = shape.zero_exponent()
    return (x or z, g or z, d or z)


def identity(shape: Shape) -> WeylOperator:
    return WeylOperator._from_clean(shape, {_key(shape): ONE})


def scalar(shape: Shape, c) -> WeylOperator:
    return identity(shape).scale(c)


def xop(shape: Shape, j: int, k: int) -> WeylOperator:
    return WeylOperator._from_clean(shape, {_key(shape, x=unit_exponent(shape, j, k)): ONE})


def dop(shape: Shape, j: int, k: int) -> WeylOperator:
    return WeylOperator._from_clean(shape, {_key(shape, d=unit_exponent(shape, j, k)): ONE})


def gop(shape: Shape, j: int, k: int, power: int = 1) -> WeylOperator:
    g = [0] * shape.nvars
    g[shape.index(j, k)] = power
    return WeylOperator._from_clean(shape, {_key(shape, g=tuple(g)): ONE})


def op_product(shape: Shape, factors) -> WeylOperator:
    """Left-to-right written product; the empty product is the identity."""
    out = identity(shape)
    for f in factors:
        out = out * f
    return out


# -- degree slices -----------------------------------------------------------------

@dataclass
class DegreeMatrix:
    """Matrix of an operator on the slice of monomials of degree <= d."""

    rows: list
    cols: list
    entries: list  # entries[i][j]: coefficient of rows[i] in the image of cols[j]


def matrix_on_degree(a: WeylOperator, d: int) -> DegreeMatrix:
    shape = a.shape
    cols = monomials_upto(shape, d)
    top = max(0, d + a.raising_degree())
    rows = monomials_upto(shape, top)
    where = {r: i for i, r in enumerate(rows)}
    entries = [[ZERO] * len(cols) for _ in rows]
    for j, r in enumerate(cols):
        for key, c in a.apply_monomial(r).items():
            entries[where[key]][j] = c
    return DegreeMatrix(rows, cols, entries)


# -- text and JSON -----------------------------------------------------------------

def _factor_str(shape, x, g, d):
    parts = []
    for idx, e in enumerate(x):
        if e:
            j, k = shape.label(idx)
            parts.append(f"x_{{{j},{k}}}" + (f"^{e}" if e != 1 else ""))
    for idx, e in enumerate(g):
        if e:
            j, k = shape.label(idx)
            parts.append(f"γ_{{{j},{k}}}" + (f"^{e}" if e != 1 else ""))
    for idx, e in enumerate(d):
        if e:
            j, k = shape.label(idx)
            parts.append(f"∂_{{{j},{k}}}" + (f"^{e}" if e != 1 else ""))
    return "".join(parts)


def format_operator(a: WeylOperator) -> str:
    if not a.terms:
        return "0"
    out = []
    for (x, g, d), c in a.sorted_terms():
        body = _factor_str(a.shape, x, g, d)
        cs = format_q(c)
        if not body:
            out.append(cs)
        elif cs == "1":
            out.append(body)
        elif cs == "-1":
            out.append("-" + body)
        else:
            out.append(f"({cs})·{body}")
    return " + ".join(out)


def operator_to_json(a: WeylOperator) -> list:
    s = a.shape
    return [
        {"coeff": format_q(c), "x": to_matrix(s, x), "gamma": to_matrix(s, g), "del": to_matrix(s, d)}
        for (x, g, d), c in a.sorted_terms()
    ]


def operator_from_json(shape: Shape, data) -> WeylOperator:
    terms: dict = {}
    for item in data:
        key = (
            from_matrix(shape, item["x"]),
            from_matrix(shape, item["gamma"]),
            from_matrix(shape, item["del"]),
        )
        if any(e < 0 for e in key[0]) or any(e < 0 for e in key[2]):
            raise ValueError("x and del exponents must be nonnegative")
        terms[key] = terms.get(key, ZERO) + parse(item["coeff"])
    return WeylOperator(shape, terms)
