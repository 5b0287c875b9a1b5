"""Classical generalized Verma module for sl_{n+m}, computed from scratch.

M(V) = U(g) (x)_{U(p)} V is identified with Sym(u-bar) (x) V, the variable
y_{j,k} standing for the matrix unit E_{n+j,k}.  The nilradical u-bar is
abelian for this parabolic, so monomials are unordered, and an element X of
gl_N acts by

    X (y_1 y_2 ... y_p (x) v) = y_1 X (y_2 ... (x) v) + [X, y_1] (y_2 ... (x) v)

with the matrix-unit bracket [E_ab, E_cd] = d_bc E_ad - d_da E_cb.  Once no
y is left, the Levi part acts on V and the nilradical u acts by zero.  This
module deliberately uses only Fractions and plain tuples: it shares nothing
with the quantum rewriting code.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

__all__ = [
    "ClassicalModuleState",
    "ClassicalMatrix",
    "NotClassicalError",
    "classical_state",
    "classical_action",
    "classical_matrix",
    "classical_character",
    "classical_basis",
    "generator_element",
]


class NotClassicalError(ValueError):
    pass


@dataclass(frozen=True)
class ClassicalModuleState:
    """Classical data of V: e/f matrices and integer h-weights per basis vector."""

    n: int
    m: int
    dim: int
    raising: tuple   # raising[i-1]: matrix of e_i (tuple of row tuples), None for i = n
    lowering: tuple  # lowering[i-1]: matrix of f_i
    weights: tuple   # weights[b][i-1]: eigenvalue of h_i on v_b

    @property
    def N(self) -> int:
        return self.n + self.m

    def var(self, j: int, k: int) -> int:
        return (j - 1) * self.n + (k - 1)

    def var_label(self, idx: int) -> tuple[int, int]:
        return idx // self.n + 1, idx % self.n + 1


def _q_exponent(c) -> int:
    """Exponent a of an entry equal to q^a; anything else is rejected."""
    terms = c.laurent_terms() if c.is_laurent else None
    if not terms or len(terms) != 1 or list(terms.values())[0] != 1:
        raise NotClassicalError(f"k-eigenvalue {c} is not a positive power of q")
    return next(iter(terms))


def classical_state(spec) -> ClassicalModuleState:
    """q -> 1 data of a PModuleSpec; h_i is read from the q-exponents of k_i."""
    from .uqalg import Gen  # symbol names only

    shape = spec.shape
    n, m = shape.n, shape.m
    rank = n + m - 1
    raising, lowering = [], []
    for i in range(1, rank + 1):
        if i == n:
            raising.append(None)
            lowering.append(None)
            continue
        for kind, bucket in (("E", raising), ("F", lowering)):
            mat = spec.gens[Gen(kind, i)]
            try:
                bucket.append(tuple(tuple(c.evaluate_at(1) for c in row) for row in mat.rows))
            except ArithmeticError as exc:
                raise NotClassicalError(f"{kind}{i}: {exc}") from None
    weights = []
    for b in range(spec.dim):
        w = []
        for i in range(1, rank + 1):
            k = spec.gens[Gen("K", i)]
            if not k.is_diagonal():
                raise NotClassicalError(f"k{i} is not diagonal")
            w.append(_q_exponent(k.rows[b][b]))
        weights.append(tuple(w))
    return ClassicalModuleState(n, m, spec.dim, tuple(raising), tuple(lowering), tuple(weights))


# -- gl_N elements as {(a, b): coeff} --------------------------------------------------

def generator_element(kind: str, i: int) -> dict:
    """e_i, f_i, h_i of sl_N as combinations of matrix units."""
    if kind == "e":
        return {(i, i + 1): Fraction(1)}
    if kind == "f":
        return {(i + 1, i): Fraction(1)}
    if kind == "h":
        return {(i, i): Fraction(1), (i + 1, i + 1): Fraction(-1)}
    raise ValueError(f"unknown classical generator kind {kind!r}")


def _bracket_unit(a: int, b: int, c: int, d: int) -> dict:
    out: dict = {}
    if b == c:
        out[(a, d)] = out.get((a, d), 0) + 1
    if d == a:
        out[(c, b)] = out.get((c, b), 0) - 1
    return {k: Fraction(v) for k, v in out.items() if v}


def _in_ubar(st: ClassicalModuleState, a: int, b: int) -> bool:
    return a > st.n and b <= st.n


def _in_u(st: ClassicalModuleState, a: int, b: int) -> bool:
    return a <= st.n < b


def _mat_col(mat, b: int):
    return [(i, row[b]) for i, row in enumerate(mat) if row[b]]


@lru_cache(maxsize=None)
def _levi_unit_matrix(st: ClassicalModuleState, a: int, b: int):
    """Classical matrix of E_ab (a != b, same block) on V, by commutators."""
    if b == a + 1:
        return st.raising[a - 1]
    if a == b + 1:
        return st.lowering[b - 1]
    c = b - 1 if a < b else b + 1
    x, y = _levi_unit_matrix(st, a, c), _levi_unit_matrix(st, c, b)
    return _matsub(_matmul(x, y), _matmul(y, x))


def _matmul(x, y):
    d = len(x)
    return tuple(tuple(sum((x[i][t] * y[t][j] for t in range(d)), Fraction(0)) for j in range(d)) for i in range(d))


def _matsub(x, y):
    return tuple(tuple(p - r for p, r in zip(rx, ry)) for rx, ry in zip(x, y))


def _add_into(out: dict, key, val):
    s = out.get(key, 0) + val
    if s:
        out[key] = s
    else:
        out.pop(key, None)


def _act_diagonal(st: ClassicalModuleState, D: dict, mono: tuple, b: int) -> dict:
    """Traceless diagonal element D = sum D_a E_aa on y^mono (x) v_b."""
    if sum(D.values()) != 0:
        raise NotClassicalError("diagonal element is not traceless")
    val = Fraction(0)
    for idx in mono:
        j, k = st.var_label(idx)
        val += D.get(st.n + j, 0) - D.get(k, 0)
    partial = Fraction(0)
    for i in range(1, st.N):
        partial += D.get(i, 0)
        val += partial * st.weights[b][i - 1]
    return {(mono, b): val} if val else {}


@lru_cache(maxsize=None)
def _act_unit(st: ClassicalModuleState, a: int, c: int, mono: tuple, b: int) -> tuple:
    """Off-diagonal matrix unit E_ac on y^mono (x) v_b; mono is a sorted tuple of variables."""
    out: dict = {}
    if _in_ubar(st, a, c):
        new = tuple(sorted(mono + (st.var(a - st.n, c),)))
        return (((new, b), Fraction(1)),)
    if not mono:
        if _in_u(st, a, c):
            return ()
        for i, val in _mat_col(_levi_unit_matrix(st, a, c), b):
            _add_into(out, ((), i), val)
        return tuple(sorted(out.items()))
    y, rest = mono[0], mono[1:]
    j, k = st.var_label(y)
    for (m2, b2), val in _act_unit(st, a, c, rest, b):
        _add_into(out, (tuple(sorted(m2 + (y,))), b2), val)
    for key, val in _act_element(st, _bracket_unit(a, c, st.n + j, k), rest, b).items():
        _add_into(out, key, val)
    return tuple(sorted(out.items()))


def _act_element(st: ClassicalModuleState, X: dict, mono: tuple, b: int) -> dict:
    out: dict = {}
    diag = {a: v for (a, c), v in X.items() if a == c}
    if diag:
        for key, val in _act_diagonal(st, diag, mono, b).items():
            _add_into(out, key, val)
    for (a, c), coeff in X.items():
        if a == c:
            continue
        for key, val in _act_unit(st, a, c, mono, b):
            _add_into(out, key, coeff * val)
    return out


def _exponents_to_mono(st: ClassicalModuleState, r) -> tuple:
    mono = []
    for idx, e in enumerate(r):
        mono.extend([idx] * e)
    return tuple(mono)


def _mono_to_exponents(st: ClassicalModuleState, mono: tuple) -> tuple:
    r = [0] * (st.n * st.m)
    for idx in mono:
        r[idx] += 1
    return tuple(r)


def classical_action(st: ClassicalModuleState, g, r, v) -> dict:
    """g = (kind, i) with kind in e/f/h; returns {(exponents, basis index): Fraction}."""
    kind, i = g
    if not (1 <= i < st.N):
        raise ValueError(f"generator index {i} outside sl_{st.N}")
    X = generator_element(kind, i)
    mono = _exponents_to_mono(st, tuple(r))
    out: dict = {}
    for b, c in enumerate(v):
        c = Fraction(c)
        if not c:
            continue
        for (m2, b2), val in _act_element(st, X, mono, b).items():
            _add_into(out, (_mono_to_exponents(st, m2), b2), c * val)
    return out


# -- matrices and characters ------------------------------------------------------------

def classical_basis(st: ClassicalModuleState, d: int) -> list:
    """Monomials of degree <= d: by degree, then lexicographically descending."""
    nv = st.n * st.m
    out = []
    for deg in range(d + 1):
        layer = []
        for combo in combinations_with_replacement(range(nv), deg):
            layer.append(_mono_to_exponents(st, combo))
        layer.sort(reverse=True)
        out.extend(layer)
    return out


@dataclass
class ClassicalMatrix:
    rows: list   # (exponents, basis index)
    cols: list
    entries: list  # entries[i][j] Fraction


def classical_matrix(st: ClassicalModuleState, g, d: int) -> ClassicalMatrix:
    """Matrix of g on the slice |r| <= d (rows reach degree d + 1)."""
    cols = [(r, b) for r in classical_basis(st, d) for b in range(st.dim)]
    rows = [(r, b) for r in classical_basis(st, d + 1) for b in range(st.dim)]
    where = {key: i for i, key in enumerate(rows)}
    entries = [[Fraction(0)] * len(cols) for _ in rows]
    for j, (r, b) in enumerate(cols):
        v = [0] * st.dim
        v[b] = 1
        for key, val in classical_action(st, g, r, v).items():
            entries[where[key]][j] = val
    return ClassicalMatrix(rows, cols, entries)


def classical_character(st: ClassicalModuleState, d: int) -> dict:
    """{degree: Counter(weight tuple)} with weights the h_i-eigenvalues."""
    out: dict = {}
    nv = st.n * st.m
    for deg in range(d + 1):
        counter: Counter = Counter()
        for combo in combinations_with_replacement(range(nv), deg):
            for b in range(st.dim):
                w = []
                for i in range(1, st.N):
                    D = {i: Fraction(1), i + 1: Fraction(-1)}
                    res = _act_diagonal(st, D, combo, b)
                    w.append(int(res.get((combo, b), 0)))
                counter[tuple(w)] += 1
        out[deg] = counter
    return out
