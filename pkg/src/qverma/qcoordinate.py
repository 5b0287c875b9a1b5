"""Straightening in the coordinate algebra of the quantum vector space.

Words in the generators x_{j,k} are rewritten into the row-major ordered
monomial basis x^r = x_{1,1}^{r_11} x_{1,2}^{r_12} ... x_{m,n}^{r_mn} using,
for i < j and k < l,

    x_{i,l} x_{i,k} -> q x_{i,k} x_{i,l}
    x_{j,k} x_{i,k} -> q x_{i,k} x_{j,k}
    x_{j,k} x_{i,l} -> x_{i,l} x_{j,k}
    x_{j,l} x_{i,k} -> x_{i,k} x_{j,l} + (q - q^-1) x_{i,l} x_{j,k}

The strategy always fixes the leftmost adjacent inversion.  The identification
with the PBW monomials E^r of U_q(u-bar) (x_{j,k} <-> E_{n+j,k}) and with the
commutative polynomial ring (x^r <-> x^r) is the identity on exponent tuples,
so a QPolynomial is the same dict-of-exponents structure as a Polynomial.
"""

from __future__ import annotations

from functools import lru_cache

from .qcoeff import ONE, Q, ZERO, RationalQ, qpow
from .qweyl import Shape, ShapeMismatchError

__all__ = [
    "straighten",
    "qmul",
    "rewrite_at",
    "inversions",
    "word_of_monomial",
    "psi_label",
]

_QDIFF = Q - qpow(-1)


def _pos(shape: Shape, var) -> int:
    j, k = var
    return shape.index(j, k)


def rewrite_at(shape: Shape, word: tuple, i: int) -> list:
    """One rewriting step on the adjacent pair (word[i], word[i+1]).

    Returns a list of (word, coefficient).  The pair must be an inversion.
    """
    (a_row, a_col), (b_row, b_col) = word[i], word[i + 1]
    if _pos(shape, word[i]) <= _pos(shape, word[i + 1]):
        raise ValueError("not an inversion")
    head, tail = word[:i], word[i + 2:]
    if a_row == b_row:
        # x_{i,l} x_{i,k}, k < l
        return [(head + (word[i + 1], word[i]) + tail, Q)]
    # now a_row > b_row
    if a_col == b_col:
        return [(head + (word[i + 1], word[i]) + tail, Q)]
    if a_col < b_col:
        # x_{j,k} x_{i,l}, k < l: commute
        return [(head + (word[i + 1], word[i]) + tail, ONE)]
    # x_{j,l} x_{i,k}, k < l
    j, l = a_row, a_col
    i_, k = b_row, b_col
    return [
        (head + ((i_, k), (j, l)) + tail, ONE),
        (head + ((i_, l), (j, k)) + tail, _QDIFF),
    ]


def inversions(shape: Shape, word: tuple) -> list:
    return [i for i in range(len(word) - 1) if _pos(shape, word[i]) > _pos(shape, word[i + 1])]


def _monomial_of_sorted(shape: Shape, word: tuple) -> tuple:
    r = [0] * shape.nvars
    for var in word:
        r[_pos(shape, var)] += 1
    return tuple(r)


def word_of_monomial(shape: Shape, r: tuple) -> tuple:
    """The row-major sorted word whose product is x^r."""
    out = []
    for idx, e in enumerate(r):
        out.extend([shape.label(idx)] * e)
    return tuple(out)


@lru_cache(maxsize=None)
def _straighten(shape: Shape, word: tuple) -> tuple:
    for i in range(len(word) - 1):
        if _pos(shape, word[i]) > _pos(shape, word[i + 1]):
            acc: dict = {}
            for w, c in rewrite_at(shape, word, i):
                for r, cc in _straighten(shape, w):
                    v = acc.get(r, ZERO) + c * cc
                    if v:
                        acc[r] = v
                    else:
                        acc.pop(r, None)
            return tuple(sorted(acc.items()))
    return ((_monomial_of_sorted(shape, word), ONE),)


def straighten(shape: Shape, word) -> dict:
    """Image of a word in the ordered monomial basis {x^r}."""
    word = tuple(tuple(v) for v in word)
    for j, k in word:
        if not (1 <= j <= shape.m and 1 <= k <= shape.n):
            raise ShapeMismatchError(f"x_{{{j},{k}}} outside shape {shape}")
    return dict(_straighten(shape, word))


def qmul(shape: Shape, p1: dict, p2: dict) -> dict:
    """Product in the quantum coordinate algebra of two straightened elements."""
    acc: dict = {}
    for r1, c1 in p1.items():
        w1 = word_of_monomial(shape, r1)
        for r2, c2 in p2.items():
            c = c1 * c2
            for r, cc in _straighten(shape, w1 + word_of_monomial(shape, r2)):
                v = acc.get(r, ZERO) + c * cc
                if v:
                    acc[r] = v
                else:
                    acc.pop(r, None)
    return acc


def psi_label(shape: Shape, j: int, k: int) -> tuple[int, int]:
    """Root vector index of the image of x_{j,k}: E_{n+j,k}."""
    shape.index(j, k)
    return shape.n + j, k
