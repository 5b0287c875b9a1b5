"""Formal presentation data for U_q(sl_N).

Words are formal Q(q)-linear combinations of letter sequences.  Letters are
Chevalley generators (:class:`Gen`), plus two derived letters kept folded for
efficiency: root vectors E_{i,j} (:class:`RootVector`) and Cartan products
K_{i,j}^{+-1} (:class:`CartanK`).  :func:`expand` unfolds derived letters into
Chevalley words; :func:`evaluate_word` evaluates either form homomorphically,
and both give the same value.

No normal form is computed inside U_q itself: identities are checked by
evaluating words in representations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .qcoeff import ONE, Q, ZERO, RationalQ, format_q, q_binomial, q_number, qpow, to_q

__all__ = [
    "Gen",
    "RootVector",
    "CartanK",
    "AlgebraWord",
    "Relation",
    "MissingSymbolError",
    "cartan",
    "letter",
    "unit_word",
    "root_vector_word",
    "expand",
    "evaluate_word",
    "presentation_catalog",
    "jimbo_catalog",
    "parse_generator",
]


class MissingSymbolError(KeyError):
    pass


_KIND_ORDER = {"E": 0, "F": 1, "K": 2, "Kinv": 3}


@dataclass(frozen=True)
class Gen:
    """Chevalley generator e_i, f_i, k_i or k_i^-1."""

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.index < 1:
            raise ValueError("generator index must be >= 1")

    def sort_key(self):
        return (0, _KIND_ORDER[self.kind], self.index)

    def inverse(self) -> Gen:
        if self.kind == "K":
            return Gen("Kinv", self.index)
        if self.kind == "Kinv":
            return Gen("K", self.index)
        raise ValueError(f"{self} is not invertible")

    def __str__(self):
        return {"E": "e", "F": "f", "K": "k", "Kinv": "k"}[self.kind] + str(self.index) + (
            "^-1" if self.kind == "Kinv" else ""
        )


@dataclass(frozen=True)
class RootVector:
    """Root vector E_{i,j}, i != j (i < j positive, i > j negative)."""

    i: int
    j: int

    def sort_key(self):
        return (1, self.i, self.j)

    def __str__(self):
        return f"E{self.i},{self.j}"


@dataclass(frozen=True)
class CartanK:
    """K_{i,j} = k_i k_{i+1} ... k_{j-1} (or its inverse)."""

    i: int
    j: int
    inverse: bool = False

    def sort_key(self):
        return (2, self.i, self.j, self.inverse)

    def __str__(self):
        return f"K{self.i},{self.j}" + ("^-1" if self.inverse else "")


def parse_generator(name: str) -> Gen:
    """'e1', 'f3', 'k2', 'k2inv' -> Gen."""
    name = name.strip()
    kind = {"e": "E", "f": "F", "k": "K"}.get(name[:1])
    if kind is None:
        raise ValueError(f"bad generator name {name!r}")
    body = name[1:]
    if kind == "K" and body.endswith("inv"):
        kind, body = "Kinv", body[:-3]
    if not body.isdigit():
        raise ValueError(f"bad generator name {name!r}")
    return Gen(kind, int(body))


def cartan(i: int, j: int) -> int:
    if i == j:
        return 2
    return -1 if abs(i - j) == 1 else 0


class AlgebraWord:
    """Formal Q(q)-linear combination of letter sequences."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for seq, c in (terms or {}).items():
            c = to_q(c)
            if c:
                self.terms[tuple(seq)] = self.terms.get(tuple(seq), ZERO) + c
        self.terms = {k: v for k, v in self.terms.items() if v}

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, ZERO) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        w = AlgebraWord()
        w.terms = out
        return w

    def __neg__(self):
        w = AlgebraWord()
        w.terms = {k: -v for k, v in self.terms.items()}
        return w

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraWord):
            out: dict = {}
            for k1, v1 in self.terms.items():
                for k2, v2 in other.terms.items():
                    k = k1 + k2
                    s = out.get(k, ZERO) + v1 * v2
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
            w = AlgebraWord()
            w.terms = out
            return w
        c = to_q(other)
        w = AlgebraWord()
        w.terms = {k: v * c for k, v in self.terms.items()} if c else {}
        return w

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        out = unit_word()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, AlgebraWord) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def letters(self) -> set:
        return {L for seq in self.terms for L in seq}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: [L.sort_key() for L in kv[0]])

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for seq, c in self.sorted_terms():
            body = "·".join(str(L) for L in seq) or "1"
            cs = format_q(c)
            if cs == "1":
                parts.append(body)
            elif cs == "-1":
                parts.append("-" + body)
            else:
                parts.append(f"({cs})·{body}" if seq else cs)
        return " + ".join(parts)

    __repr__ = __str__


def letter(L, coeff=ONE) -> AlgebraWord:
    return AlgebraWord({(L,): coeff})


def unit_word(coeff=ONE) -> AlgebraWord:
    return AlgebraWord({(): coeff})


def E(i, j) -> AlgebraWord:
    return letter(RootVector(i, j))


def K(i, j, inverse=False) -> AlgebraWord:
    return letter(CartanK(i, j, inverse))


# -- root vectors ------------------------------------------------------------------

def _check_root(i, j, N):
    if i == j:
        raise ValueError(f"E_{{{i},{j}}}: indices must differ")
    if not (1 <= i <= N and 1 <= j <= N):
        raise ValueError(f"E_{{{i},{j}}} outside sl_{N}")


def adjacent_split(i: int, j: int) -> int:
    """Split point used by the recursion: j-1 above the diagonal, j+1 below."""
    return j - 1 if i < j else j + 1


def split_coefficient(i: int, j: int) -> RationalQ:
    return Q if i < j else qpow(-1)


@lru_cache(maxsize=None)
def _root_word(i: int, j: int) -> AlgebraWord:
    if j == i + 1:
        return letter(Gen("E", i))
    if i == j + 1:
        return letter(Gen("F", j))
    k = adjacent_split(i, j)
    a, b = _root_word(i, k), _root_word(k, j)
    return a * b - b * a * split_coefficient(i, j)


def root_vector_word(i: int, j: int, N: int, split: int | None = None) -> AlgebraWord:
    """Chevalley word of E_{i,j}.

    ``split`` chooses the top-level intermediate index (any k strictly between
    i and j); deeper levels always use the adjacent split.
    """
    _check_root(i, j, N)
    if split is None:
        return _root_word(i, j)
    if not (min(i, j) < split < max(i, j)):
        raise ValueError(f"split {split} not strictly between {i} and {j}")
    a, b = _root_word(i, split), _root_word(split, j)
    return a * b - b * a * split_coefficient(i, j)


def cartan_word(i: int, j: int, inverse: bool = False) -> AlgebraWord:
    kind = "Kinv" if inverse else "K"
    return AlgebraWord({tuple(Gen(kind, t) for t in range(i, j)): ONE})


def expand_letter(L) -> AlgebraWord:
    if isinstance(L, Gen):
        return letter(L)
    if isinstance(L, RootVector):
        return _root_word(L.i, L.j)
    if isinstance(L, CartanK):
        return cartan_word(L.i, L.j, L.inverse)
    raise TypeError(f"unknown letter {L!r}")


def expand(w: AlgebraWord) -> AlgebraWord:
    """Unfold root vectors and Cartan products into Chevalley generators."""
    out = AlgebraWord()
    for seq, c in w.terms.items():
        term = unit_word(c)
        for L in seq:
            term = term * expand_letter(L)
        out = out + term
    return out


# -- evaluation --------------------------------------------------------------------

def evaluate_word(w: AlgebraWord, assign, one, cache: dict | None = None):
    """Evaluate ``w`` homomorphically.

    ``assign`` maps Chevalley generators (and optionally derived letters) to
    elements of a target algebra supporting ``+``, ``*`` and scalar ``c * a``;
    ``one`` is its unit.  Derived letters missing from ``assign`` are
    evaluated through their recursion.  ``cache`` may be shared across calls.
    """
    cache = {} if cache is None else cache

    def value(L):
        hit = cache.get(L)
        if hit is not None:
            return hit
        v = None
        try:
            v = assign(L) if callable(assign) else assign[L]
        except (KeyError, LookupError):
            if isinstance(L, Gen):
                raise MissingSymbolError(f"no value assigned to {L}") from None
        if v is None:
            if isinstance(L, RootVector):
                if abs(L.i - L.j) == 1:
                    v = value(Gen("E", L.i) if L.i < L.j else Gen("F", L.j))
                else:
                    k = adjacent_split(L.i, L.j)
                    a, b = value(RootVector(L.i, k)), value(RootVector(k, L.j))
                    v = a * b - split_coefficient(L.i, L.j) * (b * a)
            elif isinstance(L, CartanK):
                kind = "Kinv" if L.inverse else "K"
                v = one
                for t in range(L.i, L.j):
                    v = v * value(Gen(kind, t))
            else:
                raise MissingSymbolError(f"no value assigned to {L}")
        cache[L] = v
        return v

    total = None
    for seq, c in w.terms.items():
        prod = one
        for L in seq:
            prod = prod * value(L)
        term = c * prod
        total = term if total is None else total + term
    if total is None:
        total = ZERO * one
    return total


# -- relation catalogs ---------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    """A named word that must evaluate to zero."""

    name: str
    word: AlgebraWord
    family: str = ""


def _g(kind, i):
    return letter(Gen(kind, i))


_QDIFF = Q - qpow(-1)
_INV_QDIFF = ONE / _QDIFF


def presentation_catalog(N: int) -> list[Relation]:
    """Defining relations of U_q(sl_N) (torus, commutator and Serre families)."""
    if N < 2:
        raise ValueError("need N >= 2")
    r = N - 1
    out = []
    idx = range(1, r + 1)
    for i in idx:
        out.append(Relation(f"k{i}·k{i}^-1 = 1", _g("K", i) * _g("Kinv", i) - unit_word(), "torus"))
        out.append(Relation(f"k{i}^-1·k{i} = 1", _g("Kinv", i) * _g("K", i) - unit_word(), "torus"))
    for i in idx:
        for j in idx:
            if i < j:
                out.append(Relation(f"[k{i},k{j}] = 0", _g("K", i) * _g("K", j) - _g("K", j) * _g("K", i), "torus"))
    for i in idx:
        for j in idx:
            a = cartan(i, j)
            out.append(Relation(
                f"k{i}·e{j}·k{i}^-1 = q^{a}·e{j}",
                _g("K", i) * _g("E", j) * _g("Kinv", i) - _g("E", j) * qpow(a), "conjugation"))
    for i in idx:
        for j in idx:
            a = cartan(i, j)
            out.append(Relation(
                f"k{i}·f{j}·k{i}^-1 = q^{-a}·f{j}",
                _g("K", i) * _g("F", j) * _g("Kinv", i) - _g("F", j) * qpow(-a), "conjugation"))
    for i in idx:
        for j in idx:
            w = _g("E", i) * _g("F", j) - _g("F", j) * _g("E", i)
            if i == j:
                w = w - (_g("K", i) - _g("Kinv", i)) * _INV_QDIFF
            out.append(Relation(f"[e{i},f{j}]", w, "commutator"))
    two = q_number(2)
    for kind, name in (("E", "e"), ("F", "f")):
        for i in idx:
            for j in idx:
                if abs(i - j) == 1:
                    a, b = _g(kind, i), _g(kind, j)
                    w = a * a * b - a * b * a * two + b * a * a
                    out.append(Relation(f"serre {name}{i}^2·{name}{j}", w, "serre"))
        for i in idx:
            for j in idx:
                if j - i > 1:
                    a, b = _g(kind, i), _g(kind, j)
                    out.append(Relation(f"[{name}{i},{name}{j}] = 0", a * b - b * a, "serre"))
    return out


def serre_general(kind: str, i: int, j: int) -> AlgebraWord:
    """sum_k (-1)^k [1-a_ij choose k] g_i^{1-a_ij-k} g_j g_i^k (general form)."""
    a = cartan(i, j)
    top = 1 - a
    gi, gj = _g(kind, i), _g(kind, j)
    out = AlgebraWord()
    for k in range(top + 1):
        out = out + gi ** (top - k) * gj * gi ** k * (q_binomial(top, k) * (-1) ** k)
    return out


def jimbo_catalog(N: int, max_power: int) -> list[Relation]:
    """The ten families of commutation relations among root vectors."""
    if N < 2 or max_power < 1:
        raise ValueError("need N >= 2 and max_power >= 1")
    out = []
    rng = range(1, N + 1)
    for m in range(1, max_power + 1):
        qm = q_number(m)
        for i in rng:
            for k in rng:
                for j in rng:
                    if not (i > k > j):
                        continue
                    out.append(Relation(
                        f"J1 E{i},{k}·E{k},{j}^{m}",
                        E(i, k) * E(k, j) ** m - E(k, j) ** m * E(i, k) * qpow(-m)
                        - E(k, j) ** (m - 1) * E(i, j) * qm, "J1"))
                    out.append(Relation(
                        f"J2 E{i},{k}^{m}·E{k},{j}",
                        E(i, k) ** m * E(k, j) - E(k, j) * E(i, k) ** m * qpow(-m)
                        - E(i, j) * E(i, k) ** (m - 1) * qm, "J2"))
                    out.append(Relation(
                        f"J3 E{i},{k}^{m}·E{i},{j}",
                        E(i, k) ** m * E(i, j) - E(i, j) * E(i, k) ** m * qpow(m), "J3"))
                    out.append(Relation(
                        f"J4 E{i},{j}·E{k},{j}^{m}",
                        E(i, j) * E(k, j) ** m - E(k, j) ** m * E(i, j) * qpow(m), "J4"))
        for i in range(1, N):
            cart = (K(i, i + 1) * qpow(1 - m) - K(i, i + 1, True) * qpow(m - 1)) * _INV_QDIFF
            out.append(Relation(
                f"J5 E{i},{i + 1}·E{i + 1},{i}^{m}",
                E(i, i + 1) * E(i + 1, i) ** m - E(i + 1, i) ** m * E(i, i + 1)
                - E(i + 1, i) ** (m - 1) * cart * qm, "J5"))
        for i in rng:
            for j in rng:
                for k in rng:
                    if not (i < j < k):
                        continue
                    out.append(Relation(
                        f"J6 E{i},{j}·E{k},{i}^{m}",
                        E(i, j) * E(k, i) ** m - E(k, i) ** m * E(i, j)
                        + E(k, i) ** (m - 1) * E(k, j) * K(i, j, True) * (qpow(m - 2) * qm), "J6"))
                    out.append(Relation(
                        f"J7 E{j},{k}·E{k},{i}^{m}",
                        E(j, k) * E(k, i) ** m - E(k, i) ** m * E(j, k)
                        - E(j, i) * E(k, i) ** (m - 1) * K(j, k) * qm, "J7"))
    for i in rng:
        for j in rng:
            for k in rng:
                for l in rng:
                    if not (i < j < k < l):
                        continue
                    out.append(Relation(f"J8 E{l},{i}·E{k},{j}", E(l, i) * E(k, j) - E(k, j) * E(l, i), "J8"))
                    out.append(Relation(
                        f"J9 E{l},{j}·E{k},{i}",
                        E(l, j) * E(k, i) - E(k, i) * E(l, j) - E(k, j) * E(l, i) * _QDIFF, "J9"))
                    out.append(Relation(f"J10 E{l},{i}·E{j},{k}", E(l, i) * E(j, k) - E(j, k) * E(l, i), "J10"))
    return out
