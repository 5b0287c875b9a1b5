"""Realization of U_q(sl_{n+m}) on C[u-bar*] (x) V by quantum differential operators.

``rho`` is the action of the Levi part on the polynomial ring alone (the
trivial-V case); ``pi`` adds the inducing module V.  Levi and torus
generators go through the mixed coproduct, f_n and e_n through their explicit
formulas.  A :class:`RealizedOperator` is a finite sum of ordered Weyl
monomials tensored with dim x dim matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

from .pmodule import PModuleSpec, QMatrix, levi_root_matrix, trivial_module
from .qcoeff import ONE, Q, ZERO, RationalQ, format_q, qpow, to_q
from .qweyl import (
    Shape,
    ShapeMismatchError,
    WeylOperator,
    _term_canonical,
    _term_mul,
    dop,
    format_monomial,
    gop,
    identity,
    monomials_upto,
    op_product,
    operator_from_json,
    operator_to_json,
    xop,
)
from .uqalg import (
    AlgebraWord,
    CartanK,
    Gen,
    RootVector,
    adjacent_split,
    evaluate_word,
    split_coefficient,
)

__all__ = [
    "RealizedOperator",
    "CoproductRule",
    "Realization",
    "MUTATIONS",
    "rho_generator",
    "rho_weyl",
    "rho_E_closed",
    "rho_E_closed_weyl",
    "pi_generator",
    "realization",
    "act",
    "compose",
    "add",
    "scalar_mul",
    "format_state",
    "unit_state",
    "realized_to_json",
    "realized_from_json",
]

_QDIFF = Q - qpow(-1)
_INV_QDIFF = ONE / _QDIFF

# Seeded single-term / sign corruptions used to show that verification has teeth.
MUTATIONS = {
    "en-drop-cartan": "drop the (sigma(k_n) - sigma(k_n^-1))/(q - q^-1) summand of pi(e_n)",
    "en-drop-xdd": "drop the x del del summand of pi(e_n)",
    "en-drop-levi": "drop the pi(E_{n,k} k_n) summand of pi(e_n)",
    "en-drop-second": "drop the sigma(k_n^-1 E_{n+k,n+1}) summand of pi(e_n)",
    "rho-e-sign": "flip the sign of rho(e_1)",
    "fn-drop-gamma": "drop the gamma factors of pi(f_n)",
    "kn-power": "use gamma_{1,n}^-1 instead of gamma_{1,n}^-2 in rho(k_n)",
}


# -- realized operators ------------------------------------------------------------

class RealizedOperator:
    """sum_t w_t (x) M_t with w_t ordered Weyl monomials and M_t matrices."""

    __slots__ = ("shape", "dim", "terms", "_canon", "_cols")

    def __init__(self, shape: Shape, dim: int, terms=None):
        self.shape = shape
        self.dim = dim
        self.terms = {k: M for k, M in (terms or {}).items() if not M.is_zero()}
        self._canon = None
        self._cols = {}

    @classmethod
    def tensor(cls, w: WeylOperator, M: QMatrix) -> RealizedOperator:
        terms = {}
        for key, c in w.terms.items():
            terms[key] = M * c
        return cls(w.shape, M.nrows, terms)

    @classmethod
    def from_pairs(cls, shape: Shape, dim: int, pairs) -> RealizedOperator:
        out = cls(shape, dim)
        for w, M in pairs:
            out = out + cls.tensor(w, M)
        return out

    @classmethod
    def zero(cls, shape: Shape, dim: int) -> RealizedOperator:
        return cls(shape, dim)

    @classmethod
    def one(cls, shape: Shape, dim: int) -> RealizedOperator:
        return cls.tensor(identity(shape), QMatrix.identity(dim))

    def _check(self, other):
        if self.shape != other.shape or self.dim != other.dim:
            raise ShapeMismatchError(
                f"operators differ in shape or dimension: {self.shape}/{self.dim} vs {other.shape}/{other.dim}"
            )

    def __add__(self, other):
        if not isinstance(other, RealizedOperator):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for k, M in other.terms.items():
            out[k] = out[k] + M if k in out else M
        return RealizedOperator(self.shape, self.dim, out)

    def __neg__(self):
        return RealizedOperator(self.shape, self.dim, {k: -M for k, M in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, RealizedOperator):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> RealizedOperator:
        c = to_q(c)
        return RealizedOperator(self.shape, self.dim, {k: M * c for k, M in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, RealizedOperator):
            return compose(self, other)
        if isinstance(other, (RationalQ, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (RationalQ, int)):
            return self.scale(other)
        return NotImplemented

    def canonical(self) -> dict:
        if self._canon is None:
            acc: dict = {}
            for (x, g, d), M in self.terms.items():
                for key, c in _term_canonical(x, g, d):
                    acc[key] = acc[key] + M * c if key in acc else M * c
            self._canon = {k: M for k, M in acc.items() if not M.is_zero()}
        return self._canon

    def is_zero(self) -> bool:
        return not self.canonical()

    def __eq__(self, other):
        if not isinstance(other, RealizedOperator):
            return NotImplemented
        return self.shape == other.shape and self.dim == other.dim and self.canonical() == other.canonical()

    def __hash__(self):
        return hash((self.shape, self.dim, frozenset(self.canonical().items())))

    def weyl_part(self, i: int = 0, j: int = 0) -> WeylOperator:
        """The Weyl operator sitting at matrix position (i, j)."""
        return WeylOperator(self.shape, {k: M.rows[i][j] for k, M in self.terms.items()})

    def apply_basis(self, r: tuple, b: int) -> dict:
        """Image of x^r (x) v_b as {(monomial, basis index): coeff}; cached."""
        hit = self._cols.get((r, b))
        if hit is not None:
            return hit
        out: dict = {}
        for key, M in self.terms.items():
            col = [(i, M.rows[i][b]) for i in range(self.dim) if M.rows[i][b]]
            if not col:
                continue
            image = WeylOperator._from_clean(self.shape, {key: ONE}).apply_monomial(r)
            for r2, c in image.items():
                for i, mc in col:
                    k2 = (r2, i)
                    s = out.get(k2, ZERO) + c * mc
                    if s:
                        out[k2] = s
                    else:
                        out.pop(k2, None)
        self._cols[(r, b)] = out
        return out

    def apply(self, state: dict) -> dict:
        out: dict = {}
        for (r, b), c in state.items():
            for k, v in self.apply_basis(r, b).items():
                s = out.get(k, ZERO) + c * v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out

    def __repr__(self):
        return f"RealizedOperator({self.shape.n},{self.shape.m}; dim {self.dim}; {len(self.terms)} terms)"

    def __str__(self):
        return format_realized(self)


def compose(a: RealizedOperator, b: RealizedOperator) -> RealizedOperator:
    """a o b: b acts first."""
    a._check(b)
    acc: dict = {}
    for k1, M1 in a.terms.items():
        for k2, M2 in b.terms.items():
            M12 = M1 * M2
            if M12.is_zero():
                continue
            for key, c in _term_mul(k1, k2):
                acc[key] = acc[key] + M12 * c if key in acc else M12 * c
    return RealizedOperator(a.shape, a.dim, acc)


def add(a: RealizedOperator, b: RealizedOperator) -> RealizedOperator:
    return a + b


def scalar_mul(c, a: RealizedOperator) -> RealizedOperator:
    return a.scale(c)


def act(op: RealizedOperator, r, v) -> dict:
    """Apply ``op`` to x^r (x) v, v given by its coordinates."""
    r = tuple(r)
    if len(r) != op.shape.nvars:
        raise ShapeMismatchError(f"monomial has {len(r)} exponents, shape needs {op.shape.nvars}")
    v = [to_q(c) for c in v]
    if len(v) != op.dim:
        raise ShapeMismatchError(f"vector has length {len(v)}, module dimension is {op.dim}")
    return op.apply({(r, b): c for b, c in enumerate(v) if c})


def format_state(shape: Shape, state: dict) -> str:
    """Render {(monomial, b): coeff} as e.g. 'q·x_{1,2} ⊗ v_0'."""
    if not state:
        return "0"
    parts = []
    for (r, b), c in sorted(state.items(), key=lambda kv: (sum(kv[0][0]), tuple(-e for e in kv[0][0]), kv[0][1])):
        body = f"{format_monomial(shape, r)} ⊗ v_{b}"
        cs = format_q(c)
        if cs == "1":
            parts.append(body)
        elif cs == "-1":
            parts.append("-" + body)
        elif any(ch in cs for ch in "+/") or " - " in cs:
            parts.append(f"({cs})·{body}")
        else:
            parts.append(f"{cs}·{body}")
    return " + ".join(parts)


def format_realized(op: RealizedOperator) -> str:
    if not op.terms:
        return "0"
    groups = _grouped(op)
    out = []
    for w, M in groups:
        if M == QMatrix.identity(op.dim):
            out.append(f"({w}) ⊗ id")
        else:
            out.append(f"({w}) ⊗ {M.to_json()}")
    return " + ".join(out)


def _normalize(M: QMatrix):
    for row in M.rows:
        for c in row:
            if c:
                return c, M * (ONE / c)
    raise ValueError("zero matrix")


def _grouped(op: RealizedOperator) -> list:
    """Group terms by their matrix up to scalar; deterministic order."""
    groups: dict = {}
    for key, M in op.terms.items():
        c, N = _normalize(M)
        groups.setdefault(N, {})[key] = c
    items = [(WeylOperator(op.shape, terms), N) for N, terms in groups.items()]
    items.sort(key=lambda wn: repr(wn[1].to_json()))
    return items


def realized_to_json(op: RealizedOperator) -> list:
    return [{"weyl": operator_to_json(w), "matrix": N.to_json()} for w, N in _grouped(op)]


def realized_from_json(shape: Shape, data) -> RealizedOperator:
    if not data:
        raise ValueError("empty operator list: dimension unknown")
    dim = len(data[0]["matrix"])
    out = RealizedOperator(shape, dim)
    for item in data:
        out = out + RealizedOperator.tensor(operator_from_json(shape, item["weyl"]), QMatrix.from_json(item["matrix"]))
    return out


# -- mixed coproduct ---------------------------------------------------------------

@dataclass(frozen=True)
class CoproductRule:
    """Coproduct, counit and antipode of the mixed Hopf structure on U_q(l).

    Generators of the first block (index < n) use one convention, those of the
    second block (index > n) the opposite one; k_n is grouplike.
    """

    n: int

    def coproduct(self, g: Gen) -> list:
        """List of (left, right) letters; None stands for the unit."""
        if g.index == self.n and g.kind in ("E", "F"):
            raise ValueError(f"{g} does not belong to the Levi subalgebra")
        if g.kind in ("K", "Kinv"):
            return [(g, g)]
        k, kinv = Gen("K", g.index), Gen("Kinv", g.index)
        first = g.index < self.n
        if g.kind == "E":
            return [(g, kinv if first else k), (None, g)]
        return [(g, None), (k if first else kinv, g)]

    def counit(self, g: Gen) -> int:
        return 1 if g.kind in ("K", "Kinv") else 0

    def antipode(self, g: Gen) -> AlgebraWord:
        if g.kind in ("K", "Kinv"):
            return AlgebraWord({(g.inverse(),): ONE})
        k, kinv = Gen("K", g.index), Gen("Kinv", g.index)
        first = g.index < self.n
        if g.kind == "E":
            return AlgebraWord({(g, k if first else kinv): -ONE})
        return AlgebraWord({(kinv if first else k, g): -ONE})


# -- rho on Levi generators ----------------------------------------------------------

def _rho_formula(shape: Shape, g: Gen, mutation: str | None = None) -> WeylOperator:
    n, m = shape.n, shape.m
    i = g.index
    if not (1 <= i <= shape.rank):
        raise ValueError(f"{g} outside sl_{shape.rank + 1}")
    P = lambda fs: op_product(shape, fs)  # noqa: E731
    if i == n:
        if g.kind in ("E", "F"):
            raise ValueError(f"{g} is not in the Levi subalgebra")
        sign = 1 if g.kind == "K" else -1
        fs = [gop(shape, 1, t, -sign) for t in range(1, n + 1)]
        fs += [gop(shape, s, n, -sign) for s in range(1, m + 1)]
        if mutation == "kn-power":
            fs = fs[:-m] + [gop(shape, s, n, -sign) for s in range(2, m + 1)]
        return P(fs)
    if i < n:
        if g.kind == "E":
            out = WeylOperator(shape)
            for k in range(1, m + 1):
                gam = [f for t in range(k, m + 1) for f in (gop(shape, t, i, 1), gop(shape, t, i + 1, -1))]
                out = out - P(gam + [xop(shape, k, i + 1), dop(shape, k, i)])
            if mutation == "rho-e-sign" and i == 1:
                out = -out
            return out
        if g.kind == "F":
            out = WeylOperator(shape)
            for k in range(1, m + 1):
                gam = [f for t in range(1, k + 1) for f in (gop(shape, t, i, -1), gop(shape, t, i + 1, 1))]
                out = out - P([xop(shape, k, i), dop(shape, k, i + 1)] + gam)
            return out
        sign = 1 if g.kind == "K" else -1
        return P([f for t in range(1, m + 1) for f in (gop(shape, t, i, -sign), gop(shape, t, i + 1, sign))])
    a = i - n
    if g.kind == "E":
        out = WeylOperator(shape)
        for k in range(1, n + 1):
            gam = [f for t in range(k + 1, n + 1) for f in (gop(shape, a, t, 1), gop(shape, a + 1, t, -1))]
            out = out + P([xop(shape, a, k), dop(shape, a + 1, k)] + gam)
        return out
    if g.kind == "F":
        out = WeylOperator(shape)
        for k in range(1, n + 1):
            gam = [f for t in range(1, k) for f in (gop(shape, a, t, -1), gop(shape, a + 1, t, 1))]
            out = out + P(gam + [xop(shape, a + 1, k), dop(shape, a, k)])
        return out
    sign = 1 if g.kind == "K" else -1
    return P([f for t in range(1, n + 1) for f in (gop(shape, a, t, sign), gop(shape, a + 1, t, -sign))])


@lru_cache(maxsize=None)
def rho_weyl(shape: Shape, g: Gen, mutation: str | None = None) -> WeylOperator:
    """rho_q(g) as a Weyl operator, for any Levi or torus generator g."""
    return _rho_formula(shape, g, mutation)


def rho_generator(shape: Shape, g: Gen) -> RealizedOperator:
    return RealizedOperator.tensor(rho_weyl(shape, g), QMatrix.identity(1))


@lru_cache(maxsize=None)
def rho_E_closed_weyl(shape: Shape, j: int, i: int) -> WeylOperator:
    """Closed-form sum for rho_q(E_{j,i}), 1 <= i < j <= n."""
    n, m = shape.n, shape.m
    if not (1 <= i < j <= n):
        raise ValueError(f"closed form needs 1 <= i < j <= n, got ({j},{i}) with n={n}")
    s = j - i
    out = WeylOperator(shape)
    for ks in combinations_with_replacement(range(1, m + 1), s):
        tau = len(set(ks))
        coeff = -((qpow(-1) - Q) ** (tau - 1))
        fs = [xop(shape, ks[0], i)]
        for t in range(1, s):
            kt, kn = ks[t - 1], ks[t]
            if kt != kn:
                fs += [dop(shape, kt, i + t), xop(shape, kn, i + t)]
            else:
                fs.append(gop(shape, kt, i + t, -1))
        fs.append(dop(shape, ks[-1], j))
        for a in range(1, s + 1):
            for t in range(1, ks[a - 1] + 1):
                fs += [gop(shape, t, i + a, 1), gop(shape, t, i + a - 1, -1)]
        out = out + op_product(shape, fs).scale(coeff)
    return out


def rho_E_closed(shape: Shape, j: int, i: int) -> RealizedOperator:
    return RealizedOperator.tensor(rho_E_closed_weyl(shape, j, i), QMatrix.identity(1))


# -- the realization -------------------------------------------------------------------

class Realization:
    """pi_{q,V} for a fixed shape and module, with memoized images and columns.

    ``rho_root`` selects how rho_q(E_{j,i}) (first block, j > i) is built
    inside pi(e_n): "closed" uses the closed-form sum, "recursion" the root
    vector recursion.  ``mutation`` names an entry of MUTATIONS.  ``q0``
    switches column arithmetic to exact rationals at q = q0.
    """

    def __init__(self, shape: Shape, module: PModuleSpec | None = None, *, rho_root: str = "closed",
                 mutation: str | None = None, q0=None):
        module = module if module is not None else trivial_module(shape)
        if module.shape != shape:
            raise ShapeMismatchError(f"module shape {module.shape} differs from {shape}")
        if rho_root not in ("closed", "recursion"):
            raise ValueError(f"rho_root must be 'closed' or 'recursion', not {rho_root!r}")
        if mutation is not None and mutation not in MUTATIONS:
            raise ValueError(f"unknown mutation {mutation!r}")
        self.shape = shape
        self.module = module
        self.dim = module.dim
        self.rho_root = rho_root
        self.mutation = mutation
        self.coproduct_rule = CoproductRule(shape.n)
        self.q0 = None if q0 is None else Fraction(q0)
        self._gens: dict = {}
        self._letters: dict = {}
        self._rho_cache: dict = {}
        self._cols: dict = {}

    # scalars in the column backend
    def conv(self, c):
        if self.q0 is None:
            return to_q(c)
        return c.evaluate_at(self.q0) if isinstance(c, RationalQ) else Fraction(c)

    # rho
    def rho(self, L) -> WeylOperator:
        """rho_q on Levi letters (generators, Levi root vectors, K products)."""
        hit = self._rho_cache.get(L)
        if hit is not None:
            return hit
        if isinstance(L, Gen):
            v = rho_weyl(self.shape, L, self.mutation)
        elif isinstance(L, RootVector) and self.rho_root == "closed" and L.j < L.i <= self.shape.n:
            v = rho_E_closed_weyl(self.shape, L.i, L.j)
        else:
            if isinstance(L, RootVector) and not _same_block(self.shape, L.i, L.j):
                raise ValueError(f"{L} is not in the Levi subalgebra")
            v = evaluate_word(AlgebraWord({(L,): ONE}), _declining(self.rho, L), identity(self.shape))
        self._rho_cache[L] = v
        return v

    def sigma(self, L) -> QMatrix:
        if isinstance(L, Gen):
            return self.module.matrix(L)
        if isinstance(L, RootVector):
            return levi_root_matrix(self.module, L.i, L.j)
        raise TypeError(L)

    def _tensor(self, w: WeylOperator, M: QMatrix | None = None) -> RealizedOperator:
        return RealizedOperator.tensor(w, M if M is not None else QMatrix.identity(self.dim))

    # pi on generators
    def generator(self, g: Gen) -> RealizedOperator:
        hit = self._gens.get(g)
        if hit is not None:
            return hit
        if not (1 <= g.index <= self.shape.rank):
            raise ValueError(f"{g} outside sl_{self.shape.rank + 1}")
        n = self.shape.n
        if g.index == n and g.kind == "F":
            v = self._pi_fn()
        elif g.index == n and g.kind == "E":
            v = self._pi_en()
        else:
            v = RealizedOperator(self.shape, self.dim)
            for left, right in self.coproduct_rule.coproduct(g):
                w = identity(self.shape) if left is None else self.rho(left)
                M = self.module.identity() if right is None else self.sigma(right)
                v = v + self._tensor(w, M)
        self._gens[g] = v
        return v

    def _pi_fn(self) -> RealizedOperator:
        s, n = self.shape, self.shape.n
        fs = [xop(s, 1, n)]
        if self.mutation != "fn-drop-gamma":
            fs += [gop(s, 1, t) for t in range(1, n)]
        return self._tensor(op_product(s, fs))

    def pi_E_nk(self, k: int) -> RealizedOperator:
        """pi(E_{n,k}), k < n, assembled from the coproduct expression."""
        s, n = self.shape, self.shape.n
        if not (1 <= k < n):
            raise ValueError(f"need 1 <= k < n, got k={k}")
        out = self._tensor(self.rho(RootVector(n, k)))
        out = out + self._tensor(self.rho(CartanK(k, n)), self.sigma(RootVector(n, k)))
        for l in range(k + 1, n):
            w = self.rho(RootVector(l, k)) * self.rho(CartanK(l, n))
            out = out + self._tensor(w, self.sigma(RootVector(n, l)) * _QDIFF)
        return out

    def _pi_en(self) -> RealizedOperator:
        s, n, m = self.shape, self.shape.n, self.shape.m
        mut = self.mutation
        sk = self.sigma(Gen("K", n))
        skinv = self.sigma(Gen("Kinv", n))
        out = RealizedOperator(s, self.dim)
        if mut != "en-drop-levi":
            pikn = self.generator(Gen("K", n))
            for k in range(1, n):
                tail = op_product(s, [gop(s, 1, t) for t in range(1, k + 1)] + [dop(s, 1, k)])
                out = out + self.pi_E_nk(k) * pikn * self._tensor(tail)
        if mut != "en-drop-second":
            for k in range(2, m + 1):
                w = op_product(s, [gop(s, t, n) for t in range(k, m + 1)] + [dop(s, k, n)])
                out = out - self._tensor(w, skinv * self.sigma(RootVector(n + k, n + 1)))
        if mut != "en-drop-xdd":
            for k in range(1, m + 1):
                fs = [gop(s, t, n) for t in range(1, k)] + [gop(s, t, n, -1) for t in range(k + 1, m + 1)]
                w = op_product(s, fs + [xop(s, k, n), dop(s, k, n), dop(s, 1, n)])
                out = out - self._tensor(w, sk)
        # 1 (x) sigma(e_n) vanishes: e_n spans the nilradical
        if mut != "en-drop-cartan":
            w = op_product(s, [gop(s, t, n) for t in range(1, m + 1)] + [dop(s, 1, n)])
            out = out + self._tensor(w, (sk - skinv) * _INV_QDIFF)
        return out

    # pi on derived letters
    def operator(self, L) -> RealizedOperator:
        """pi of any letter; root vectors through the recursion."""
        if isinstance(L, Gen):
            return self.generator(L)
        hit = self._letters.get(L)
        if hit is None:
            hit = evaluate_word(AlgebraWord({(L,): ONE}), _declining(self.operator, L),
                                RealizedOperator.one(self.shape, self.dim))
            self._letters[L] = hit
        return hit

    def word_operator(self, w: AlgebraWord) -> RealizedOperator:
        return evaluate_word(w, self.operator, RealizedOperator.one(self.shape, self.dim))

    # columns: images of basis vectors, computed without operator products
    def column(self, L, r: tuple, b: int) -> dict:
        key = (L, r, b)
        hit = self._cols.get(key)
        if hit is not None:
            return hit
        if isinstance(L, Gen):
            col = self.generator(L).apply_basis(r, b)
            if self.q0 is not None:
                col = {k: self.conv(v) for k, v in col.items()}
        elif isinstance(L, RootVector):
            if abs(L.i - L.j) == 1:
                col = self.column(Gen("E", L.i) if L.i < L.j else Gen("F", L.j), r, b)
            else:
                k = adjacent_split(L.i, L.j)
                a, c = RootVector(L.i, k), RootVector(k, L.j)
                base = {(r, b): self.conv(ONE)}
                col = _axpy(
                    self.apply_letters((a, c), base),
                    self.apply_letters((c, a), base),
                    -self.conv(split_coefficient(L.i, L.j)),
                )
        elif isinstance(L, CartanK):
            kind = "Kinv" if L.inverse else "K"
            col = self.apply_letters(tuple(Gen(kind, t) for t in range(L.i, L.j)), {(r, b): self.conv(ONE)})
        else:
            raise TypeError(f"unknown letter {L!r}")
        self._cols[key] = col
        return col

    def apply_letter(self, L, state: dict) -> dict:
        out: dict = {}
        for (r, b), c in state.items():
            for k, v in self.column(L, r, b).items():
                s = out.get(k, 0) + c * v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out

    def apply_letters(self, seq, state: dict) -> dict:
        """Apply the written product seq[0] seq[1] ... (rightmost first)."""
        for L in reversed(seq):
            if not state:
                break
            state = self.apply_letter(L, state)
        return state

    def apply_word(self, w: AlgebraWord, state: dict) -> dict:
        out: dict = {}
        for seq, c in w.terms.items():
            out = _axpy(out, self.apply_letters(seq, state), self.conv(c))
        return out

    def basis(self, d: int) -> list:
        return [(r, b) for r in monomials_upto(self.shape, d) for b in range(self.dim)]


def _declining(assign, letter):
    """``assign`` except that ``letter`` itself is left to the recursion."""

    def inner(L):
        if L == letter:
            raise KeyError(L)
        return assign(L)

    return inner


def _axpy(y: dict, x: dict, a) -> dict:
    """y + a*x on sparse vectors (returns a new dict)."""
    out = dict(y)
    for k, v in x.items():
        s = out.get(k, 0) + a * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _same_block(shape: Shape, i: int, j: int) -> bool:
    n = shape.n
    return (i <= n and j <= n) or (i > n and j > n)


_REALIZATIONS: dict = {}


def realization(shape: Shape, module: PModuleSpec | None = None, **options) -> Realization:
    """Shared Realization instance (memoized per shape, module and options)."""
    module = module if module is not None else trivial_module(shape)
    key = (shape, module.dim, tuple(sorted((g.sort_key(), M) for g, M in module.gens.items())),
           tuple(sorted(options.items())))
    hit = _REALIZATIONS.get(key)
    if hit is None:
        hit = Realization(shape, module, **options)
        _REALIZATIONS[key] = hit
    return hit


def pi_generator(shape: Shape, module: PModuleSpec | None, g: Gen, **options) -> RealizedOperator:
    return realization(shape, module, **options).generator(g)


def unit_state(r, b: int = 0) -> dict:
    return {(tuple(r), b): ONE}

