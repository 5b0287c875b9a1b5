"""Finite-dimensional U_q(p)-modules given by generator matrices over Q(q).

The parabolic p of sl_{n+m} has Levi factor sl_n x sl_m (plus the torus
generator k_n); e_n spans the nilradical and acts by zero, and f_n is not
part of p at all.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .qcoeff import ONE, ZERO, RationalQ, format_q, parse, qpow, to_q
from .qweyl import Shape
from .uqalg import Gen, RootVector, evaluate_word, letter, presentation_catalog, root_vector_word

__all__ = [
    "QMatrix",
    "PModuleSpec",
    "ValidationReport",
    "ModuleError",
    "validate",
    "character_module",
    "trivial_module",
    "vector_module",
    "levi_root_matrix",
    "module_from_json",
    "module_to_json",
    "load_module",
    "save_module",
    "builtin_module",
]


class ModuleError(ValueError):
    pass


class QMatrix:
    """Immutable square-or-rectangular matrix over Q(q)."""

    __slots__ = ("rows", "_hash")

    def __init__(self, rows):
        self.rows = tuple(tuple(to_q(c) for c in row) for row in rows)
        self._hash = None

    @classmethod
    def identity(cls, dim: int) -> QMatrix:
        return cls([[ONE if i == j else ZERO for j in range(dim)] for i in range(dim)])

    @classmethod
    def zero(cls, nrows: int, ncols: int | None = None) -> QMatrix:
        return cls([[ZERO] * (nrows if ncols is None else ncols) for _ in range(nrows)])

    @classmethod
    def diagonal(cls, entries) -> QMatrix:
        d = len(entries)
        return cls([[to_q(entries[i]) if i == j else ZERO for j in range(d)] for i in range(d)])

    @classmethod
    def unit(cls, dim: int, i: int, j: int) -> QMatrix:
        """Matrix unit with a single 1 at (i, j), 0-based."""
        return cls([[ONE if (a, b) == (i, j) else ZERO for b in range(dim)] for a in range(dim)])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def is_square(self) -> bool:
        return all(len(r) == self.nrows for r in self.rows)

    def is_zero(self) -> bool:
        return not any(c for row in self.rows for c in row)

    def is_diagonal(self) -> bool:
        return all(not c for i, row in enumerate(self.rows) for j, c in enumerate(row) if i != j)

    def diagonal_entries(self) -> list:
        return [self.rows[i][i] for i in range(self.nrows)]

    def column(self, j: int) -> list:
        return [row[j] for row in self.rows]

    def __add__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        self._check_same(other)
        return QMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self):
        return QMatrix([[-a for a in r] for r in self.rows])

    def __sub__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, QMatrix):
            if self.ncols != other.nrows:
                raise ModuleError(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
            cols = list(zip(*other.rows))
            out = []
            for row in self.rows:
                new = []
                for col in cols:
                    s = ZERO
                    for a, b in zip(row, col):
                        if a and b:
                            s = s + a * b
                    new.append(s)
                out.append(new)
            return QMatrix(out)
        c = to_q(other)
        return QMatrix([[a * c for a in r] for r in self.rows])

    def __rmul__(self, other):
        if isinstance(other, QMatrix):
            return NotImplemented
        return self * other

    def inverse_diagonal(self) -> QMatrix:
        if not self.is_diagonal():
            raise ModuleError("matrix is not diagonal")
        ds = self.diagonal_entries()
        if any(not d for d in ds):
            raise ModuleError("diagonal matrix is singular")
        return QMatrix.diagonal([ONE / d for d in ds])

    def _check_same(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ModuleError("matrix dimensions differ")

    def __eq__(self, other):
        return isinstance(other, QMatrix) and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def evaluate_at(self, q0):
        return [[c.evaluate_at(q0) for c in row] for row in self.rows]

    def to_json(self) -> list:
        return [[format_q(c) for c in row] for row in self.rows]

    @classmethod
    def from_json(cls, data) -> QMatrix:
        return cls([[parse(c) if isinstance(c, str) else to_q(c) for c in row] for row in data])

    def __repr__(self):
        return "QMatrix(" + repr(self.to_json()) + ")"


# -- module specs ------------------------------------------------------------------

@dataclass(frozen=True)
class PModuleSpec:
    """sigma_q: generators of U_q(p) -> dim x dim matrices.

    ``gens`` holds k_i and k_i^-1 for every i, e_i and f_i for i != n.
    e_n is the zero matrix; f_n has no image.
    """

    shape: Shape
    dim: int
    gens: dict = field(hash=False, compare=True)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ModuleError("module dimension must be positive")
        for g, mat in self.gens.items():
            if mat.nrows != self.dim or mat.ncols != self.dim:
                raise ModuleError(f"matrix of {g} is {mat.nrows}x{mat.ncols}, expected {self.dim}x{self.dim}")

    @property
    def N(self) -> int:
        return self.shape.rank + 1

    def matrix(self, g: Gen) -> QMatrix:
        """sigma_q(g); e_n is zero, f_n raises."""
        n = self.shape.n
        if g.index == n and g.kind == "F":
            raise ModuleError("f_n does not act on a U_q(p)-module")
        if g.index == n and g.kind == "E":
            return QMatrix.zero(self.dim)
        try:
            return self.gens[g]
        except KeyError:
            raise ModuleError(f"generator {g} missing from module") from None

    def assign(self, L):
        if isinstance(L, Gen):
            return self.matrix(L)
        raise KeyError(L)

    def identity(self) -> QMatrix:
        return QMatrix.identity(self.dim)


@dataclass
class ValidationReport:
    checks: list  # (name, passed)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    @property
    def failures(self) -> list:
        return [name for name, ok in self.checks if not ok]


def _generator_range(shape: Shape):
    return range(1, shape.rank + 1)


def validate(spec: PModuleSpec) -> ValidationReport:
    """Check the U_q(p)-module axioms relation by relation."""
    checks = []
    n = spec.shape.n
    for i in _generator_range(spec.shape):
        for kind in ("K", "Kinv"):
            if Gen(kind, i) not in spec.gens:
                raise ModuleError(f"missing matrix for {Gen(kind, i)}")
        k = spec.gens[Gen("K", i)]
        checks.append((f"k{i} diagonal", k.is_diagonal()))
        checks.append((f"k{i} invertible", all(k.diagonal_entries())))
    one = spec.identity()
    for rel in presentation_catalog(spec.N):
        if any(L.kind == "F" and L.index == n for L in rel.word.letters()):
            continue
        value = evaluate_word(rel.word, spec.assign, one)
        checks.append((rel.name, value.is_zero()))
    return ValidationReport(checks)


def _kinv_fill(gens: dict, rank: int) -> dict:
    out = dict(gens)
    for i in range(1, rank + 1):
        if Gen("Kinv", i) not in out and Gen("K", i) in out:
            out[Gen("Kinv", i)] = out[Gen("K", i)].inverse_diagonal()
    return out


def character_module(shape: Shape, signs=None, kn_scalar=ONE) -> PModuleSpec:
    """One-dimensional module: e, f act by 0, k_i by a sign, k_n by a scalar."""
    kn = to_q(kn_scalar)
    if not kn:
        raise ModuleError("k_n scalar must be nonzero")
    signs = dict(signs or {})
    gens = {}
    for i in _generator_range(shape):
        if i == shape.n:
            val = kn
        else:
            s = signs.get(i, 1)
            if s not in (1, -1):
                raise ModuleError(f"sign at {i} must be +1 or -1")
            val = to_q(s)
            gens[Gen("E", i)] = QMatrix.zero(1)
            gens[Gen("F", i)] = QMatrix.zero(1)
        gens[Gen("K", i)] = QMatrix([[val]])
        gens[Gen("Kinv", i)] = QMatrix([[ONE / val]])
    for i in signs:
        if i == shape.n or not (1 <= i <= shape.rank):
            raise ModuleError(f"sign index {i} is not a Levi simple root")
    return PModuleSpec(shape, 1, gens)


def trivial_module(shape: Shape) -> PModuleSpec:
    return character_module(shape)


def vector_module(shape: Shape, block: str) -> PModuleSpec:
    """Standard vector representation of one Levi block, trivial on the other."""
    n, m = shape.n, shape.m
    if block == "first":
        dim, offset = n, 0
        # k_n must scale e_{n-1} by q^-1: last weight one step above the rest
        kn = [ONE] * (n - 1) + [qpow(1)]
    elif block == "second":
        dim, offset = m, n
        kn = [qpow(-1)] + [ONE] * (m - 1)
    else:
        raise ModuleError(f"unknown block {block!r}")
    if dim < 2:
        raise ModuleError(f"{block} block has size {dim} < 2")
    gens = {}
    for i in _generator_range(shape):
        if i == n:
            k = QMatrix.diagonal(kn)
        elif offset < i < offset + dim:
            a = i - offset - 1
            gens[Gen("E", i)] = QMatrix.unit(dim, a, a + 1)
            gens[Gen("F", i)] = QMatrix.unit(dim, a + 1, a)
            k = QMatrix.diagonal([qpow(1) if t == a else qpow(-1) if t == a + 1 else ONE for t in range(dim)])
        else:
            gens[Gen("E", i)] = QMatrix.zero(dim)
            gens[Gen("F", i)] = QMatrix.zero(dim)
            k = QMatrix.identity(dim)
        gens[Gen("K", i)] = k
        gens[Gen("Kinv", i)] = k.inverse_diagonal()
    return PModuleSpec(shape, dim, gens)


def _levi_block(shape: Shape, i: int, j: int) -> bool:
    n = shape.n
    N = shape.rank + 1
    return (1 <= i <= n and 1 <= j <= n) or (n < i <= N and n < j <= N)


def levi_root_matrix(spec: PModuleSpec, i: int, j: int, split: int | None = None) -> QMatrix:
    """sigma_q(E_{i,j}) for a root vector inside one Levi block."""
    if i == j or not _levi_block(spec.shape, i, j):
        raise ModuleError(f"E_{{{i},{j}}} is not a Levi root vector for shape {spec.shape}")
    if split is None:
        w = letter(RootVector(i, j))
    else:
        w = root_vector_word(i, j, spec.N, split)
    return evaluate_word(w, spec.assign, spec.identity())


# -- builtin names and files -------------------------------------------------------

def builtin_module(shape: Shape, name: str) -> PModuleSpec:
    """trivial, char:<signs>:<kn>, vector:first, vector:second.

    <signs> is a comma-separated list of +1/-1 (one per Levi simple root, in
    index order skipping n) or empty for all +1; <kn> is a coefficient string.
    """
    if name == "trivial":
        spec = trivial_module(shape)
    elif name.startswith("vector:"):
        spec = vector_module(shape, name.split(":", 1)[1])
    elif name.startswith("char:"):
        parts = name.split(":", 2)
        if len(parts) != 3:
            raise ModuleError(f"bad character module name {name!r}")
        _, signs_txt, kn_txt = parts
        levi = [i for i in _generator_range(shape) if i != shape.n]
        signs = {}
        if signs_txt.strip():
            vals = [int(s) for s in signs_txt.split(",")]
            if len(vals) != len(levi):
                raise ModuleError(f"expected {len(levi)} signs, got {len(vals)}")
            signs = dict(zip(levi, vals))
        spec = character_module(shape, signs, parse(kn_txt))
    else:
        raise ModuleError(f"unknown builtin module {name!r}")
    return PModuleSpec(spec.shape, spec.dim, spec.gens, name)


def _gen_key(g: Gen) -> str:
    return {"E": "e", "F": "f", "K": "k", "Kinv": "k"}[g.kind] + str(g.index) + ("inv" if g.kind == "Kinv" else "")


def module_to_json(spec: PModuleSpec) -> dict:
    gens = {}
    for g in sorted(spec.gens, key=lambda g: g.sort_key()):
        if g.kind == "Kinv":
            continue
        gens[_gen_key(g)] = spec.gens[g].to_json()
    return {"n": spec.shape.n, "m": spec.shape.m, "dim": spec.dim, "generators": gens}


def module_from_json(data: dict) -> PModuleSpec:
    try:
        shape = Shape(int(data["n"]), int(data["m"]))
        dim = int(data["dim"])
        raw = data["generators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ModuleError(f"malformed module file: {exc}") from None
    gens = {}
    rank = shape.rank
    for key, mat in raw.items():
        name = key.strip()
        if name == "kn":
            name = f"k{shape.n}"
        g = _parse_gen_key(name)
        if not (1 <= g.index <= rank):
            raise ModuleError(f"generator {key} out of range for sl_{rank + 1}")
        if g.index == shape.n and g.kind in ("E", "F"):
            raise ModuleError(f"{key}: e_n and f_n cannot be specified")
        gens[g] = QMatrix.from_json(mat)
    for i in range(1, rank + 1):
        if Gen("K", i) not in gens:
            raise ModuleError(f"missing matrix for k{i}")
        if i != shape.n:
            gens.setdefault(Gen("E", i), QMatrix.zero(dim))
            gens.setdefault(Gen("F", i), QMatrix.zero(dim))
    gens = _kinv_fill(gens, rank)
    return PModuleSpec(shape, dim, gens)


def _parse_gen_key(name: str) -> Gen:
    from .uqalg import parse_generator

    try:
        return parse_generator(name)
    except ValueError as exc:
        raise ModuleError(str(exc)) from None


def load_module(path) -> PModuleSpec:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    spec = module_from_json(data)
    return PModuleSpec(spec.shape, spec.dim, spec.gens, str(path))


def save_module(spec: PModuleSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(module_to_json(spec), fh, indent=2, sort_keys=True)
        fh.write("\n")
