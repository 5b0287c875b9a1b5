"""Verification engine: relation catalogs, closed forms and the classical limit.

Relations are checked by applying each relation word to every basis vector
x^r (x) v_b with |r| <= d.  Every such application is exact, so d bounds
coverage, never precision.  Closed forms are compared as operators in
canonical normal form.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .oracle import classical_character, classical_matrix, classical_state
from .pmodule import PModuleSpec, trivial_module
from .qcoeff import ONE, Q, RationalQ, format_q, qpow
from .qcoordinate import qmul
from .qweyl import Shape, format_monomial, monomials_of_degree, to_matrix, unit_exponent
from .realization import MUTATIONS, Realization, format_state, realization, rho_E_closed_weyl
from .uqalg import Gen, RootVector, jimbo_catalog, presentation_catalog, root_vector_word

__all__ = [
    "CheckResult",
    "VerificationReport",
    "CharacterTable",
    "verify_presentation",
    "verify_jimbo",
    "verify_closed_forms",
    "verify_root_splits",
    "verify_adjoint_degree_one",
    "classical_limit_compare",
    "character",
    "worker_count",
]

THREADS_ENV = "QVERMA_THREADS"


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class CheckResult:
    name: str
    instance: str
    passed: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "instance": self.instance, "pass": self.passed, "witness": self.witness}


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def extend(self, other: VerificationReport) -> VerificationReport:
        self.checks.extend(other.checks)
        return self

    def summary(self) -> dict:
        nfail = len(self.failures)
        return {"total": len(self.checks), "passed": len(self.checks) - nfail, "failed": nfail, **self.meta}

    def to_json(self) -> dict:
        return {"checks": [c.to_json() for c in self.checks], "summary": self.summary()}


# -- helpers -----------------------------------------------------------------------------

def _fmt_coeff(c) -> str:
    return format_q(c) if isinstance(c, RationalQ) else str(c)


def _state_json(shape: Shape, state: dict) -> list:
    return [
        {"monomial": to_matrix(shape, r), "basis": b, "coeff": _fmt_coeff(c)}
        for (r, b), c in sorted(state.items())
    ]


def _witness(shape: Shape, r, b, residual: dict) -> dict:
    return {
        "monomial": to_matrix(shape, r),
        "basis": b,
        "input": f"{format_monomial(shape, r)} ⊗ v_{b}",
        "residual": _state_json(shape, residual),
    }


def _mode_q0(mode):
    if mode in (None, "exact"):
        return None
    q0 = Fraction(mode)
    if q0 in (0, 1, -1):
        raise ValueError("rational q must avoid 0, 1 and -1")
    return q0


def _check_words(R: Realization, relations, d: int) -> list:
    out = []
    basis = R.basis(d)
    one = R.conv(ONE)
    for rel in relations:
        witness = None
        for r, b in basis:
            res = R.apply_word(rel.word, {(r, b): one})
            if res:
                witness = _witness(R.shape, r, b, res)
                break
        out.append(CheckResult(rel.name, f"|r|<={d}, {len(basis)} basis vectors", witness is None, witness))
    return out


def _worker(args):
    shape, module, options, catalog_kind, catalog_arg, names, d = args
    R = realization(shape, module, **options)
    cat = _catalog(catalog_kind, shape, catalog_arg)
    return _check_words(R, [rel for rel in cat if rel.name in names], d)


def _catalog(kind: str, shape: Shape, arg):
    if kind == "presentation":
        return presentation_catalog(shape.rank + 1)
    return jimbo_catalog(shape.rank + 1, arg)


def _run_catalog(shape, module, options, kind, arg, d) -> list:
    cat = _catalog(kind, shape, arg)
    workers = worker_count()
    if workers <= 1 or len(cat) < 2 * workers:
        return _check_words(realization(shape, module, **options), cat, d)
    chunks = [set() for _ in range(workers)]
    for i, rel in enumerate(cat):
        chunks[i % workers].add(rel.name)
    jobs = [(shape, module, options, kind, arg, names, d) for names in chunks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = {c.name: c for part in pool.map(_worker, jobs) for c in part}
    return [results[rel.name] for rel in cat]


def _options(mode, mutation, rho_root="closed") -> dict:
    if mutation is not None and mutation not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutation!r}")
    return {"q0": _mode_q0(mode), "mutation": mutation, "rho_root": rho_root}


# -- relation catalogs -------------------------------------------------------------------

def verify_presentation(shape: Shape, module: PModuleSpec | None = None, d: int = 4, *,
                        mode="exact", mutation: str | None = None) -> VerificationReport:
    """Every defining relation of U_q(sl_{n+m}) annihilates C[u-bar*] (x) V up to degree d."""
    module = module if module is not None else trivial_module(shape)
    checks = _run_catalog(shape, module, _options(mode, mutation), "presentation", None, d)
    return VerificationReport(checks, {"check": "presentation", "shape": [shape.n, shape.m], "degree": d,
                                       "module": module.name or "custom", "mode": str(mode),
                                       "mutation": mutation})


def verify_jimbo(shape: Shape, d: int = 4, max_power: int = 3, module: PModuleSpec | None = None, *,
                 mode="exact") -> VerificationReport:
    """The ten root-vector commutation families, powers up to max_power."""
    module = module if module is not None else trivial_module(shape)
    checks = _run_catalog(shape, module, _options(mode, None), "jimbo", max_power, d)
    return VerificationReport(checks, {"check": "jimbo", "shape": [shape.n, shape.m], "degree": d,
                                       "max_power": max_power, "module": module.name or "custom",
                                       "mode": str(mode)})


# -- closed forms --------------------------------------------------------------------------

def verify_closed_forms(shape: Shape, module: PModuleSpec | None = None, d: int = 4) -> VerificationReport:
    """Closed-form rho(E_{j,i}) and coproduct-assembled pi(E_{n,k}) against the
    recursion (operator equality), and pi(E_{n+j,k}) against left
    multiplication in the quantum coordinate algebra."""
    module = module if module is not None else trivial_module(shape)
    n, m = shape.n, shape.m
    checks = []
    rec = Realization(shape, module, rho_root="recursion")
    for j in range(2, n + 1):
        for i in range(1, j):
            ok = rho_E_closed_weyl(shape, j, i) == rec.rho(RootVector(j, i))
            checks.append(CheckResult("closed form rho(E_{j,i})", f"(j,i)=({j},{i})", ok,
                                      None if ok else {"note": "operators differ in normal form"}))
    R = realization(shape, module)
    for k in range(1, n):
        ok = R.pi_E_nk(k) == R.operator(RootVector(n, k))
        checks.append(CheckResult("coproduct pi(E_{n,k})", f"k={k}", ok,
                                  None if ok else {"note": "operators differ in normal form"}))
    for j in range(1, m + 1):
        for k in range(1, n + 1):
            witness = None
            x = {unit_exponent(shape, j, k): ONE}
            for deg in range(d + 1):
                for r in monomials_of_degree(shape, deg):
                    expect_poly = qmul(shape, x, {r: ONE})
                    for b in range(module.dim):
                        got = R.apply_letter(RootVector(n + j, k), {(r, b): ONE})
                        expect = {(rr, b): c for rr, c in expect_poly.items()}
                        if got != expect:
                            witness = _witness(shape, r, b, _diff(got, expect))
                            break
                    if witness:
                        break
                if witness:
                    break
            checks.append(CheckResult("left multiplication pi(E_{n+j,k})", f"(j,k)=({j},{k}), |r|<={d}",
                                      witness is None, witness))
    return VerificationReport(checks, {"check": "closed-forms", "shape": [n, m], "degree": d,
                                       "module": module.name or "custom"})


def _diff(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) - v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def verify_root_splits(shape: Shape, module: PModuleSpec | None = None, d: int = 2) -> VerificationReport:
    """Root vectors built with every admissible top-level split act identically."""
    module = module if module is not None else trivial_module(shape)
    R = realization(shape, module)
    N = shape.rank + 1
    checks = []
    basis = R.basis(d)
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            if abs(i - j) < 2:
                continue
            for split in range(min(i, j) + 1, max(i, j)):
                word = root_vector_word(i, j, N, split)
                witness = None
                for r, b in basis:
                    a = R.apply_word(word, {(r, b): ONE})
                    c = R.apply_letter(RootVector(i, j), {(r, b): ONE})
                    if a != c:
                        witness = _witness(shape, r, b, _diff(a, c))
                        break
                checks.append(CheckResult("split independence", f"E_{{{i},{j}}} split at {split}",
                                          witness is None, witness))
    return VerificationReport(checks, {"check": "root-splits", "shape": [shape.n, shape.m], "degree": d})


def _delta(a, b) -> int:
    return 1 if a == b else 0


def verify_adjoint_degree_one(shape: Shape) -> VerificationReport:
    """Degree-one action of the Levi generators on each x_{j,k} (trivial V)."""
    n, m = shape.n, shape.m
    R = realization(shape)
    checks = []
    for j in range(1, m + 1):
        for k in range(1, n + 1):
            r = unit_exponent(shape, j, k)

            def x(jj, kk, c):
                return {(unit_exponent(shape, jj, kk), 0): c}

            expected = {}
            for i in range(1, n):
                expected[Gen("E", i)] = x(j, k + 1, -qpow(-1)) if i == k else {}
                expected[Gen("F", i)] = x(j, k - 1, -Q) if i + 1 == k else {}
                expected[Gen("K", i)] = x(j, k, qpow(-_delta(i, k) + _delta(i + 1, k)))
            expected[Gen("K", n)] = x(j, k, qpow(-_delta(1, j) - _delta(n, k)))
            for i in range(1, m):
                expected[Gen("E", n + i)] = x(j - 1, k, ONE) if i + 1 == j else {}
                expected[Gen("F", n + i)] = x(j + 1, k, ONE) if i == j else {}
                expected[Gen("K", n + i)] = x(j, k, qpow(_delta(i, j) - _delta(i + 1, j)))
            for g, exp in expected.items():
                got = R.apply_letter(g, {(r, 0): ONE})
                ok = got == exp
                checks.append(CheckResult(f"degree-one action of {g}", f"x_{{{j},{k}}}", ok,
                                          None if ok else _witness(shape, r, 0, _diff(got, exp))))
    return VerificationReport(checks, {"check": "adjoint-degree-one", "shape": [n, m]})


# -- classical limit -------------------------------------------------------------------------

def _quantum_images(R: Realization, g: tuple, r, b) -> dict:
    kind, i = g
    if kind == "h":
        a = R.apply_letter(Gen("K", i), {(r, b): ONE})
        c = R.apply_letter(Gen("Kinv", i), {(r, b): ONE})
        inv = ONE / (Q - qpow(-1))
        return {key: val * inv for key, val in _diff(a, c).items()}
    return R.apply_letter(Gen({"e": "E", "f": "F", "k": "K"}[kind], i), {(r, b): ONE})


def _at_one(state: dict) -> dict:
    out = {}
    for key, c in state.items():
        v = c.evaluate_at(1)
        if v:
            out[key] = v
    return out


def classical_limit_compare(shape: Shape, module: PModuleSpec | None = None, d: int = 3) -> VerificationReport:
    """q = 1 specialization of every generator's matrix against the classical oracle."""
    module = module if module is not None else trivial_module(shape)
    st = classical_state(module)
    R = realization(shape, module)
    N = shape.rank + 1
    checks = []
    gens = [(kind, i) for i in range(1, N) for kind in ("e", "f", "h")]
    for g in gens:
        cm = classical_matrix(st, g, d)
        witness = None
        for jcol, (r, b) in enumerate(cm.cols):
            classical = {cm.rows[i]: cm.entries[i][jcol] for i in range(len(cm.rows)) if cm.entries[i][jcol]}
            quantum = _at_one(_quantum_images(R, g, r, b))
            if quantum != classical:
                witness = _witness(shape, r, b, _diff(quantum, classical))
                break
        checks.append(CheckResult(f"classical limit {g[0]}{g[1]}", f"|r|<={d}", witness is None, witness))
    for i in range(1, N):
        witness = None
        for (r, b) in R.basis(d):
            got = _at_one(R.apply_letter(Gen("K", i), {(r, b): ONE}))
            if got != {(r, b): Fraction(1)}:
                witness = _witness(shape, r, b, got)
                break
        checks.append(CheckResult(f"classical limit k{i} = 1", f"|r|<={d}", witness is None, witness))
    return VerificationReport(checks, {"check": "classical-limit", "shape": [shape.n, shape.m], "degree": d,
                                       "module": module.name or "custom"})


# -- characters --------------------------------------------------------------------------------

@dataclass
class CharacterTable:
    """Per degree: multiplicities of q-exponent weight vectors, and of sign patterns."""

    weights: dict
    signs: dict

    def totals(self) -> dict:
        return {deg: sum(c.values()) for deg, c in self.weights.items()}

    def to_json(self) -> dict:
        return {
            "weights": {str(deg): [{"weight": list(w), "multiplicity": k} for w, k in sorted(c.items())]
                        for deg, c in sorted(self.weights.items())},
            "signs": {str(deg): [{"signs": list(s), "multiplicity": k} for s, k in sorted(c.items())]
                      for deg, c in sorted(self.signs.items())},
        }


def _eigen_exponent(c: RationalQ) -> tuple[int, int]:
    if c.is_laurent:
        terms = c.laurent_terms()
        if len(terms) == 1:
            (a, coeff), = terms.items()
            if coeff in (1, -1):
                return coeff, a
    raise ValueError(f"k-eigenvalue {format_q(c)} is not of the form +-q^a")


def character(shape: Shape, module: PModuleSpec | None = None, d: int = 3) -> CharacterTable:
    """Simultaneous k_i eigenvalues on every x^r (x) v_b, |r| <= d."""
    module = module if module is not None else trivial_module(shape)
    for i in range(1, shape.rank + 1):
        if not module.gens[Gen("K", i)].is_diagonal():
            raise ValueError(f"k{i} is not diagonal")
    R = realization(shape, module)
    weights, signs = {}, {}
    for deg in range(d + 1):
        wc, sc = Counter(), Counter()
        for r in monomials_of_degree(shape, deg):
            for b in range(module.dim):
                exps, sg = [], []
                for i in range(1, shape.rank + 1):
                    img = R.apply_letter(Gen("K", i), {(r, b): ONE})
                    if list(img) != [(r, b)]:
                        raise ValueError(f"x^r ⊗ v_{b} is not a k{i}-eigenvector")
                    s, a = _eigen_exponent(img[(r, b)])
                    exps.append(a)
                    sg.append(s)
                wc[tuple(exps)] += 1
                sc[tuple(sg)] += 1
        weights[deg] = wc
        signs[deg] = sc
    return CharacterTable(weights, signs)


def classical_character_table(module: PModuleSpec, d: int) -> dict:
    return classical_character(classical_state(module), d)


__all__.append("classical_character_table")
