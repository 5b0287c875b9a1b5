"""Acceptance gate: one PASS/FAIL line per criterion.

Run ``pytest tests/test_acceptance.py -s`` to see the lines, or execute this
file directly.  All comparisons are exact.
"""

from __future__ import annotations

import json
import time
from math import comb
from pathlib import Path

from support import weyl_relations

from qverma.cli import run
from qverma.pmodule import builtin_module, module_from_json, module_to_json
from qverma.qweyl import Shape
from qverma.realization import Realization, realized_from_json, realized_to_json, rho_E_closed_weyl
from qverma.uqalg import Gen, RootVector
from qverma.verify import (
    character,
    classical_character_table,
    classical_limit_compare,
    verify_adjoint_degree_one,
    verify_closed_forms,
    verify_jimbo,
    verify_presentation,
)

MAIN_SHAPES = [Shape(2, 1), Shape(1, 2), Shape(2, 2), Shape(3, 2)]
MUTANTS = ["en-drop-cartan", "en-drop-xdd", "en-drop-levi", "rho-e-sign", "fn-drop-gamma"]


def report(number: int, ok: bool, detail: str) -> None:
    print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def main_modules(shape: Shape) -> list[str]:
    levi = [i for i in range(1, shape.rank + 1) if i != shape.n]
    names = ["trivial"]
    for a in range(-3, 4):
        names.append(f"char::q^{a}")
        if levi:
            names.append("char:" + ",".join("-1" for _ in levi) + f":q^{a}")
    if shape.n >= 2:
        names.append("vector:first")
    if shape.m >= 2:
        names.append("vector:second")
    return names


def test_criterion_01_weyl_relations():
    start = time.perf_counter()
    bad, total = [], 0
    for n in (1, 2, 3):
        for m in (1, 2, 3):
            for name, lhs, rhs in weyl_relations(Shape(n, m)):
                total += 1
                if lhs != rhs:
                    bad.append((n, m, name))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 1.0
    report(1, ok, f"{total} relation instances, {len(bad)} failures, {elapsed:.2f}s")
    assert ok, bad


def test_criterion_02_presentation():
    start = time.perf_counter()
    bad, runs = [], 0
    for shape in MAIN_SHAPES:
        for name in main_modules(shape):
            runs += 1
            rep = verify_presentation(shape, builtin_module(shape, name), 4)
            if not rep.passed:
                bad.append((shape, name, [c.name for c in rep.failures]))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 600
    report(2, ok, f"{runs} (shape, module) runs at |r|<=4, {len(bad)} failing, {elapsed:.1f}s")
    assert ok, bad


def test_criterion_03_jimbo():
    bad, runs = [], 0
    for n in range(1, 5):
        for m in range(1, 6 - n):
            shape = Shape(n, m)
            runs += 1
            rep = verify_jimbo(shape, 4, 3)
            if not rep.passed:
                bad.append((shape, [c.name for c in rep.failures]))
    report(3, not bad, f"ten families, powers <= 3, {runs} shapes with n+m <= 5")
    assert not bad, bad


def test_criterion_04_closed_form():
    bad, count = [], 0
    for n in range(2, 5):
        for m in range(1, 4):
            shape = Shape(n, m)
            rec = Realization(shape, rho_root="recursion")
            for j in range(2, n + 1):
                for i in range(1, j):
                    count += 1
                    if rho_E_closed_weyl(shape, j, i) != rec.rho(RootVector(j, i)):
                        bad.append((shape, j, i))
    report(4, not bad, f"{count} closed-form root vectors equal the recursion")
    assert not bad, bad


def test_criterion_05_coproduct_assembly():
    bad, count = [], 0
    for shape in (Shape(3, 1), Shape(3, 2), Shape(4, 2)):
        for name in ("trivial", "vector:first", "char::q^-2"):
            R = Realization(shape, builtin_module(shape, name))
            for k in range(1, shape.n):
                count += 1
                if R.pi_E_nk(k) != R.operator(RootVector(shape.n, k)):
                    bad.append((shape, name, k))
    report(5, not bad, f"{count} assembled pi(E_(n,k)) equal the recursion under pi")
    assert not bad, bad


def test_criterion_06_left_multiplication():
    bad, count = [], 0
    for n in (1, 2, 3):
        for m in (1, 2):
            shape = Shape(n, m)
            names = ["trivial"] + (["vector:first"] if n >= 2 else [])
            for name in names:
                rep = verify_closed_forms(shape, builtin_module(shape, name), 4)
                checks = [c for c in rep.checks if c.name.startswith("left multiplication")]
                count += len(checks)
                bad += [(shape, name, c.instance) for c in checks if not c.passed]
    report(6, not bad and count > 0, f"{count} (shape, module, x_(j,k)) cases agree with qmul at |r|<=4")
    assert not bad and count > 0, bad


def test_criterion_07_adjoint_degree_one():
    bad, count = [], 0
    for n in (1, 2, 3):
        for m in (1, 2, 3):
            rep = verify_adjoint_degree_one(Shape(n, m))
            count += len(rep.checks)
            bad += [(n, m, c.name, c.instance) for c in rep.failures]
    report(7, not bad, f"{count} degree-one formula instances")
    assert not bad, bad


def test_criterion_08_classical_limit():
    bad, count = [], 0
    for shape in (Shape(2, 1), Shape(2, 2), Shape(3, 2)):
        for name in ("trivial", "char::q^2", "vector:first"):
            rep = classical_limit_compare(shape, builtin_module(shape, name), 3)
            count += len(rep.checks)
            bad += [(shape, name, c.name) for c in rep.failures]
    report(8, not bad, f"{count} generator matrices at q=1 match the classical oracle")
    assert not bad, bad


def test_criterion_09_characters():
    bad = []
    for shape in (Shape(2, 1), Shape(2, 2), Shape(3, 2)):
        for name in ("trivial", "char::q^2", "vector:first"):
            spec = builtin_module(shape, name)
            table = character(shape, spec, 5)
            if table.weights != classical_character_table(spec, 5):
                bad.append((shape, name, "weights"))
            for d, total in table.totals().items():
                if total != comb(shape.nvars + d - 1, d) * spec.dim:
                    bad.append((shape, name, d))
    report(9, not bad, "weight tables equal the classical ones and totals match for d <= 5")
    assert not bad, bad


def test_criterion_10_mutations():
    missed = []
    for mutant in MUTANTS:
        caught = False
        for shape in MAIN_SHAPES:
            for name in main_modules(shape):
                rep = verify_presentation(shape, builtin_module(shape, name), 2, mutation=mutant)
                if not rep.passed:
                    caught = True
                    break
            if caught:
                break
        if not caught:
            missed.append(mutant)
    report(10, not missed, f"{len(MUTANTS) - len(missed)}/{len(MUTANTS)} seeded mutations caught at d <= 2")
    assert not missed, missed


def test_criterion_11_determinism_and_round_trip(tmp_path: Path):
    problems = []
    commands = [
        ["verify", "--n", "2", "--m", "2", "--module", "vector:second", "-d", "3"],
        ["realize", "--n", "3", "--m", "2", "--module", "vector:first", "--gen", "e3"],
        ["character", "--n", "2", "--m", "2", "--module", "char:-1,1:q^2", "-d", "3"],
        ["export", "--n", "3", "--m", "2", "--module", "vector:first"],
    ]
    for i, argv in enumerate(commands):
        outs = []
        for rep in range(2):
            path = tmp_path / f"{i}-{rep}.json"
            if run(argv + ["-o", str(path)]) != 0:
                problems.append(("exit", argv))
            outs.append(path.read_bytes())
        if outs[0] != outs[1]:
            problems.append(("bytes", argv))
    for shape, name in ((Shape(2, 2), "vector:second"), (Shape(3, 2), "vector:first"), (Shape(2, 1), "trivial")):
        spec = builtin_module(shape, name)
        if module_from_json(json.loads(json.dumps(module_to_json(spec)))).gens != spec.gens:
            problems.append(("module", shape, name))
        R = Realization(shape, spec)
        for i in range(1, shape.rank + 1):
            for kind in ("E", "F", "K"):
                op = R.generator(Gen(kind, i))
                back = realized_from_json(shape, json.loads(json.dumps(realized_to_json(op))))
                if back != op:
                    problems.append(("operator", shape, name, kind, i))
    report(11, not problems, f"{len(commands)} CLI commands byte-identical, module and operator JSON lossless")
    assert not problems, problems


if __name__ == "__main__":
    import sys
    import tempfile

    failures = 0
    for fn_name, fn in sorted(globals().items()):
        if fn_name.startswith("test_criterion_"):
            try:
                if "tmp_path" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
                    with tempfile.TemporaryDirectory() as d:
                        fn(Path(d))
                else:
                    fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
