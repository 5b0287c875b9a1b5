"""Command-line front end.

The worker count for verification comes from the QVERMA_THREADS environment
variable (default 1).

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O or parse
error.  Artifacts are JSON with deterministic key order and formatting.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .oracle import NotClassicalError
from .pmodule import ModuleError, PModuleSpec, builtin_module, load_module, module_to_json, validate
from .qcoeff import QParseError
from .qweyl import Shape, ShapeMismatchError, from_matrix
from .realization import act, format_state, pi_generator, realized_to_json
from .uqalg import parse_generator
from .verify import (
    VerificationReport,
    character,
    classical_limit_compare,
    verify_closed_forms,
    verify_jimbo,
    verify_presentation,
    verify_root_splits,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

_BUILTIN_PREFIXES = ("trivial", "char:", "vector:")
_CHECKS = ("presentation", "jimbo", "closed-forms", "splits", "classical")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from None


def _shape(args) -> Shape:
    if args.n is None or args.m is None:
        raise UsageError("--n and --m are required")
    if args.n < 1 or args.m < 1:
        raise UsageError("--n and --m must be >= 1")
    return Shape(args.n, args.m)


def _module(args) -> tuple[Shape, PModuleSpec]:
    name = args.module
    if name.startswith(_BUILTIN_PREFIXES):
        shape = _shape(args)
        try:
            return shape, builtin_module(shape, name)
        except QParseError as exc:
            raise InputError(str(exc)) from None
        except ModuleError as exc:
            raise UsageError(str(exc)) from None
    try:
        spec = load_module(name)
    except OSError as exc:
        raise InputError(f"cannot read module file {name}: {exc}") from None
    except (ValueError, QParseError) as exc:
        raise InputError(f"bad module file {name}: {exc}") from None
    if (args.n, args.m) != (None, None) and (args.n, args.m) != (spec.shape.n, spec.shape.m):
        raise UsageError(f"module file has shape ({spec.shape.n},{spec.shape.m}), not ({args.n},{args.m})")
    return spec.shape, spec


def _generator(args, shape: Shape):
    try:
        g = parse_generator(args.gen)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if g.index > shape.rank:
        raise UsageError(f"{args.gen} outside sl_{shape.rank + 1}")
    return g


def _mode(args):
    if args.rational_q is None:
        return "exact"
    try:
        q0 = Fraction(args.rational_q)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad rational q {args.rational_q!r}") from None
    if q0 in (0, 1, -1):
        raise UsageError("rational q must avoid 0, 1 and -1")
    return q0


def _require_valid(spec: PModuleSpec) -> None:
    rep = validate(spec)
    if not rep.passed:
        raise InputError("module is not a valid U_q(p)-module: fails " + ", ".join(rep.failures))


# -- subcommands -----------------------------------------------------------------------------

def cmd_verify(args) -> int:
    shape, spec = _module(args)
    _require_valid(spec)
    if args.degree < 0:
        raise UsageError("--degree must be >= 0")
    checks = args.checks.split(",") if args.checks else ["presentation", "jimbo", "closed-forms"]
    for c in checks:
        if c not in _CHECKS:
            raise UsageError(f"unknown check {c!r}; choose from {', '.join(_CHECKS)}")
    mode = _mode(args)
    report = VerificationReport(meta={"shape": [shape.n, shape.m], "degree": args.degree,
                                      "module": args.module, "mode": str(mode), "checks": checks})
    if "presentation" in checks:
        report.extend(verify_presentation(shape, spec, args.degree, mode=mode, mutation=args.mutation))
    if "jimbo" in checks:
        report.extend(verify_jimbo(shape, args.degree, args.max_power, spec, mode=mode))
    if "closed-forms" in checks:
        report.extend(verify_closed_forms(shape, spec, args.degree))
    if "splits" in checks:
        report.extend(verify_root_splits(shape, spec, args.degree))
    if "classical" in checks:
        try:
            report.extend(classical_limit_compare(shape, spec, args.degree))
        except NotClassicalError as exc:
            raise UsageError(str(exc)) from None
    if args.mutation:
        report.meta["mutation"] = args.mutation
    _emit(_dump(report.to_json()), args.output)
    s = report.summary()
    print(f"{s['passed']}/{s['total']} checks passed", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def _operator_json(shape, spec, g) -> dict:
    op = pi_generator(shape, spec, g)
    return {"generator": str(g), "shape": [shape.n, shape.m], "dim": spec.dim, "module": spec.name or "custom",
            "operator": realized_to_json(op)}


def cmd_realize(args) -> int:
    shape, spec = _module(args)
    _require_valid(spec)
    g = _generator(args, shape)
    data = _operator_json(shape, spec, g)
    if args.text:
        data["text"] = str(pi_generator(shape, spec, g))
    _emit(_dump(data), args.output)
    return EXIT_OK


def _parse_monomial(text: str, shape: Shape) -> tuple:
    try:
        rows = json.loads(text)
        r = from_matrix(shape, rows)
    except (ValueError, TypeError, IndexError, ShapeMismatchError) as exc:
        raise InputError(f"bad monomial literal {text!r}: {exc}") from None
    if any(not isinstance(e, int) or e < 0 for e in r):
        raise InputError("monomial exponents must be nonnegative integers")
    return r


def cmd_act(args) -> int:
    shape, spec = _module(args)
    _require_valid(spec)
    g = _generator(args, shape)
    r = _parse_monomial(args.monomial, shape)
    if not (0 <= args.basis_vector < spec.dim):
        raise UsageError(f"--basis-vector must lie in 0..{spec.dim - 1}")
    v = [1 if b == args.basis_vector else 0 for b in range(spec.dim)]
    state = act(pi_generator(shape, spec, g), r, v)
    text = format_state(shape, state)
    if args.output:
        from .verify import _state_json

        _emit(_dump({"generator": str(g), "input": {"monomial": json.loads(args.monomial),
                                                    "basis": args.basis_vector},
                     "result": _state_json(shape, state), "text": text}), args.output)
    print(text)
    return EXIT_OK


def cmd_character(args) -> int:
    shape, spec = _module(args)
    _require_valid(spec)
    try:
        table = character(shape, spec, args.degree)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    data = {"shape": [shape.n, shape.m], "module": args.module, "degree": args.degree, **table.to_json(),
            "totals": {str(k): v for k, v in sorted(table.totals().items())}}
    _emit(_dump(data), args.output)
    return EXIT_OK


def cmd_classical(args) -> int:
    shape, spec = _module(args)
    _require_valid(spec)
    try:
        report = classical_limit_compare(shape, spec, args.degree)
    except NotClassicalError as exc:
        raise UsageError(str(exc)) from None
    _emit(_dump(report.to_json()), args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_export(args) -> int:
    shape, spec = _module(args)
    if args.gen:
        _require_valid(spec)
        data = _operator_json(shape, spec, _generator(args, shape))
    else:
        data = module_to_json(spec)
    _emit(_dump(data), args.output)
    return EXIT_OK


def cmd_validate(args) -> int:
    shape, spec = _module(args)
    rep = validate(spec)
    data = {"module": args.module, "shape": [shape.n, shape.m], "dim": spec.dim,
            "checks": [{"name": name, "pass": ok} for name, ok in rep.checks],
            "summary": {"total": len(rep.checks), "failed": len(rep.failures)}}
    _emit(_dump(data), args.output)
    return EXIT_OK if rep.passed else EXIT_FAIL


# -- parser --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qverma", description="Quantum generalized Verma module realizations.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, degree=None):
        sp.add_argument("--n", type=int, help="size of the first Levi block")
        sp.add_argument("--m", type=int, help="size of the second Levi block")
        sp.add_argument("--module", default="trivial",
                        help="trivial, char:<signs>:<kn>, vector:first, vector:second, or a module JSON file")
        sp.add_argument("--output", "-o", help="artifact path (default: stdout)")
        if degree is not None:
            sp.add_argument("--degree", "-d", type=int, default=degree)

    sp = sub.add_parser("verify", help="check relation catalogs and closed forms")
    common(sp, 4)
    sp.add_argument("--checks", help=f"comma-separated subset of {','.join(_CHECKS)}")
    sp.add_argument("--max-power", type=int, default=3)
    sp.add_argument("--rational-q", help="evaluate at this rational q instead of exactly")
    sp.add_argument("--mutation", help="corrupt one realization formula (testing aid)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("realize", help="operator of one generator as JSON")
    common(sp)
    sp.add_argument("--gen", required=True)
    sp.add_argument("--text", action="store_true", help="include a readable formula")
    sp.set_defaults(func=cmd_realize)

    sp = sub.add_parser("act", help="apply one generator to x^r ⊗ v_b")
    common(sp)
    sp.add_argument("--gen", required=True)
    sp.add_argument("--monomial", required=True, help="row-major exponent matrix, e.g. '[[1,0]]'")
    sp.add_argument("--basis-vector", type=int, default=0)
    sp.set_defaults(func=cmd_act)

    sp = sub.add_parser("character", help="weight multiplicities up to a degree")
    common(sp, 3)
    sp.set_defaults(func=cmd_character)

    sp = sub.add_parser("classical-limit", help="compare q = 1 with the classical oracle")
    common(sp, 3)
    sp.set_defaults(func=cmd_classical)

    sp = sub.add_parser("export", help="export a module, or one generator's operator")
    common(sp)
    sp.add_argument("--gen")
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("validate-module", help="check the U_q(p)-module axioms")
    common(sp)
    sp.set_defaults(func=cmd_validate)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.command == "verify" and args.mutation is not None:
        from .realization import MUTATIONS

        if args.mutation not in MUTATIONS:
            print(f"error: unknown mutation {args.mutation!r}", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, QParseError, ModuleError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
