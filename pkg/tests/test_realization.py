from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qverma.pmodule import QMatrix, builtin_module, trivial_module, vector_module
from qverma.qcoeff import ONE, Q, ZERO, q_number, qpow
from qverma.qweyl import Shape, ShapeMismatchError, dop, gop, identity, monomials_upto, op_product, xop
from qverma.realization import (
    MUTATIONS,
    CoproductRule,
    Realization,
    RealizedOperator,
    act,
    compose,
    format_state,
    pi_generator,
    realization,
    realized_from_json,
    realized_to_json,
    rho_E_closed,
    rho_E_closed_weyl,
    rho_generator,
    rho_weyl,
)
from qverma.uqalg import CartanK, Gen, RootVector, letter

QI = qpow(-1)
S21 = Shape(2, 1)


def e(shape, j, k):
    r = [0] * shape.nvars
    r[shape.index(j, k)] = 1
    return tuple(r)


# -- explicit action on monomials, used as an independent oracle --------------------------

def _shift(shape, r, plus=None, minus=None):
    out = list(r)
    if plus:
        out[shape.index(*plus)] += 1
    if minus:
        out[shape.index(*minus)] -= 1
    return tuple(out)


def tau(shape, g: Gen, r) -> dict:
    """Image of x^r under the adjoint action transported to C[u-bar*]."""
    n, m = shape.n, shape.m
    R = lambda j, k: r[shape.index(j, k)]  # noqa: E731
    i = g.index
    out: dict = {}

    def put(key, c):
        if c:
            out[key] = out.get(key, ZERO) + c

    if g.kind in ("K", "Kinv"):
        if i < n:
            a = sum(R(t, i + 1) - R(t, i) for t in range(1, m + 1))
        elif i == n:
            a = -sum(R(1, t) for t in range(1, n + 1)) - sum(R(s, n) for s in range(1, m + 1))
        else:
            a = sum(R(i - n, t) - R(i - n + 1, t) for t in range(1, n + 1))
        return {tuple(r): qpow(a if g.kind == "K" else -a)}
    if i < n and g.kind == "E":
        for k in range(1, m + 1):
            if R(k, i):
                a = sum(R(t, i) - R(t, i + 1) for t in range(k, m + 1)) - 2
                put(_shift(shape, r, (k, i + 1), (k, i)), -qpow(a) * q_number(R(k, i)))
    elif i < n and g.kind == "F":
        for k in range(1, m + 1):
            if R(k, i + 1):
                a = sum(R(t, i + 1) - R(t, i) for t in range(1, k + 1))
                put(_shift(shape, r, (k, i), (k, i + 1)), -qpow(a) * q_number(R(k, i + 1)))
    elif i > n and g.kind == "E":
        a_ = i - n
        for k in range(1, n + 1):
            if R(a_ + 1, k):
                # summation index t, not k, in the exponent
                a = sum(R(a_, t) - R(a_ + 1, t) for t in range(k + 1, n + 1))
                put(_shift(shape, r, (a_, k), (a_ + 1, k)), qpow(a) * q_number(R(a_ + 1, k)))
    elif i > n and g.kind == "F":
        a_ = i - n
        for k in range(1, n + 1):
            if R(a_, k):
                a = sum(R(a_ + 1, t) - R(a_, t) for t in range(1, k))
                put(_shift(shape, r, (a_ + 1, k), (a_, k)), qpow(a) * q_number(R(a_, k)))
    else:
        raise ValueError(g)
    return out


def levi_gens(shape):
    out = []
    for i in range(1, shape.rank + 1):
        kinds = ("K", "Kinv") if i == shape.n else ("E", "F", "K", "Kinv")
        out += [Gen(kind, i) for kind in kinds]
    return out


ORACLE_SHAPES = [Shape(1, 2), S21, Shape(2, 2), Shape(3, 2), Shape(2, 3), Shape(3, 3)]


@pytest.mark.parametrize("shape", ORACLE_SHAPES, ids=lambda s: f"{s.n}x{s.m}")
def test_rho_matches_explicit_formulas(shape):
    d = 4 if shape.nvars <= 6 else 3
    for g in levi_gens(shape):
        w = rho_weyl(shape, g)
        for r in monomials_upto(shape, d):
            assert w.apply_monomial(r) == tau(shape, g, r), (str(g), r)


def test_left_to_right_reading_disagrees():
    # reading rho(e_1) with the rightmost factor applied last misses the q^-2
    shape = S21
    w = op_product(shape, [xop(shape, 1, 2), dop(shape, 1, 1), gop(shape, 1, 1), gop(shape, 1, 2, -1)]).scale(-ONE)
    r = e(shape, 1, 1)
    assert w.apply_monomial(r) != tau(shape, Gen("E", 1), r)
    assert rho_weyl(shape, Gen("E", 1)).apply_monomial(r) == tau(shape, Gen("E", 1), r)


# -- spot values ---------------------------------------------------------------------------

def test_rho_e1_shape_21():
    expect = op_product(S21, [gop(S21, 1, 1), gop(S21, 1, 2, -1), xop(S21, 1, 2), dop(S21, 1, 1)]).scale(-ONE)
    assert rho_weyl(S21, Gen("E", 1)) == expect


def test_rho_kn_shape_21():
    assert rho_weyl(S21, Gen("K", 2)) == gop(S21, 1, 1, -1) * gop(S21, 1, 2, -2)


def test_k_on_constant():
    for shape in (S21, Shape(3, 2)):
        zero = shape.zero_exponent()
        for i in range(1, shape.rank + 1):
            assert act(pi_generator(shape, None, Gen("K", i)), zero, [1]) == {(zero, 0): ONE}


def test_act_examples():
    assert act(pi_generator(S21, None, Gen("E", 1)), e(S21, 1, 1), [1]) == {(e(S21, 1, 2), 0): -QI}
    assert act(pi_generator(S21, None, Gen("F", 1)), e(S21, 1, 2), [1]) == {(e(S21, 1, 1), 0): -Q}
    assert act(pi_generator(S21, None, Gen("K", 2)), e(S21, 1, 1), [1]) == {(e(S21, 1, 1), 0): QI}
    out = act(pi_generator(S21, None, Gen("F", 2)), (0, 0), [1])
    assert out == {(e(S21, 1, 2), 0): ONE}
    assert format_state(S21, out) == "x_{1,2} ⊗ v_0"


def test_pi_fn_formula():
    expect = RealizedOperator.tensor(xop(S21, 1, 2) * gop(S21, 1, 1), QMatrix.identity(1))
    assert pi_generator(S21, None, Gen("F", 2)) == expect


def test_compose_fn_twice():
    f2 = pi_generator(S21, None, Gen("F", 2))
    two = compose(f2, f2)
    out = act(two, (0, 0), [1])
    assert out == {((0, 2), 0): ONE}
    assert out == f2.apply(f2.apply({((0, 0), 0): ONE}))


def test_compose_identity():
    a = pi_generator(Shape(2, 2), None, Gen("E", 2))
    one = RealizedOperator.one(Shape(2, 2), 1)
    assert compose(one, a) == a
    assert compose(a, one) == a


def test_closed_form_single_step_is_rho_f():
    for m in (1, 2, 3):
        shape = Shape(2, m)
        assert rho_E_closed_weyl(shape, 2, 1) == rho_weyl(shape, Gen("F", 1))


def test_closed_form_matches_recursion_31():
    shape = Shape(3, 2)
    rec = Realization(shape, rho_root="recursion")
    assert rho_E_closed(shape, 3, 1) == RealizedOperator.tensor(rec.rho(RootVector(3, 1)), QMatrix.identity(1))


def test_closed_form_for_one_row_has_one_term():
    for n in (2, 3, 4):
        assert len(rho_E_closed_weyl(Shape(n, 1), n, 1).terms) == 1
    with pytest.raises(ValueError):
        rho_E_closed_weyl(Shape(3, 1), 1, 3)


# -- the displayed Levi formulas against the coproduct route --------------------------------

MODULES = [(Shape(3, 2), "vector:first"), (Shape(2, 3), "vector:second"), (Shape(3, 2), "char:-1,1,-1:q^3"),
           (Shape(2, 2), "trivial")]


@pytest.mark.parametrize("shape,name", MODULES)
def test_levi_generators_follow_displayed_formulas(shape, name):
    spec = builtin_module(shape, name)
    R = Realization(shape, spec)
    n = shape.n
    idm = spec.identity()
    T = RealizedOperator.tensor
    for i in range(1, shape.rank + 1):
        s = lambda kind: spec.matrix(Gen(kind, i))  # noqa: E731
        rho = lambda kind: rho_weyl(shape, Gen(kind, i))  # noqa: E731
        if i < n:
            assert R.generator(Gen("F", i)) == T(rho("F"), idm) + T(rho("K"), s("F"))
            assert R.generator(Gen("E", i)) == T(rho("E"), s("Kinv")) + T(identity(shape), s("E"))
        elif i > n:
            assert R.generator(Gen("F", i)) == T(rho("F"), idm) + T(rho("Kinv"), s("F"))
            assert R.generator(Gen("E", i)) == T(rho("E"), s("K")) + T(identity(shape), s("E"))
        assert R.generator(Gen("K", i)) == T(rho("K"), s("K"))


@pytest.mark.parametrize("shape", [S21, Shape(3, 2), Shape(2, 3)], ids=lambda s: f"{s.n}x{s.m}")
def test_trivial_module_is_rho(shape):
    for g in levi_gens(shape):
        assert pi_generator(shape, None, g) == rho_generator(shape, g)


@pytest.mark.parametrize("shape,name", [(Shape(3, 1), "vector:first"), (Shape(3, 2), "char:1,-1,1:q^-2"),
                                        (Shape(4, 2), "vector:first")])
def test_coproduct_assembly_matches_recursion(shape, name):
    R = Realization(shape, builtin_module(shape, name))
    for k in range(1, shape.n):
        assert R.pi_E_nk(k) == R.operator(RootVector(shape.n, k))


def test_coproduct_rule_is_counital():
    rule = CoproductRule(2)
    for g in (Gen("E", 1), Gen("F", 1), Gen("E", 3), Gen("F", 3), Gen("K", 2)):
        pairs = rule.coproduct(g)
        left = [L for L, Rt in pairs if (Rt is None or rule.counit(Rt))]
        assert g in left
    with pytest.raises(ValueError):
        rule.coproduct(Gen("E", 2))


def test_antipode_via_module():
    # m (S (x) id) Delta(g) = counit(g) in a module where everything is faithful enough
    shape = Shape(3, 2)
    spec = vector_module(shape, "first")
    rule = CoproductRule(shape.n)
    for g in (Gen("E", 1), Gen("F", 2), Gen("K", 1)):
        total = QMatrix.zero(spec.dim)
        for L, Rt in rule.coproduct(g):
            left = spec.identity() if L is None else _word_matrix(spec, rule.antipode(L))
            right = spec.identity() if Rt is None else spec.matrix(Rt)
            total = total + left * right
        assert total == spec.identity() * rule.counit(g)


def _word_matrix(spec, w):
    from qverma.uqalg import evaluate_word

    return evaluate_word(w, spec.assign, spec.identity())


# -- operator algebra properties -----------------------------------------------------------

def test_shape_and_dimension_checks():
    a = pi_generator(S21, None, Gen("E", 1))
    b = pi_generator(S21, vector_module(S21, "first"), Gen("E", 1))
    with pytest.raises(ShapeMismatchError):
        compose(a, b)
    with pytest.raises(ShapeMismatchError):
        act(a, (1, 0, 0), [1])
    with pytest.raises(ShapeMismatchError):
        act(a, (1, 0), [1, 0])
    with pytest.raises(ShapeMismatchError):
        Realization(Shape(2, 2), trivial_module(S21))


def test_mutations_are_known():
    with pytest.raises(ValueError):
        Realization(S21, mutation="nope")
    assert {"en-drop-cartan", "en-drop-xdd", "en-drop-levi", "rho-e-sign", "fn-drop-gamma"} <= set(MUTATIONS)


SHAPE_MODULES = [(Shape(2, 2), "vector:first"), (Shape(2, 2), "vector:second"), (Shape(3, 1), "char:1,-1:q^2")]


@st.composite
def operator_and_state(draw):
    shape, name = draw(st.sampled_from(SHAPE_MODULES))
    spec = builtin_module(shape, name)
    gens = [Gen(k, i) for i in range(1, shape.rank + 1) for k in ("E", "F", "K")]
    a = pi_generator(shape, spec, draw(st.sampled_from(gens)))
    b = pi_generator(shape, spec, draw(st.sampled_from(gens)))
    r = draw(st.sampled_from(monomials_upto(shape, 3)))
    v = draw(st.lists(st.integers(-2, 2), min_size=spec.dim, max_size=spec.dim))
    return a, b, r, v


@settings(max_examples=40, deadline=None)
@given(operator_and_state())
def test_compose_respects_act(data):
    a, b, r, v = data
    state = act(b, r, v)
    assert act(compose(a, b), r, v) == a.apply(state)


@settings(max_examples=40, deadline=None)
@given(operator_and_state())
def test_operator_json_round_trip(data):
    a, b, _, _ = data
    for op in (a, compose(a, b) + b):
        if op.is_zero():
            continue
        text = json.dumps(realized_to_json(op), sort_keys=True)
        back = realized_from_json(op.shape, json.loads(text))
        assert back == op
        assert json.dumps(realized_to_json(back), sort_keys=True) == text


def test_realization_memo_and_letters():
    R = realization(S21)
    assert realization(S21) is R
    state = {((1, 0), 0): ONE}
    assert R.apply_letter(CartanK(1, 3), state) == R.apply_letters([Gen("K", 2), Gen("K", 1)], state)
    assert R.apply_word(letter(Gen("E", 1)) * qpow(2), state) == {((0, 1), 0): -Q}


def test_fast_mode_agrees_with_exact():
    from fractions import Fraction

    shape = Shape(2, 2)
    exact = Realization(shape)
    fast = Realization(shape, q0=Fraction(2))
    for L in (Gen("E", 2), RootVector(4, 1), RootVector(1, 3)):
        for r in monomials_upto(shape, 2):
            got = fast.column(L, r, 0)
            want = {k: c.evaluate_at(2) for k, c in exact.column(L, r, 0).items()}
            assert got == {k: c for k, c in want.items() if c}
