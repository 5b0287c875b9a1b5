from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest

from qverma.oracle import (
    NotClassicalError,
    classical_action,
    classical_basis,
    classical_character,
    classical_matrix,
    classical_state,
    generator_element,
)
from qverma.pmodule import QMatrix, PModuleSpec, builtin_module, trivial_module, vector_module
from qverma.qcoeff import Q, qpow
from qverma.qweyl import Shape
from qverma.uqalg import Gen

S21 = Shape(2, 1)


def test_generator_elements():
    assert generator_element("e", 2) == {(2, 3): 1}
    assert generator_element("h", 1) == {(1, 1): 1, (2, 2): -1}
    with pytest.raises(ValueError):
        generator_element("x", 1)


def test_e1_lowers_x11_to_minus_x12():
    st = classical_state(trivial_module(S21))
    assert classical_action(st, ("e", 1), (1, 0), [1]) == {((0, 1), 0): Fraction(-1)}


def test_f2_multiplies_by_x12():
    st = classical_state(trivial_module(S21))
    assert classical_action(st, ("f", 2), (1, 0), [1]) == {((1, 1), 0): Fraction(1)}


def test_weights_of_degree_one():
    st = classical_state(trivial_module(S21))
    h = lambda i, r: classical_action(st, ("h", i), r, [1])  # noqa: E731
    assert h(1, (1, 0)) == {((1, 0), 0): -1} and h(2, (1, 0)) == {((1, 0), 0): -1}
    assert h(1, (0, 1)) == {((0, 1), 0): 1} and h(2, (0, 1)) == {((0, 1), 0): -2}


def test_e_n_kills_the_top():
    st = classical_state(vector_module(Shape(2, 2), "first"))
    for b in range(2):
        assert classical_action(st, ("e", 2), (0, 0, 0, 0), [int(t == b) for t in range(2)]) == {}


def test_weights_from_k_exponents():
    st = classical_state(builtin_module(Shape(2, 2), "char::q^2"))
    assert st.weights == ((0, 2, 0),)
    with pytest.raises(NotClassicalError):
        classical_state(builtin_module(Shape(2, 2), "char::2*q"))
    with pytest.raises(NotClassicalError):
        classical_state(builtin_module(Shape(3, 1), "char:-1,1:q"))


def test_bracket_consistency():
    # [e_i, f_i] = h_i on a handful of vectors
    shape = Shape(2, 2)
    st = classical_state(vector_module(shape, "second"))
    for i in (1, 2, 3):
        for r in classical_basis(st, 2):
            for b in range(2):
                v = [int(t == b) for t in range(2)]
                ef = _apply(st, ("e", i), classical_action(st, ("f", i), r, v))
                fe = _apply(st, ("f", i), classical_action(st, ("e", i), r, v))
                h = classical_action(st, ("h", i), r, v)
                diff = {k: ef.get(k, 0) - fe.get(k, 0) for k in set(ef) | set(fe)}
                assert {k: c for k, c in diff.items() if c} == h


def _apply(st, g, state):
    out = {}
    for (r, b), c in state.items():
        v = [int(t == b) for t in range(st.dim)]
        for key, val in classical_action(st, g, r, v).items():
            out[key] = out.get(key, 0) + c * val
    return {k: c for k, c in out.items() if c}


def test_matrix_shape():
    st = classical_state(trivial_module(S21))
    cm = classical_matrix(st, ("e", 1), 2)
    assert len(cm.cols) == 6 and len(cm.rows) == 10
    j = cm.cols.index(((1, 0), 0))
    assert [cm.rows[i] for i in range(len(cm.rows)) if cm.entries[i][j]] == [((0, 1), 0)]


@pytest.mark.parametrize("shape,name", [(S21, "trivial"), (Shape(2, 2), "vector:first"), (Shape(3, 2), "char::q^2")])
def test_character_totals(shape, name):
    st = classical_state(builtin_module(shape, name))
    table = classical_character(st, 4)
    for d, counter in table.items():
        assert sum(counter.values()) == comb(shape.nvars + d - 1, d) * st.dim


def test_non_diagonal_k_rejected():
    spec = vector_module(S21, "first")
    gens = dict(spec.gens)
    gens[Gen("K", 2)] = QMatrix([[Q, Q], [0, qpow(1)]])
    with pytest.raises(NotClassicalError):
        classical_state(PModuleSpec(S21, 2, gens))


def test_out_of_range():
    st = classical_state(trivial_module(S21))
    with pytest.raises(ValueError):
        classical_action(st, ("e", 3), (0, 0), [1])
