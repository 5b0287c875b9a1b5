from __future__ import annotations

from hypothesis import strategies as st

from qverma.qcoeff import laurent, qpow

small_ints = st.integers(min_value=-4, max_value=4)


@st.composite
def laurents(draw, max_terms: int = 3):
    terms = draw(st.dictionaries(st.integers(-3, 3), st.integers(-3, 3), max_size=max_terms))
    return laurent(terms)


@st.composite
def rationals(draw):
    num = draw(laurents())
    den = draw(laurents())
    if not den:
        den = qpow(draw(st.integers(-2, 2)))
    return num / den


def weyl_relations(shape):
    """(name, lhs, rhs) for the defining relations of one variable, every variable of shape."""
    from qverma.qweyl import dop, gop, identity, xop

    q, qi = qpow(1), qpow(-1)
    out = []
    for j, k in shape.variables():
        x, d, g, gi = xop(shape, j, k), dop(shape, j, k), gop(shape, j, k), gop(shape, j, k, -1)
        tag = f"({j},{k})"
        out += [
            ("gamma x = q x gamma " + tag, g * x, (x * g).scale(q)),
            ("gamma del = q^-1 del gamma " + tag, g * d, (d * g).scale(qi)),
            ("del x - q x del = gamma^-1 " + tag, d * x - (x * d).scale(q), gi),
            ("del x - q^-1 x del = gamma " + tag, d * x - (x * d).scale(qi), g),
            ("gamma gamma^-1 = 1 " + tag, g * gi, identity(shape)),
            ("gamma^-1 gamma = 1 " + tag, gi * g, identity(shape)),
        ]
    return out
