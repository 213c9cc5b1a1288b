import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from dtangent.base import Poly, X, Y, example_arrangement
from dtangent.errors import ArrangementMismatch, MalformedInput, NotInT
from dtangent.ore import (
    OreAlgebra,
    ad_nilpotency_index,
    apply_to_poly,
    commutator,
    nabla_images,
    operator_oracle,
    parse,
    relation_pairs,
    render,
    tau_apply,
)

from conftest import SX, SY, from_sympy, to_sympy


def sympy_action(arr, u, expr):
    """Independent action on sympy expressions: D = F d/dy, E = x d/dx + y d/dy."""
    F = to_sympy(arr.F)
    out = sympy.Integer(0)
    for (i, j, k, l), c in u.terms.items():
        f = expr
        for _ in range(l):
            f = sympy.expand(SX * sympy.diff(f, SX) + SY * sympy.diff(f, SY))
        for _ in range(k):
            f = sympy.expand(F * sympy.diff(f, SY))
        out += sympy.Rational(int(c.numerator), int(c.denominator)) * SX ** i * SY ** j * f
    return sympy.expand(out)


def test_basic_products(A3, arr3):
    assert A3.D * A3.y == A3.y * A3.D + A3.from_poly(arr3.F)
    assert A3.D * A3.y * A3.y == A3.mono(0, 2, 1) + A3.from_poly(Y * arr3.F).scale(2)
    assert A3.E * A3.one == A3.E
    u = A3.mono(1, 2, 1, 3, 5)
    assert A3.one * u == u == u * A3.one


def test_relations(A3):
    for g, h, v in relation_pairs(A3):
        assert commutator(A3.gen(g), A3.gen(h)) == v
    assert commutator(A3.E, A3.D) == A3.D.scale(3)
    assert not commutator(A3.x, A3.y)
    assert not commutator(A3.scalar(7), A3.mono(2, 1, 1, 2))


def test_arrangement_mismatch(A3, A4):
    with pytest.raises(ArrangementMismatch):
        A3.x * A4.x


def test_action_examples(A3, arr3):
    assert apply_to_poly(A3.E, Poly.monomial(2, 3)) == Poly.monomial(2, 3).scale(5)
    assert apply_to_poly(A3.D, Y) == arr3.F


def test_action_matches_sympy(A3, arr3):
    elems = [A3.mono(1, 0, 1, 1), A3.mono(0, 2, 2, 0, -3), A3.mono(0, 0, 1, 2) + A3.x,
             A3.mono(2, 1, 0, 1)]
    for u in elems:
        for a in range(4):
            for b in range(4):
                p = Poly.monomial(a, b)
                assert apply_to_poly(u, p) == from_sympy(sympy_action(arr3, u, SX ** a * SY ** b))


def test_product_against_sympy_composition(A3, arr3):
    elems = [A3.D, A3.E, A3.mono(0, 1, 1), A3.mono(1, 0, 2, 1), A3.mono(0, 0, 1, 2)]
    for u in elems:
        for v in elems:
            for a, b in ((0, 0), (1, 2), (3, 1)):
                e = SX ** a * SY ** b
                lhs = apply_to_poly(u * v, Poly.monomial(a, b))
                assert lhs == from_sympy(sympy_action(arr3, u, sympy_action(arr3, v, e)))


def test_operator_oracle_small(A4):
    rep = operator_oracle(A4, max_sum=3, max_degree=6)
    assert rep["pass"] and rep["n_failures"] == 0 and rep["checks"] > 0


def test_operator_oracle_detects_corruption(arr3):
    A = OreAlgebra(example_arrangement(3))
    u, v = (0, 0, 1, 0), (0, 1, 0, 0)
    good = dict(A.mul_mono(u, v))
    try:
        A._mono_cache[(u, v)] = {**good, (0, 0, 0, 0): mpq(1)}
        rep = operator_oracle(A, pairs=[(u, v)], max_degree=4)
        assert not rep["pass"]
    finally:
        A._mono_cache[(u, v)] = good


def test_tau():
    A = OreAlgebra(example_arrangement(3))
    assert tau_apply(1, A.E) == A.scalar(-1)
    assert not tau_apply(3, A.one)
    assert tau_apply(2, A.mono(0, 0, 0, 2)) == A.E.scale(-4) - 4
    with pytest.raises(NotInT):
        tau_apply(1, A.x)


def test_nabla(A3, arr3):
    from dtangent.base import partial_x, partial_y

    assert nabla_images(A3.one, "x") == A3.from_poly(partial_x(arr3.F))
    assert nabla_images(A3.one, "y") == A3.from_poly(partial_y(arr3.F))
    for i in range(4):
        Ei = A3.mono(0, 0, 0, i)
        lhs = nabla_images(A3.x * Ei, "x") + nabla_images(A3.y * Ei, "y")
        rhs = A3.zero
        for t in range(arr3.r + 1):
            rhs = rhs + A3.from_poly(arr3.F) * (A3.E + t) ** i
        assert lhs == rhs


def test_local_ad_nilpotence(A3):
    assert ad_nilpotency_index(A3.mono(2, 0), A3.mono(0, 0, 0, 2)) is not None
    assert ad_nilpotency_index(A3.E, A3.x, cap=10) is None
    for f in (A3.x, A3.mono(1, 1), A3.mono(0, 3) + A3.mono(2, 1)):
        for g in "xyDE":
            assert ad_nilpotency_index(f, A3.gen(g)) is not None


def test_render_parse(A3):
    u = A3.mono(2, 1, 1, 2, "3/2") - A3.D * A3.y
    assert parse(A3, render(u)) == u
    assert parse(A3, "D*y") == A3.D * A3.y
    assert parse(A3, "(x - y) * x") == A3.mono(2) - A3.mono(1, 1)
    with pytest.raises(MalformedInput):
        parse(A3, "x + (")


mono = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2),
                 st.integers(-3, 3).filter(bool))
element = st.lists(mono, min_size=1, max_size=3)


def build(A, ms):
    out = A.zero
    for i, j, k, l, c in ms:
        out = out + A.mono(i, j, k, l, c)
    return out


@settings(max_examples=40, deadline=None)
@given(element, element, element)
def test_property_associativity(a, b, c):
    A = OreAlgebra(example_arrangement(3))
    u, v, w = build(A, a), build(A, b), build(A, c)
    assert (u * v) * w == u * (v * w)


@settings(max_examples=40, deadline=None)
@given(mono, mono)
def test_property_grading(a, b):
    A = OreAlgebra(example_arrangement(4))
    u, v = A.mono(*a), A.mono(*b)
    prod = u * v
    if prod:
        assert prod.internal_degree() == u.internal_degree() + v.internal_degree()


@settings(max_examples=30, deadline=None)
@given(element, element, st.integers(0, 4), st.integers(0, 4))
def test_property_action_is_multiplicative(a, b, i, j):
    A = OreAlgebra(example_arrangement(3))
    u, v = build(A, a), build(A, b)
    p = Poly.monomial(i, j)
    assert apply_to_poly(u * v, p) == apply_to_poly(u, apply_to_poly(v, p))
