import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from dtangent.base import LinearForm, Poly, X, Y, build_arrangement, example_arrangement
from dtangent.errors import ConditionFails, NotInS, NotNormal
from dtangent.ore import AlgebraMorphism, OreAlgebra
from dtangent.symmetry import (
    NormalWitness,
    check_normal_identity,
    exp_ad,
    exp_ad_series,
    graded_auto,
    inverse,
    is_normal,
    modular_sigma,
    normal_auto,
    normal_auto_series,
    preserves_degree,
    q_condition,
    semidirect_check,
    verify_modular,
)

I2 = ((1, 0), (0, 1))


def test_identity(arr3, A3):
    assert graded_auto(arr3, I2, 1) == AlgebraMorphism.identity(A3)


def test_scaling(arr3):
    t = 3
    M = ((t, 0), (0, t))
    assert q_condition(arr3, M, t ** 3)
    th = graded_auto(arr3, M, t ** 3)
    assert preserves_degree(th) and not th.relation_failures()
    assert th.compose(inverse(th)) == AlgebraMorphism.identity(th.A)


def test_reflection_condition_fails():
    arr = build_arrangement([(1, 0), (0, 1), (1, -1), (1, 1), (1, -2)])
    with pytest.raises(ConditionFails):
        graded_auto(arr, ((1, 0), (0, -1)), 1)


def test_reflection_of_symmetric_arrangement():
    arr = build_arrangement([(1, 0), (0, 1), (1, -1), (1, 1), (1, -2), (1, 2)])
    th = graded_auto(arr, ((1, 0), (0, -1)), 1)
    assert th(th.A.y) == -th.A.y
    assert th.compose(th) == AlgebraMorphism.identity(th.A)


def test_swap_with_nonzero_b():
    arr = build_arrangement([(1, 0), (0, 1), (1, -1), (1, 1), (1, -2), (-2, 1)])
    th = graded_auto(arr, ((0, 1), (1, 0)), 1)
    A = th.A
    assert th(A.x) == A.y
    assert not th.relation_failures()
    assert th.compose(inverse(th)) == AlgebraMorphism.identity(A)


def test_exp_ad_examples(arr3, A3):
    assert exp_ad(arr3, Poly.const(5)) == AlgebraMorphism.identity(A3)
    th = exp_ad(arr3, Y * Y)
    assert th(A3.D) == A3.D - A3.from_poly((Y * arr3.F).scale(2))
    assert th(A3.E) == A3.E - A3.mono(0, 2).scale(2)
    with pytest.raises(NotInS):
        exp_ad(arr3, A3.D)


coef = st.integers(-3, 3)
poly3 = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), coef), max_size=4).map(
    lambda ts: Poly({(i, j): c for i, j, c in ts if i + j <= 3}))


@settings(max_examples=25, deadline=None)
@given(poly3, poly3)
def test_property_exp_ad(f, g):
    arr = example_arrangement(3)
    assert exp_ad(arr, f) == exp_ad_series(arr, f)
    assert exp_ad(arr, f).compose(exp_ad(arr, g)) == exp_ad(arr, f + g)


def test_semidirect(arr3):
    assert semidirect_check(graded_auto(arr3, I2, 1), I2, Y * Y)
    M = ((2, 0), (0, 2))
    th = graded_auto(arr3, M, 8)
    assert semidirect_check(th, M, Y * Y)
    assert not semidirect_check(th, M, Y * Y, mutate=True)


def test_modular_r4(arr4):
    rep = verify_modular(arr4, 4)
    assert rep["pass"] and rep["sigma_Q"]
    assert rep["opposite_orientation_holds"] < rep["monomials"]
    assert rep["opposite_first_failure"] == (0, 0, 0, 1)


def test_normal_auto_examples(arr3, A3):
    th = normal_auto(arr3, (1, 0, 0, 0, 0))
    assert th(A3.E) == A3.E + 1 and th(A3.D) == A3.D
    assert normal_auto(arr3, (1,) * 5) == modular_sigma(arr3)
    assert normal_auto(arr3, (0,) * 5) == AlgebraMorphism.identity(A3)
    minus = normal_auto_series(arr3, (1,) * 5, -1)
    assert minus.compose(modular_sigma(arr3)) == AlgebraMorphism.identity(A3)
    assert minus(A3.E) == A3.E - 5


exps = st.tuples(*[st.integers(0, 3)] * 5)


@settings(max_examples=20, deadline=None)
@given(exps, exps)
def test_property_normal_autos(a, b):
    arr = example_arrangement(3)
    ab = tuple(i + j for i, j in zip(a, b))
    assert normal_auto(arr, a).compose(normal_auto(arr, b)) == normal_auto(arr, ab)
    assert normal_auto(arr, a) == normal_auto_series(arr, a)


def test_normal_identity(arr3):
    assert check_normal_identity(arr3, NormalWitness(mpq(-2, 3), (1, 2, 0, 1, 0)), depth=3)


def test_is_normal_examples(arr3, A3):
    u = X * X * Y * arr3.F
    w = is_normal(arr3, u)
    assert w.exponents == (2, 2, 1, 1, 1) and w.element(arr3) == u
    for elem, reason in ((A3.x + A3.D, "not-in-S"), (X * X + Y * Y, "non-split-factor"),
                         (Poly(), "zero"), (X + Y.scale(3), "foreign-line")):
        with pytest.raises(NotNormal) as info:
            is_normal(arr3, elem)
        assert info.value.reason == reason


@settings(max_examples=30, deadline=None)
@given(exps, st.fractions(-9, 9, max_denominator=9).filter(bool),
       st.sampled_from([None, X * X + Y * Y, X + Y.scale(5)]))
def test_property_is_normal(e, c, junk):
    arr = example_arrangement(3)
    wit = NormalWitness(mpq(c.numerator, c.denominator), e)
    u = wit.element(arr)
    if junk is None:
        assert is_normal(arr, u) == wit
    else:
        with pytest.raises(NotNormal):
            is_normal(arr, u * junk)
