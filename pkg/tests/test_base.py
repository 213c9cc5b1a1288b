import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from dtangent.base import (
    LinearForm,
    Poly,
    Q_,
    X,
    Y,
    arrangement_from_json,
    build_arrangement,
    divide_exact,
    euler_defect,
    example_arrangement,
    lemma_indep_rank,
    partial_x,
    partial_y,
    quotient_basis_check,
)
from dtangent.errors import (
    DuplicateLine,
    MalformedInput,
    MissingXLine,
    NotDivisible,
    TooFewLines,
)

from conftest import SX, SY, to_sympy


def test_example_F_matches_sympy_expansion(arr3):
    prod = sympy.expand(SY * (SX - SY) * (SX - 2 * SY) * (SX - 3 * SY))
    lead = sympy.Poly(prod, SX, SY).coeff_monomial(SY ** 4)
    assert sympy.expand(to_sympy(arr3.F) - prod / lead) == 0
    assert arr3.F.coeff(0, 4) == 1
    assert arr3.r == 3 and arr3.n_lines == 5


def test_fbar_and_q(arr3):
    assert X * arr3.Fbar + Poly.monomial(0, 4) == arr3.F
    assert arr3.Q == X * arr3.F
    assert divide_exact(arr3.Q, LinearForm(1, 0)) == arr3.F


def test_x_line_moved_to_front():
    arr = build_arrangement([LinearForm(0, 1), LinearForm(1, -1), LinearForm(2, 0),
                             LinearForm(1, -2), LinearForm(1, -3)])
    assert arr.forms[0] == LinearForm(2, 0)
    assert arr.F.coeff(0, 4) == 1


@pytest.mark.parametrize("forms,exc", [
    ([(1, 0), (1, 0), (0, 1), (1, -1), (1, -2)], DuplicateLine),
    ([(1, 0), (2, 0), (0, 1), (1, -1), (1, -2)], DuplicateLine),
    ([(0, 1), (1, -1), (1, -2), (1, -3), (1, -4)], MissingXLine),
    ([(1, 0), (0, 1), (1, -1), (1, -2)], TooFewLines),
])
def test_build_errors(forms, exc):
    with pytest.raises(exc):
        build_arrangement(forms)


def test_partials():
    assert partial_y(Poly.monomial(0, 5)) == Poly.monomial(0, 4).scale(5)
    assert not partial_x(Poly.const(7))
    p = Poly({(2, 3): 1, (1, 0): Q_("1/2")})
    assert partial_x(p) == Poly({(1, 3): 2, (0, 0): Q_("1/2")})


def test_divide_exact(arr3):
    q = divide_exact(arr3.F, arr3.forms[1])
    assert q * arr3.forms[1].poly() == arr3.F
    with pytest.raises(NotDivisible):
        divide_exact(X * X + Y * Y, LinearForm(1, 0))


@pytest.mark.parametrize("r", [3, 4, 5, 6])
def test_euler_and_lemmas(r):
    arr = example_arrangement(r)
    assert not euler_defect(arr)
    assert X * partial_x(arr.Q) + Y * partial_y(arr.Q) == arr.Q.scale(r + 2)
    assert quotient_basis_check(arr)
    assert lemma_indep_rank(arr) == 4


def test_quotient_basis_detects_repeat(arr3):
    q = divide_exact(arr3.F, arr3.forms[1])
    assert not quotient_basis_check(arr3, [q, q, divide_exact(arr3.F, arr3.forms[2]),
                                           divide_exact(arr3.F, arr3.forms[3])])


def test_degree_of_zero_is_undefined():
    assert Poly().degree() is None


def test_rationals_are_reduced():
    c = Q_(6, -4)
    assert c == mpq(-3, 2) and c.denominator > 0


slopes = st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=12),
                  min_size=3, max_size=5, unique=True)


@settings(max_examples=40, deadline=None)
@given(slopes)
def test_property_random_arrangements(ss):
    forms = [LinearForm(1, 0), LinearForm(0, 1)]
    forms += [LinearForm(1, mpq(s.numerator, s.denominator)) for s in ss if s != 0]
    if len(forms) < 5:
        return
    arr = build_arrangement(forms)
    assert not euler_defect(arr)
    assert quotient_basis_check(arr)
    assert lemma_indep_rank(arr) == 4
    Qs = to_sympy(arr.Q)
    _, factors = sympy.factor_list(Qs, SX, SY)
    assert all(k == 1 for _, k in factors)


def test_json_round_trip(arr3):
    import json

    arr = arrangement_from_json(json.dumps(arr3.to_json()))
    assert arr == arr3
    arr2 = arrangement_from_json('{"forms": [[1, 0], [0, 1], [1, -1], ["1/2", 1], [2, 5]]}')
    assert arr2.r == 3


@pytest.mark.parametrize("text", ['{"forms": [[1, 0], [0, 1]', '{"forms": 3}', '{"nope": []}',
                                  '{"forms": [[1, 0, 2]]}', '{"forms": [["a", 1]]}'])
def test_json_malformed(text):
    with pytest.raises(MalformedInput):
        arrangement_from_json(text)
