"""Automorphisms of A: graded ones, exponentials of inner derivations, normal
elements and the modular automorphism.

Orientation: for a normal element ``u`` we define ``theta_u`` by
``a * u = u * theta_u(a)``.  With this choice ``theta_u(delta) = delta + delta(u)/u``
on logarithmic derivations, ``theta_u = exp(+sum_j i_j d_j)`` and
``theta_Q`` is the modular automorphism ``sigma`` with ``sigma(E) = E + r + 2``.
The opposite orientation ``u * a = theta'(a) * u`` gives ``exp(-sum_j i_j d_j)``,
which is ``sigma`` inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import sympy
from gmpy2 import mpq

from .base import Arrangement, LinearForm, Poly, Q_, X, Y, divide_exact
from .errors import ConditionFails, NotDivisible, NotInS, NotNormal
from .hochschild import partial_derivation
from .ore import (
    AlgebraMorphism,
    Derivation,
    OreAlgebra,
    OreElement,
    ad_exponential,
    commutator,
)
from .resolution import sigma_morphism

GENS = ("x", "y", "D", "E")


# graded automorphisms ------------------------------------------------------------
@dataclass(frozen=True)
class GradedData:
    M: tuple  # ((a, b), (c, d))
    e: object
    v: object = 0
    phi0: Poly = field(default_factory=Poly)


def q_condition(arr: Arrangement, M, e) -> bool:
    """``Q(ax+by, cx+dy) == (ad - bc) e Q(x, y)``."""
    (a, b), (c, d) = M
    det = mpq(a) * mpq(d) - mpq(b) * mpq(c)
    lhs = arr.Q.substitute(X.scale(a) + Y.scale(b), X.scale(c) + Y.scale(d))
    return lhs == arr.Q.scale(det * mpq(e))


def graded_auto(arr: Arrangement, M, e, v=0, phi0: Poly | None = None) -> AlgebraMorphism:
    """The homogeneous automorphism with ``x -> ax+by``, ``y -> cx+dy``, ``E -> E+v``."""
    A = OreAlgebra(arr)
    (a, b), (c, d) = [[Q_(t) if isinstance(t, str) else mpq(t) for t in row] for row in M]
    e, v = mpq(e), mpq(v)
    phi0 = phi0 if phi0 is not None else Poly()
    if a * d - b * c == 0:
        raise ConditionFails("matrix is not invertible")
    if e == 0:
        raise ConditionFails("e must be non-zero")
    if phi0 and (not phi0.is_homogeneous() or phi0.degree() != arr.r):
        raise ConditionFails("phi0 must lie in S_r")
    if not q_condition(arr, ((a, b), (c, d)), e):
        raise ConditionFails("Q(ax+by, cx+dy) != (ad-bc) e Q")
    thD = A.from_poly(phi0) + A.D.scale(e)
    if b != 0:
        quo = divide_exact(arr.F.scale(e * b), LinearForm(a, b))
        thD = thD - A.from_poly(quo) * A.E
    images = {
        "x": A.from_poly(X.scale(a) + Y.scale(b)),
        "y": A.from_poly(X.scale(c) + Y.scale(d)),
        "D": thD,
        "E": A.E + v,
    }
    return AlgebraMorphism(A, images)


def substitute_inverse(arr: Arrangement, M, f: Poly) -> Poly:
    """``theta^{-1}(f)`` for ``f`` in S, where theta acts on S through ``M``."""
    (a, b), (c, d) = [[mpq(t) for t in row] for row in M]
    det = a * d - b * c
    ia, ib, ic, id_ = d / det, -b / det, -c / det, a / det
    # theta(x) = ax+by; the inverse sends x -> ia x + ib y, y -> ic x + id y
    return f.substitute(X.scale(ia) + Y.scale(ib), X.scale(ic) + Y.scale(id_))


def preserves_degree(theta: AlgebraMorphism) -> bool:
    A = theta.A
    for g in GENS:
        img = theta.images[g]
        if set(img.homogeneous_components()) != {A.gen(g).internal_degree()}:
            return False
    return True


def inverse(theta: AlgebraMorphism, max_degree: int | None = None) -> AlgebraMorphism:
    """Inverse of a graded automorphism, by solving on each homogeneous piece.

    For every generator ``g`` we find ``u`` of the same internal degree with
    ``theta(u) = g``, using PBW monomials whose E-exponent is at most 1.
    """
    from .hochschild import algebra_basis
    from .linalg import Echelon

    A = theta.A
    images = {}
    for g in GENS:
        n = A.gen(g).internal_degree()
        ech = Echelon(track=True)
        for m in algebra_basis(A.r, n, 1):
            ech.add(theta(A.mono(*m)).terms, label=m)
        sol = ech.solve(A.gen(g).terms)
        if sol is None:
            raise ConditionFails(f"no preimage of {g} found")
        images[g] = A.element(sol)
    return AlgebraMorphism(A, images)


# exponentials --------------------------------------------------------------------
def exp_ad(arr: Arrangement, f: Poly | OreElement) -> AlgebraMorphism:
    """Closed form of ``exp(ad f)``: ``D -> D - F f_y``, ``E -> E - [E, f]``."""
    from .base import partial_y

    A = OreAlgebra(arr)
    if isinstance(f, OreElement):
        if not f.in_S():
            raise NotInS("exp_ad needs f in S (f must not involve D or E)")
        f = f.to_poly()
    fe = A.from_poly(f)
    images = {
        "x": A.x,
        "y": A.y,
        "D": A.D - A.from_poly(arr.F * partial_y(f)),
        "E": A.E - commutator(A.E, fe),
    }
    return AlgebraMorphism(A, images)


def exp_ad_series(arr: Arrangement, f: Poly) -> AlgebraMorphism:
    A = OreAlgebra(arr)
    return ad_exponential(A.from_poly(f))


def semidirect_check(theta0: AlgebraMorphism, M, f: Poly, mutate: bool = False) -> bool:
    """``exp ad(f) o theta0 == theta0 o exp ad(theta0^{-1}(f))`` on generators."""
    arr = theta0.A.arr
    g = f if mutate else substitute_inverse(arr, M, f)
    lhs = exp_ad(arr, f).compose(theta0)
    rhs = theta0.compose(exp_ad(arr, g))
    return lhs == rhs


# modular automorphism --------------------------------------------------------------
def modular_sigma(arr: Arrangement) -> AlgebraMorphism:
    return sigma_morphism(OreAlgebra(arr))


def pbw_monomials(depth: int) -> list[tuple]:
    out = []
    for s in range(depth + 1):
        for i in range(s + 1):
            for j in range(s - i + 1):
                for k in range(s - i - j + 1):
                    out.append((i, j, k, s - i - j - k))
    return out


def verify_modular(arr: Arrangement, depth: int = 6) -> dict:
    """Check ``a Q = Q sigma(a)`` (and record the opposite orientation) up to ``depth``."""
    A = OreAlgebra(arr)
    sigma = modular_sigma(arr)
    Qe = A.from_poly(arr.Q)
    right = left = 0
    first_left_fail = None
    monos = pbw_monomials(depth)
    for m in monos:
        a = A.mono(*m)
        sa = sigma(a)
        if a * Qe == Qe * sa:
            right += 1
        if Qe * a == sa * Qe:
            left += 1
        elif first_left_fail is None:
            first_left_fail = m
    relations = not sigma.relation_failures()
    fixes_S = all(sigma(A.mono(i, j)) == A.mono(i, j) for i in range(4) for j in range(4))
    return {
        "monomials": len(monos),
        "orientation": "a*Q == Q*sigma(a)",
        "holds": right,
        "opposite_orientation_holds": left,
        "opposite_first_failure": first_left_fail,
        "relations": relations,
        "fixes_S": fixes_S,
        "sigma_Q": sigma(Qe) == Qe,
        "pass": relations and fixes_S and right == len(monos),
    }


# normal elements --------------------------------------------------------------------
@dataclass(frozen=True)
class NormalWitness:
    scalar: object
    exponents: tuple

    def element(self, arr: Arrangement) -> Poly:
        out = Poly.const(self.scalar)
        for form, e in zip(arr.forms, self.exponents):
            out = out * form.poly() ** e
        return out


def derivation_sum(arr: Arrangement, coeffs: Sequence) -> Derivation:
    A = OreAlgebra(arr)
    total = Derivation(A, {})
    for i, c in enumerate(coeffs):
        if c:
            total = total + partial_derivation(A, i)[1].scale(c)
    return total


def normal_auto(arr: Arrangement, w: NormalWitness | Sequence[int]) -> AlgebraMorphism:
    """``theta_u = exp(sum_j i_j d_j)``, closed form on generators.

    The sum of the ``d_j`` kills S and sends E, D into S, so the series stops
    after the linear term.
    """
    exps = w.exponents if isinstance(w, NormalWitness) else tuple(w)
    A = OreAlgebra(arr)
    der = derivation_sum(arr, exps)
    return AlgebraMorphism(A, {g: A.gen(g) + der.images[g] for g in GENS})


def normal_auto_series(arr: Arrangement, exps: Sequence[int], sign: int = 1) -> AlgebraMorphism:
    return derivation_sum(arr, [sign * e for e in exps]).exponential()


def check_normal_identity(arr: Arrangement, w: NormalWitness, depth: int = 3) -> bool:
    """``a u = u theta_u(a)`` for PBW monomials up to ``depth``."""
    A = OreAlgebra(arr)
    u = A.from_poly(w.element(arr))
    th = normal_auto(arr, w)
    return all(A.mono(*m) * u == u * th(A.mono(*m)) for m in pbw_monomials(depth))


def is_normal(arr: Arrangement, u: OreElement | Poly) -> NormalWitness:
    """Witness that ``u`` is a scalar times a product of the arrangement's lines.

    Raises :class:`NotNormal` with reason ``not-in-S``, ``zero``,
    ``non-split-factor`` or ``foreign-line``.
    """
    if isinstance(u, OreElement):
        if not u.in_S():
            raise NotNormal("not-in-S", "element involves D or E")
        u = u.to_poly()
    if not u:
        raise NotNormal("zero", "0 is not a normal element")
    exps = []
    rest = u
    for form in arr.forms:
        k = 0
        while rest.degree():
            try:
                rest = divide_exact(rest, form)
            except NotDivisible:
                break
            k += 1
        exps.append(k)
    if rest.degree() == 0:
        return NormalWitness(rest.coeff(0, 0), tuple(exps))
    x, y = sympy.symbols("x y")
    expr = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * x ** i * y ** j
               for (i, j), c in rest.terms.items())
    _, factors = sympy.factor_list(expr, x, y)
    if any(sympy.Poly(f, x, y).total_degree() > 1 for f, _ in factors):
        raise NotNormal("non-split-factor", f"irreducible factor of degree > 1 in {rest}")
    raise NotNormal("foreign-line", f"linear factor not in the arrangement: {rest}")
