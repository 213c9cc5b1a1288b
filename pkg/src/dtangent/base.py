"""Exact rationals, the polynomial ring k[x, y] and line arrangements."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from gmpy2 import mpq

from .errors import (
    DuplicateLine,
    MalformedInput,
    MissingXLine,
    NotDivisible,
    TooFewLines,
)

Rational = type(mpq(0))


def Q_(a, b=1) -> Rational:
    """Coerce ``a/b`` to an exact rational."""
    if isinstance(a, str):
        a = a.strip()
        if "/" in a:
            n, d = a.split("/")
            return mpq(int(n), int(d)) / b
        return mpq(int(a), b)
    return mpq(a) / b


class Poly:
    """A polynomial in k[x, y], stored as ``{(i, j): coeff}`` with no zeros."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        if terms:
            for k, c in terms.items():
                if c:
                    clean[k] = mpq(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def monomial(cls, i: int, j: int, c=1) -> "Poly":
        return cls({(i, j): c})

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(0, 0): c})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Poly._raw(out)

    def __neg__(self):
        return Poly._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c) -> "Poly":
        c = mpq(c)
        if not c:
            return Poly()
        return Poly._raw({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        out: dict = {}
        for (i, j), c in self.terms.items():
            for (a, b), d in other.terms.items():
                k = (i + a, j + b)
                v = out.get(k, 0) + c * d
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return Poly._raw(out)

    __rmul__ = scale

    def __pow__(self, n: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def degree(self) -> int | None:
        """Total degree; ``None`` for the zero polynomial."""
        if not self.terms:
            return None
        return max(i + j for i, j in self.terms)

    def is_homogeneous(self) -> bool:
        return len({i + j for i, j in self.terms}) <= 1

    def component(self, p: int) -> "Poly":
        return Poly._raw({k: c for k, c in self.terms.items() if sum(k) == p})

    def coeff(self, i: int, j: int) -> Rational:
        return self.terms.get((i, j), mpq(0))

    def substitute(self, X: "Poly", Y: "Poly") -> "Poly":
        """Evaluate at x = X, y = Y."""
        out = Poly()
        xp = {0: Poly.const(1)}
        yp = {0: Poly.const(1)}
        for (i, j), c in self.terms.items():
            if i not in xp:
                xp[i] = X ** i
            if j not in yp:
                yp[j] = Y ** j
            out = out + (xp[i] * yp[j]).scale(c)
        return out

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return render_poly(self)


def render_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for (i, j) in sorted(p.terms, key=lambda k: (-(k[0] + k[1]), -k[0])):
        c = p.terms[(i, j)]
        fac = []
        if i:
            fac.append("x" if i == 1 else f"x^{i}")
        if j:
            fac.append("y" if j == 1 else f"y^{j}")
        if not fac:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(fac))
        elif c == -1:
            parts.append("-" + "*".join(fac))
        else:
            parts.append(f"{c}*" + "*".join(fac))
    return " + ".join(parts).replace("+ -", "- ")


def partial_x(p: Poly) -> Poly:
    return Poly._raw({(i - 1, j): c * i for (i, j), c in p.terms.items() if i})


def partial_y(p: Poly) -> Poly:
    return Poly._raw({(i, j - 1): c * j for (i, j), c in p.terms.items() if j})


X = Poly.monomial(1, 0)
Y = Poly.monomial(0, 1)


@dataclass(frozen=True)
class LinearForm:
    a: Rational
    b: Rational

    def __post_init__(self):
        object.__setattr__(self, "a", mpq(self.a))
        object.__setattr__(self, "b", mpq(self.b))
        if not self.a and not self.b:
            raise ValueError("zero linear form")

    def poly(self) -> Poly:
        return Poly({(1, 0): self.a, (0, 1): self.b})

    def proportional(self, other: "LinearForm") -> bool:
        return self.a * other.b == self.b * other.a

    def __str__(self):
        return str(self.poly())


def divide_exact(p: Poly, alpha: LinearForm) -> Poly:
    """Quotient ``q`` with ``q * alpha == p``; raises :class:`NotDivisible`."""
    # divide by the leading term of alpha in lex order y > x (or x if b == 0)
    use_y = alpha.b != 0
    lead = alpha.b if use_y else alpha.a
    rem = dict(p.terms)
    quot: dict = {}
    while rem:
        i, j = max(rem, key=(lambda k: (k[1], k[0])) if use_y else (lambda k: (k[0], k[1])))
        if (use_y and j == 0) or (not use_y and i == 0):
            raise NotDivisible(f"{alpha} does not divide {p}")
        c = rem[(i, j)] / lead
        qk = (i, j - 1) if use_y else (i - 1, j)
        quot[qk] = quot.get(qk, 0) + c
        for (di, dj), ac in (((1, 0), alpha.a), ((0, 1), alpha.b)):
            if not ac:
                continue
            k = (qk[0] + di, qk[1] + dj)
            v = rem.get(k, 0) - c * ac
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return Poly(quot)


class Arrangement:
    """A central line arrangement with ``r + 2`` lines, the first being ``x = 0``.

    ``F`` is the product of the other lines, scaled so that its ``y^(r+1)``
    coefficient is 1, ``Fbar`` satisfies ``F = x*Fbar + y^(r+1)`` and ``Q = x*F``.
    """

    def __init__(self, forms: Iterable[LinearForm], min_lines: int = 5):
        forms = [f if isinstance(f, LinearForm) else LinearForm(*f) for f in forms]
        if len(forms) < min_lines:
            raise TooFewLines(f"need at least {min_lines} lines, got {len(forms)}")
        for i in range(len(forms)):
            for j in range(i):
                if forms[i].proportional(forms[j]):
                    raise DuplicateLine(f"lines {forms[j]} and {forms[i]} coincide")
        xs = [i for i, f in enumerate(forms) if f.b == 0]
        if not xs:
            raise MissingXLine("no line proportional to x")
        k = xs[0]
        self.forms: tuple[LinearForm, ...] = (forms[k],) + tuple(forms[:k] + forms[k + 1:])
        self.r = len(forms) - 2
        prod = Poly.const(1)
        lead = mpq(1)
        for f in self.forms[1:]:
            prod = prod * f.poly()
            lead *= f.b
        self.F = prod.scale(1 / lead)
        self.Q = X * self.F
        rest = self.F - Poly.monomial(0, self.r + 1)
        self.Fbar = divide_exact(rest, LinearForm(1, 0)) if rest else Poly()
        self.Fx = partial_x(self.F)
        self.Fy = partial_y(self.F)

    @property
    def n_lines(self) -> int:
        return self.r + 2

    def key(self) -> tuple:
        return tuple((f.a, f.b) for f in self.forms)

    def __eq__(self, other):
        return isinstance(other, Arrangement) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "Arrangement([" + ", ".join(str(f) for f in self.forms) + "])"

    def to_json(self) -> dict:
        return {
            "forms": [[int(f.a.numerator), int(f.a.denominator), int(f.b.numerator),
                       int(f.b.denominator)] for f in self.forms],
            "r": self.r,
            "F": str(self.F),
        }


def build_arrangement(forms: Iterable, min_lines: int = 5) -> Arrangement:
    return Arrangement(forms, min_lines=min_lines)


def example_arrangement(r: int) -> Arrangement:
    """The lines x, y, x - y, x - 2y, ..., x - r*y."""
    forms = [LinearForm(1, 0), LinearForm(0, 1)] + [LinearForm(1, -k) for k in range(1, r + 1)]
    return Arrangement(forms, min_lines=3)


def arrangement_from_json(text: str) -> Arrangement:
    """Parse ``{"forms": [...]}`` (or a bare list of forms).

    A form is ``[a, b]`` for ``a*x + b*y`` with integer or ``"p/q"`` string
    entries, or ``[a_num, a_den, b_num, b_den]`` with integers.
    """

    def coef(v):
        if isinstance(v, bool) or not isinstance(v, (int, str)):
            raise ValueError(f"bad coefficient {v!r}")
        return Q_(v)

    try:
        data = json.loads(text)
        rows = data["forms"] if isinstance(data, dict) else data
        if not isinstance(rows, list):
            raise ValueError("forms must be a list")
        forms = []
        for row in rows:
            if not isinstance(row, list):
                raise ValueError(f"bad form entry {row!r}")
            if len(row) == 2:
                forms.append(LinearForm(coef(row[0]), coef(row[1])))
            elif len(row) == 4 and all(isinstance(v, int) and not isinstance(v, bool)
                                       for v in row):
                an, ad, bn, bd = row
                forms.append(LinearForm(mpq(an, ad), mpq(bn, bd)))
            else:
                raise ValueError(f"bad form entry {row!r}")
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise MalformedInput(f"cannot parse arrangement: {exc}") from exc
    return Arrangement(forms)


def homogeneous_basis(p: int) -> list[tuple[int, int]]:
    return [(p - j, j) for j in range(p + 1)]


def coordinates(poly: Poly, p: int) -> list[Rational]:
    return [poly.coeff(i, j) for i, j in homogeneous_basis(p)]


def quotient_basis_check(arr: Arrangement, quotients: list[Poly] | None = None) -> bool:
    """True iff the polynomials ``F / alpha_i`` (i >= 1) are independent in S_r."""
    from .linalg import rank

    if quotients is None:
        quotients = [divide_exact(arr.F, f) for f in arr.forms[1:]]
    rows = [coordinates(q, arr.r) for q in quotients]
    return rank(rows) == len(rows)


def euler_defect(arr: Arrangement) -> Poly:
    return X * arr.Fx + Y * arr.Fy - arr.F.scale(arr.r + 1)


def lemma_indep_rank(arr: Arrangement) -> int:
    """Rank of the map (alpha, beta) -> alpha*F_x + beta*F_y on S_1 x S_1 (4 means injective)."""
    from .linalg import rank

    cols = [X * arr.Fx, Y * arr.Fx, X * arr.Fy, Y * arr.Fy]
    return rank([coordinates(c, arr.r + 1) for c in cols])
