"""Hochschild cochains ``A (x) Lambda V*`` and their cohomology.

A cochain maps dual wedge monomials (sorted tuples of letter indices, read as
x^, y^, D^, E^) to elements of A.  The internal degree of ``a (x) w^`` is
``deg(a) - deg(w)``, with x, y of degree 1, D of degree r and E of degree 0.

Cohomology is computed on the degree-0 part with every coefficient's
E-exponent bounded by a window ``N``.  Because the differentials never raise
the E-exponent this is a subcomplex, but its naive cohomology has spurious
classes at the top of the window.  We therefore report

    dim (Z^p n W) / (B^p n W),   W = cochains with E-exponent <= N,

where ``B^p n W`` is computed from preimages with E-exponent <= N + margin.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from gmpy2 import mpq

from .base import Arrangement, Poly, divide_exact
from .errors import DegreeMismatch, IndexOutOfRange, RankOverflow, UnsupportedDegree
from .linalg import Echelon
from .ore import (
    Derivation,
    OreAlgebra,
    OreElement,
    _acc,
    commutator,
    nabla_images,
    parse,
    render,
)
from .resolution import (
    LETTERS,
    Chain,
    Resolution,
    all_wedges,
    dual_label,
    wedge,
    wedge_degree,
    wedge_mul,
)

X_, Y_, D_, E_ = 0, 1, 2, 3
TOP = (0, 1, 2, 3)


class Cochain:
    __slots__ = ("A", "terms")

    def __init__(self, A: OreAlgebra, terms: Mapping | None = None):
        self.A = A
        clean = {}
        for w, a in (terms or {}).items():
            if isinstance(w, str):
                w = wedge(w) if w not in ("", "1") else ()
            if isinstance(a, str):
                a = parse(A, a)
            elif not isinstance(a, OreElement):
                a = A.scalar(a)
            if a:
                clean[tuple(w)] = clean.get(tuple(w), A.zero) + a
        self.terms = {w: a for w, a in clean.items() if a}

    @classmethod
    def _raw(cls, A, terms):
        c = cls.__new__(cls)
        c.A = A
        c.terms = terms
        return c

    @classmethod
    def of(cls, A: OreAlgebra, *pairs) -> "Cochain":
        """``Cochain.of(A, (a, 'xD'), (b, 'yD'))`` with accumulation."""
        out = cls(A)
        for a, w in pairs:
            out = out + cls(A, {w: a})
        return out

    def __add__(self, other: "Cochain") -> "Cochain":
        out = dict(self.terms)
        for w, a in other.terms.items():
            v = out.get(w)
            v = a if v is None else v + a
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return Cochain._raw(self.A, out)

    def __neg__(self):
        return Cochain._raw(self.A, {w: -a for w, a in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Cochain":
        if not c:
            return Cochain._raw(self.A, {})
        return Cochain._raw(self.A, {w: a.scale(c) for w, a in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, Cochain) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __getitem__(self, w) -> OreElement:
        if isinstance(w, str):
            w = wedge(w) if w not in ("", "1") else ()
        return self.terms.get(tuple(w), self.A.zero)

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) > 1:
            raise DegreeMismatch("cochain mixes cohomological degrees")
        return ds.pop() if ds else 0

    def coords(self) -> dict:
        out = {}
        for w, a in self.terms.items():
            for m, c in a.terms.items():
                out[(w, m)] = c
        return out

    @classmethod
    def from_coords(cls, A, coords: Mapping) -> "Cochain":
        terms: dict = {}
        for (w, m), c in coords.items():
            terms.setdefault(w, {})[m] = c
        return cls(A, {w: A.element(t) for w, t in terms.items()})

    def internal_components(self) -> dict[int, "Cochain"]:
        A = self.A
        comps: dict = {}
        for w, a in self.terms.items():
            wd = wedge_degree(A.r, w)
            for m, c in a.terms.items():
                comps.setdefault(A.degree(m) - wd, {})[(w, m)] = c
        return {n: Cochain.from_coords(A, t) for n, t in comps.items()}

    def e_degree(self) -> int:
        return max((a.e_degree() for a in self.terms.values()), default=-1)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({render(a)})*{dual_label(w)}" for w, a in sorted(self.terms.items()))

    __repr__ = __str__


# differentials ----------------------------------------------------------------
def _put(out: dict, w: tuple, a: OreElement):
    if not a:
        return
    v = out.get(w)
    v = a if v is None else v + a
    if v:
        out[w] = v
    else:
        out.pop(w, None)


def _d_term(A: OreAlgebra, w: tuple, a: OreElement, out: dict) -> None:
    r = A.r
    br = lambda g: commutator(A.gen(g), a)
    nx = lambda: nabla_images(a, "x")
    ny = lambda: nabla_images(a, "y")
    lab = "".join(LETTERS[i] for i in w)
    W = wedge
    if lab == "":
        for g in "xyDE":
            _put(out, W(g), br(g))
    elif lab == "x":
        _put(out, W("xy"), -br("y"))
        _put(out, W("xE"), a - br("E"))
        _put(out, W("xD"), -br("D"))
        _put(out, W("yD"), nx())
    elif lab == "y":
        _put(out, W("xy"), br("x"))
        _put(out, W("yE"), a - br("E"))
        _put(out, W("yD"), ny() - br("D"))
    elif lab == "D":
        _put(out, W("xD"), br("x"))
        _put(out, W("yD"), br("y"))
        _put(out, W("DE"), a.scale(r) - br("E"))
    elif lab == "E":
        _put(out, W("xE"), br("x"))
        _put(out, W("yE"), br("y"))
        _put(out, W("DE"), br("D"))
    elif lab == "xy":
        _put(out, W("xyD"), br("D") - ny())
        _put(out, W("xyE"), br("E") - a.scale(2))
    elif lab == "xE":
        _put(out, W("xyE"), -br("y"))
        _put(out, W("xDE"), -br("D"))
        _put(out, W("yDE"), nx())
    elif lab == "yE":
        _put(out, W("xyE"), br("x"))
        _put(out, W("yDE"), ny() - br("D"))
    elif lab == "xD":
        _put(out, W("xyD"), -br("y"))
        _put(out, W("xDE"), br("E") - a.scale(r + 1))
    elif lab == "yD":
        _put(out, W("xyD"), br("x"))
        _put(out, W("yDE"), br("E") - a.scale(r + 1))
    elif lab == "DE":
        _put(out, W("xDE"), br("x"))
        _put(out, W("yDE"), br("y"))
    elif lab == "xyD":
        _put(out, TOP, a.scale(r + 2) - br("E"))
    elif lab == "xyE":
        _put(out, TOP, br("D") - ny())
    elif lab == "xDE":
        _put(out, TOP, -br("y"))
    elif lab == "yDE":
        _put(out, TOP, br("x"))
    elif lab == "xyDE":
        pass
    else:  # pragma: no cover
        raise DegreeMismatch(lab)


def hh_d(p: int | None, c: Cochain) -> Cochain:
    """The cochain differential ``d^p``; ``p`` is checked when given."""
    if p is not None and c.terms and c.degrees() != {p}:
        raise DegreeMismatch(f"cochain is not of degree {p}")
    if p is not None and not 0 <= p <= 4:
        raise DegreeMismatch(f"no differential d^{p}")
    out: dict = {}
    for w, a in c.terms.items():
        _d_term(c.A, w, a, out)
    return Cochain._raw(c.A, out)


def evaluate(c: Cochain, ch: Chain) -> OreElement:
    """Apply the A^e-linear map determined by ``c`` to a chain of P."""
    A = c.A
    out: dict = {}
    for (a, w, b), k in ch.terms.items():
        val = c.terms.get(w)
        if val is None:
            continue
        for m, cv in val.terms.items():
            for m1, c1 in A.mul_mono(a, m).items():
                for m2, c2 in A.mul_mono(m1, b).items():
                    _acc(out, m2, k * cv * c1 * c2)
    return OreElement._raw(A, out)


def hh_d_via_resolution(c: Cochain, res: Resolution | None = None) -> Cochain:
    """``(d c)(w') = c(d(1|w'|1))``: the differential obtained from P."""
    res = res or Resolution(c.A)
    out = {}
    for p in c.degrees():
        for w2 in all_wedges(p + 1):
            v = evaluate(c, res.gen_image(w2))
            if v:
                out[w2] = v
    return Cochain._raw(c.A, out)


def homotopy_s(p: int | None, c: Cochain) -> Cochain:
    """Contraction with E: ``a (x) w^ ^ E^ -> (-1)^{|w|} a (x) w^``."""
    if p is not None and c.terms and c.degrees() != {p}:
        raise DegreeMismatch(f"cochain is not of degree {p}")
    out = {}
    for w, a in c.terms.items():
        if w and w[-1] == E_:
            out[w[:-1]] = a if len(w) % 2 else -a
    return Cochain._raw(c.A, out)


def euler_gamma(c: Cochain) -> Cochain:
    out = Cochain(c.A)
    for n, comp in c.internal_components().items():
        out = out + comp.scale(n)
    return out


def is_cocycle(c: Cochain) -> bool:
    return not hh_d(None, c)


# windows and cohomology ----------------------------------------------------------
def algebra_basis(r: int, m: int, N: int) -> list[tuple]:
    """PBW monomials of internal degree ``m`` with E-exponent <= N."""
    if m < 0:
        return []
    out = []
    for k in range(m // r + 1):
        rest = m - r * k
        for j in range(rest + 1):
            for l in range(N + 1):
                out.append((rest - j, j, k, l))
    return out


def window_basis(r: int, p: int, n: int, N: int) -> list[tuple]:
    """Basis ``(w, mono)`` of cochains of degree ``p``, internal degree ``n``."""
    out = []
    for w in all_wedges(p):
        for m in algebra_basis(r, n + wedge_degree(r, w), N):
            out.append((w, m))
    return out


class Window:
    """Differential images of window basis vectors, cached per arrangement."""

    _cache: dict = {}

    def __init__(self, A: OreAlgebra, cap: int = 200_000):
        self.A = A
        self.cap = cap
        self._img = Window._cache.setdefault(A.arr.key(), {})

    def image(self, w: tuple, m: tuple) -> dict:
        key = (w, m)
        v = self._img.get(key)
        if v is None:
            c = Cochain._raw(self.A, {w: self.A.mono(*m)})
            v = hh_d(None, c).coords()
            self._img[key] = v
        return v

    def images(self, p: int, n: int, N: int) -> list[tuple[tuple, dict]]:
        basis = window_basis(self.A.r, p, n, N)
        if len(basis) > self.cap:
            raise RankOverflow(f"{len(basis)} basis vectors exceed the cap {self.cap}")
        return [(b, self.image(*b)) for b in basis]


def _rank(vectors: Iterable[dict]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return len(ech)


def cohomology_dims(arr: Arrangement, N: int = 8, margin: int = 2, n: int = 0,
                    cap: int = 200_000) -> list[int]:
    """Dimensions of ``H^0 .. H^4`` of the degree-``n`` complex at window ``N``."""
    if arr.r < 3:
        raise UnsupportedDegree(
            "the degree-0 subcomplex description needs r >= 3; the cases r = 1, 2 "
            "are left open")
    A = OreAlgebra(arr)
    win = Window(A, cap)
    dims = []
    for p in range(5):
        imgs = win.images(p, n, N)
        for _, v in imgs:
            assert all(m[3] <= N for (_, m) in v), "differential raised the E-degree"
        z = len(imgs) - (_rank(v for _, v in imgs) if p < 4 else 0)
        if p == 0:
            b = 0
        else:
            pre = win.images(p - 1, n, N + margin)
            full = _rank(v for _, v in pre)
            outside = _rank({k: c for k, c in v.items() if k[1][3] > N} for _, v in pre)
            b = full - outside
        dims.append(z - b)
    return dims


def is_coboundary(c: Cochain, N: int = 8) -> Cochain | None:
    """A cochain ``eta`` with E-exponent <= N and ``d eta = c``, or None."""
    if not c:
        return Cochain(c.A)
    A = c.A
    p = c.degree()
    if p == 0:
        return None
    win = Window(A)
    total = Cochain(A)
    for n, comp in c.internal_components().items():
        ech = Echelon(track=True)
        basis = win.images(p - 1, n, N)
        for b, v in basis:
            ech.add(v, label=b)
        sol = ech.solve(comp.coords())
        if sol is None:
            return None
        total = total + Cochain.from_coords(A, sol)
    return total


def independent_mod_coboundaries(cochains: list[Cochain], N: int = 8, n: int = 0) -> int:
    """Dimension of the span of ``cochains`` modulo coboundaries from the window."""
    if not cochains:
        return 0
    A = cochains[0].A
    p = cochains[0].degree()
    ech = Echelon()
    if p > 0:
        for _, v in Window(A).images(p - 1, n, N):
            ech.add(v)
    base = len(ech)
    for c in cochains:
        ech.add(c.coords())
    return len(ech) - base


# representatives ---------------------------------------------------------------
def omega2(A: OreAlgebra) -> Cochain:
    r = A.r
    y = A.y
    return Cochain.of(A, (y * A.D - A.mono(0, r + 1, 0, 1), "xD"),
                      (y * A.from_poly(A.arr.Fbar) * A.E, "yD"))


def omega3(A: OreAlgebra) -> Cochain:
    w2 = omega2(A)
    return Cochain.of(A, (w2["xD"], "xDE"), (w2["yD"], "yDE"))


def partial_derivation(arr: Arrangement | OreAlgebra, i: int) -> tuple[Cochain, Derivation]:
    """The class of the derivation ``d_alpha`` for the ``i``-th line.

    Representative ``alpha_y F/alpha (x) D^ + 1 (x) E^`` (just ``1 (x) E^`` for the
    line x = 0) and the derivation x, y -> 0, E -> 1, D -> F alpha_y / alpha.
    """
    A = arr if isinstance(arr, OreAlgebra) else OreAlgebra(arr)
    forms = A.arr.forms
    if not 0 <= i < len(forms):
        raise IndexOutOfRange(f"line index {i} not in 0..{len(forms) - 1}")
    alpha = forms[i]
    g = divide_exact(A.F, alpha).scale(alpha.b) if alpha.b else Poly()
    ge = A.from_poly(g)
    coch = Cochain.of(A, (ge, "D"), (A.one, "E"))
    der = Derivation(A, {"x": A.zero, "y": A.zero, "D": ge, "E": A.one})
    return coch, der


def hh1_basis_check(arr: Arrangement, N: int = 8) -> dict:
    A = OreAlgebra(arr)
    reps = [partial_derivation(A, i)[0] for i in range(arr.n_lines)]
    cocycles = all(is_cocycle(c) for c in reps)
    nonzero = all(is_coboundary(c, N) is None for c in reps)
    diffs_ok = all(is_coboundary(reps[i] - reps[j], N) is None
                   for i in range(len(reps)) for j in range(i))
    dim = independent_mod_coboundaries(reps, N)
    return {"cocycles": cocycles, "non_coboundaries": nonzero, "differences_nonzero": diffs_ok,
            "span_dim": dim, "expected": arr.n_lines,
            "pass": cocycles and nonzero and diffs_ok and dim == arr.n_lines}


def quotient_complement(arr: Arrangement) -> list[tuple[int, int]]:
    """Monomials of S_{r+1} completing ``xF_x, xF_y, yF_y`` to a basis, chosen greedily."""
    from .base import X, Y, coordinates, homogeneous_basis

    ech = Echelon()
    for g in (X * arr.Fx, X * arr.Fy, Y * arr.Fy):
        ech.add(dict(enumerate(coordinates(g, arr.r + 1))))
    out = []
    for idx, mono in enumerate(homogeneous_basis(arr.r + 1)):
        if ech.add({idx: mpq(1)}):
            out.append(mono)
    return out


def catalog(A: OreAlgebra) -> dict[str, Cochain]:
    """Named cocycles, one per basis vector of HH^0 .. HH^3."""
    r = A.r
    out = {"1": Cochain(A, {(): A.one})}
    for j in range(r + 1):
        out[f"h1.D[{j}]"] = Cochain(A, {"D": A.mono(r - j, j)})
    out["h1.E"] = Cochain(A, {"E": A.one})
    out["omega2"] = omega2(A)
    comp = quotient_complement(A.arr)
    for i, j in comp:
        out[f"h2.yD[{i},{j}]"] = Cochain(A, {"yD": A.mono(i, j)})
    for lab, m in (("x", A.x), ("y", A.y)):
        out[f"h2.{lab}D.yD"] = Cochain(A, {"yD": m * A.D})
    for j in range(r + 1):
        out[f"h2.DE[{j}]"] = Cochain(A, {"DE": A.mono(r - j, j)})
    out["omega3"] = omega3(A)
    for i, j in comp:
        out[f"h3.yDE[{i},{j}]"] = Cochain(A, {"yDE": A.mono(i, j)})
    for lab, m in (("x", A.x), ("y", A.y)):
        out[f"h3.{lab}D.yDE"] = Cochain(A, {"yDE": m * A.D})
    return out
