"""Comparison maps between P and the bar resolution, cup products and brackets.

Bar chains are sums of ``a0 | a1 | ... | ap | a(p+1)`` with PBW monomials in
every slot.  We work in the normalized bar complex: a tensor with a scalar in
an interior slot is zero.  ``phi`` is also available unnormalized so the chain
map property can be checked in both complexes.

``psi_2`` is made total by a rewriting homotopy on words.  For a word
``W = P l1 l2 S`` whose leftmost descent is ``l1 > l2``,

    h(W) = -P | l2 ^ l1 | S + h(P l2 l1 S) + h(P [l1, l2] S)

and ``h`` vanishes on nondecreasing words.  Then ``psi_2(1|u|v|1) = h(uv)``
with ``u``, ``v`` read as words.  It agrees with the case table wherever the
table yields a chain map.
"""

from __future__ import annotations

from itertools import combinations, permutations
from typing import Callable, Mapping

from gmpy2 import mpq

from .base import Arrangement, Poly, divide_exact
from .errors import DegreeMismatch, NotCocycle, UncoveredShape, UnsupportedDegree
from .hochschild import (
    Cochain,
    evaluate,
    hh_d,
    is_coboundary,
    omega2,
    omega3,
    partial_derivation,
    quotient_complement,
)
from .linalg import Echelon
from .ore import ONE, OreAlgebra, OreElement, _acc, render
from .resolution import (
    LETTER_MONO,
    Chain,
    Resolution,
    all_wedges,
    nabla_chain,
    wedge,
    wedge_label,
    wedge_mul,
)

X_, Y_, D_, E_ = 0, 1, 2, 3


def _perm_sign(p) -> int:
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def word(m: tuple) -> tuple:
    """The PBW monomial ``x^i y^j D^k E^l`` as a word in letters 0..3."""
    i, j, k, l = m
    return (X_,) * i + (Y_,) * j + (D_,) * k + (E_,) * l


def _is_standard(w: tuple) -> bool:
    return all(w[t] <= w[t + 1] for t in range(len(w) - 1))


class BarChain:
    """Element of the bar resolution; keys are tuples of monomials."""

    __slots__ = ("A", "terms", "normalized")

    def __init__(self, A: OreAlgebra, terms: Mapping | None = None, normalized: bool = True):
        self.A = A
        self.normalized = normalized
        out: dict = {}
        for k, c in (terms or {}).items():
            if c and not (normalized and any(m == ONE for m in k[1:-1])):
                _acc(out, tuple(k), mpq(c))
        self.terms = out

    @classmethod
    def _raw(cls, A, terms, normalized=True):
        b = cls.__new__(cls)
        b.A, b.terms, b.normalized = A, terms, normalized
        return b

    @classmethod
    def gen(cls, A: OreAlgebra, *middle: tuple, c=1, normalized: bool = True) -> "BarChain":
        return cls(A, {(ONE,) + tuple(middle) + (ONE,): c}, normalized)

    @property
    def degree(self) -> int | None:
        ds = {len(k) - 2 for k in self.terms}
        if len(ds) > 1:
            raise DegreeMismatch("bar chain mixes degrees")
        return ds.pop() if ds else None

    def _put(self, out: dict, key: tuple, c) -> None:
        if self.normalized and any(m == ONE for m in key[1:-1]):
            return
        _acc(out, key, c)

    def __add__(self, other: "BarChain") -> "BarChain":
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return BarChain._raw(self.A, out, self.normalized)

    def __neg__(self):
        return BarChain._raw(self.A, {k: -c for k, c in self.terms.items()}, self.normalized)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = mpq(c)
        return BarChain._raw(self.A, {k: v * c for k, v in self.terms.items() if c}, self.normalized)

    def __eq__(self, other):
        return isinstance(other, BarChain) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def outer(self, a: tuple, b: tuple) -> "BarChain":
        """``a * self * b`` for monomials a, b acting on the outer slots."""
        A = self.A
        out: dict = {}
        for k, c in self.terms.items():
            for m0, c0 in A.mul_mono(a, k[0]).items():
                for m1, c1 in A.mul_mono(k[-1], b).items():
                    _acc(out, (m0,) + k[1:-1] + (m1,), c * c0 * c1)
        return BarChain._raw(A, out, self.normalized)

    def d(self) -> "BarChain":
        """The bar differential ``sum (-1)^i a0|..|a_i a_{i+1}|..``."""
        A = self.A
        out: dict = {}
        for k, c in self.terms.items():
            p = len(k) - 2
            if p == 0:
                continue
            for i in range(p + 1):
                sign = c if i % 2 == 0 else -c
                for m, cm in A.mul_mono(k[i], k[i + 1]).items():
                    self._put(out, k[:i] + (m,) + k[i + 2:], sign * cm)
        return BarChain._raw(A, out, self.normalized)

    def multiply_out(self) -> OreElement:
        """The augmentation of a degree-0 bar chain."""
        A = self.A
        out: dict = {}
        for (a, b), c in self.terms.items():
            for m, cm in A.mul_mono(a, b).items():
                _acc(out, m, c * cm)
        return OreElement._raw(A, out)

    def __str__(self):
        if not self.terms:
            return "0"
        A = self.A
        return " + ".join(
            f"{c}*(" + "|".join(render(A.mono(*m)) for m in k) + ")"
            for k, c in sorted(self.terms.items()))

    __repr__ = __str__


# phi ---------------------------------------------------------------------------
def _nabla_terms(A: OreAlgebra, F: Poly | None = None) -> list:
    """``nabla(F)`` as ``[(q1, letter, q3, c)]``."""
    return [(a, w[0], b, c) for (a, w, b), c in nabla_chain(A, F).terms.items()]


def _nabla2_terms(A: OreAlgebra) -> list:
    """``(id (x) id (x) nabla) nabla(F)`` as ``[(f1, f2, f3, f4, f5, c)]``."""
    out = []
    for q1, l1, q3, c in _nabla_terms(A):
        p3 = Poly.monomial(q3[0], q3[1])
        for f3, l2, f5, c2 in _nabla_terms(A, p3):
            out.append((q1, l1, f3, l2, f5, c * c2))
    return out


def phi(p: int, w: tuple | str, A: OreAlgebra, normalized: bool = True) -> BarChain:
    """``phi_p(1|w|1)`` in the bar resolution."""
    if isinstance(w, str):
        w = wedge(w) if w not in ("", "1") else ()
    w = tuple(w)
    if p != len(w):
        raise DegreeMismatch(f"generator {w} is not of degree {p}")
    if p > 3:
        raise UnsupportedDegree("phi is implemented up to degree 3")
    L = LETTER_MONO
    out: dict = {}
    for perm in permutations(range(p)):
        key = (ONE,) + tuple(L[w[t]] for t in perm) + (ONE,)
        _acc(out, key, mpq(_perm_sign(perm)))
    N = BarChain(A, out, normalized)
    F = {(i, j, 0, 0): c for (i, j), c in A.F.terms.items()}
    nab = _nabla_terms(A)
    extra: dict = {}
    if w == (Y_, D_):
        for q1, l, q3, c in nab:
            _acc(extra, (q1, L[l], q3, ONE), c)
        for m, c in F.items():
            _acc(extra, (m, ONE, ONE, ONE), -c)
    elif w in ((X_, Y_, D_), (Y_, D_, E_)):
        v = L[X_] if w[0] == X_ else L[E_]
        for q1, l, q3, c in nab:
            lm = L[l]
            _acc(extra, (q1, lm, q3, v, ONE), c)
            _acc(extra, (q1, lm, v, q3, ONE), -c)
            _acc(extra, (q1, v, lm, q3, ONE), c)
        for m, c in F.items():
            _acc(extra, (m, v, ONE, ONE, ONE), -c)
            _acc(extra, (m, ONE, ONE, v, ONE), -c)
    return N + BarChain(A, extra, normalized)


def phi_chain(ch: Chain, normalized: bool = True) -> BarChain:
    """Extend ``phi`` A-bilinearly to a chain of P."""
    A = ch.A
    out = BarChain(A, {}, normalized)
    for (a, w, b), c in ch.terms.items():
        if not w:
            out = out + BarChain(A, {(a, b): c}, normalized)
        else:
            out = out + phi(len(w), w, A, normalized).outer(a, b).scale(c)
    return out


def verify_phi(arr: Arrangement, normalized: bool = True) -> list[dict]:
    """``b' phi_p = phi_{p-1} d_p`` on every generator with p <= 3."""
    A = OreAlgebra(arr)
    res = Resolution(A)
    rows = []
    for p in (1, 2, 3):
        for w in all_wedges(p):
            lhs = phi(p, w, A, normalized).d()
            rhs = phi_chain(res.gen_image(w), normalized)
            rows.append({"check": "phi", "generator": wedge_label(w), "pass": lhs == rhs,
                         "normalized": normalized})
    return rows


# psi ---------------------------------------------------------------------------
class Psi:
    """Comparison map ``BA -> P`` in degrees 0, 1, 2."""

    def __init__(self, A: OreAlgebra, strict: bool = False):
        self.A = A
        self.strict = strict
        self._nf: dict = {}
        self._h: dict = {}
        self._comm = self._commutators()

    def _commutators(self) -> dict:
        A, r = self.A, self.A.r
        Fw = [(word((i, j, 0, 0)), c) for (i, j), c in A.F.terms.items()]
        return {
            (Y_, X_): [],
            (D_, X_): [],
            (D_, Y_): Fw,
            (E_, X_): [((X_,), mpq(1))],
            (E_, Y_): [((Y_,), mpq(1))],
            (E_, D_): [((D_,), mpq(r))],
        }

    def nf(self, w: tuple) -> dict:
        """Normal form of a word as ``{mono: coeff}``."""
        v = self._nf.get(w)
        if v is None:
            if not w:
                v = {ONE: mpq(1)}
            elif _is_standard(w):
                m = [0, 0, 0, 0]
                for t in w:
                    m[t] += 1
                v = {tuple(m): mpq(1)}
            else:
                head = self.nf(w[:-1])
                last = LETTER_MONO[w[-1]]
                v = {}
                for m, c in head.items():
                    for m2, c2 in self.A.mul_mono(m, last).items():
                        _acc(v, m2, c * c2)
            self._nf[w] = v
        return v

    # degree 1 -----------------------------------------------------------
    def word_psi1(self, w: tuple) -> dict:
        """``sum prefix | letter | suffix`` over the letters of a word."""
        out: dict = {}
        for t, l in enumerate(w):
            for a, ca in self.nf(w[:t]).items():
                for b, cb in self.nf(w[t + 1:]).items():
                    _acc(out, (a, (l,), b), ca * cb)
        return out

    def psi1_mono(self, m: tuple) -> Chain:
        return Chain._raw(self.A, self.word_psi1(word(m)))

    # degree 2 -----------------------------------------------------------
    def h(self, w: tuple) -> dict:
        v = self._h.get(w)
        if v is not None:
            return v
        out: dict = {}
        t = next((t for t in range(len(w) - 1) if w[t] > w[t + 1]), None)
        if t is not None:
            P, l1, l2, S = w[:t], w[t], w[t + 1], w[t + 2:]
            for a, ca in self.nf(P).items():
                for b, cb in self.nf(S).items():
                    _acc(out, (a, (l2, l1), b), -ca * cb)
            for k, c in self.h(P + (l2, l1) + S).items():
                _acc(out, k, c)
            for cw, cc in self._comm[(l1, l2)]:
                for k, c in self.h(P + cw + S).items():
                    _acc(out, k, cc * c)
        self._h[w] = out
        return out

    def psi2_pair(self, u: tuple, v: tuple) -> Chain:
        """``psi_2(1|u|v|1)`` for PBW monomials ``u``, ``v``."""
        if u == ONE or v == ONE:
            return Chain(self.A)
        if self.strict:
            return self.table_psi2(u, v)
        return Chain._raw(self.A, self.h(word(u) + word(v)))

    def table_psi2(self, u: tuple, v: tuple) -> Chain:
        """The case table, raising :class:`UncoveredShape` outside it."""
        A, r = self.A, self.A.r
        wu, wv = word(u), word(v)
        if _is_standard(wu + wv):
            return Chain(A)
        yl, xl, El = LETTER_MONO[Y_], LETTER_MONO[X_], LETTER_MONO[E_]

        def sweedler(m, make):
            out: dict = {}
            for (a, w, b), c in self.word_psi1(word(m)).items():
                key = make(a, w[0], b)
                if key is not None:
                    (a2, ww, b2), s = key
                    _acc(out, (a2, ww, b2), s * c)
            return Chain._raw(A, out)

        def wedge_with(first, second):
            s, ww = wedge_mul((first,), (second,))
            return s, ww

        if u == (0, 1, 1, 0) and v == yl:
            ch = Chain.tensor(A.y, wedge("yD"), A.one).scale(-1)
            out: dict = {}
            for (a, w, b), c in nabla_chain(A).terms.items():
                s, ww = wedge_with(w[0], Y_)
                if s:
                    _acc(out, (a, ww, b), -s * c)
            return ch + Chain._raw(A, out)
        if u == (0, r + 1, 0, 1) and v == yl:
            return Chain.tensor(A.mono(0, r + 1), wedge("yE"), A.one).scale(-1)
        if u == El:
            def mk(a, l, b):
                s, ww = wedge_with(l, E_)
                return ((a, ww, b), -s) if s else None
            return sweedler(v, mk)
        if sum(u) == 1 and sum(v) == 1:
            lu, lv = wu[0], wv[0]
            s, ww = wedge_mul((lv,), (lu,))
            return Chain._raw(A, {(ONE, ww, ONE): mpq(-s)})
        if v == xl:
            def mk(a, l, b):
                s, ww = wedge_with(X_, l)
                return ((a, ww, b), -s) if s else None
            return sweedler(u, mk)
        raise UncoveredShape(
            f"psi_2 case table does not cover 1|{render(A.mono(*u))}|{render(A.mono(*v))}|1")

    def __call__(self, t: BarChain) -> Chain:
        A = self.A
        out = Chain(A)
        for k, c in t.terms.items():
            p = len(k) - 2
            a, b = A.mono(*k[0]), A.mono(*k[-1])
            if p == 0:
                piece = Chain._raw(A, {(ONE, (), ONE): mpq(1)})
            elif p == 1:
                piece = self.psi1_mono(k[1])
            elif p == 2:
                piece = self.psi2_pair(k[1], k[2])
            else:
                raise UnsupportedDegree("psi is implemented up to degree 2")
            out = out + piece.lmul(a).rmul(b).scale(c)
        return out


def verify_psi(A: OreAlgebra, pairs, psi: Psi | None = None) -> list[dict]:
    """``d_2 psi_2 = psi_1 b'`` on ``1|u|v|1`` for the given monomial pairs."""
    psi = psi or Psi(A)
    res = Resolution(A)
    rows = []
    for u, v in pairs:
        t = BarChain.gen(A, u, v)
        lhs = res.d(psi(t)) if psi(t) else Chain(A)
        rhs = psi(t.d())
        rows.append({"check": "psi", "u": render(A.mono(*u)), "v": render(A.mono(*v)),
                     "pass": lhs == rhs})
    return rows


# diagonal ----------------------------------------------------------------------
class TensorChain:
    """Element of ``P (x)_A P``; keys ``(a, w1, m, w2, b)``."""

    __slots__ = ("A", "terms")

    def __init__(self, A, terms=None):
        self.A = A
        self.terms = {k: mpq(c) for k, c in (terms or {}).items() if c}

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        t = TensorChain(self.A)
        t.terms = out
        return t

    def __eq__(self, other):
        return isinstance(other, TensorChain) and self.terms == other.terms

    def component(self, p: int, q: int) -> "TensorChain":
        return TensorChain(self.A, {k: c for k, c in self.terms.items()
                                    if len(k[1]) == p and len(k[3]) == q})

    def outer(self, a: tuple, b: tuple) -> "TensorChain":
        A = self.A
        out: dict = {}
        for (x, w1, m, w2, y), c in self.terms.items():
            for m0, c0 in A.mul_mono(a, x).items():
                for m1, c1 in A.mul_mono(y, b).items():
                    _acc(out, (m0, w1, m, w2, m1), c * c0 * c1)
        t = TensorChain(A)
        t.terms = out
        return t


def delta(w: tuple | str, A: OreAlgebra) -> TensorChain:
    """The diagonal ``Delta = Delta_K + Delta_N`` on the generator ``1|w|1``."""
    if isinstance(w, str):
        w = wedge(w) if w not in ("", "1") else ()
    w = tuple(w)
    p = len(w)
    out: dict = {}
    for k in range(p + 1):
        for left in combinations(range(p), k):
            right = tuple(t for t in range(p) if t not in left)
            s = _perm_sign(left + right)
            _acc(out, (ONE, tuple(w[t] for t in left), ONE, tuple(w[t] for t in right), ONE),
                 mpq(s))
    if w == (Y_, D_):
        for f1, l1, f3, l2, f5, c in _nabla2_terms(A):
            _acc(out, (f1, (l1,), f3, (l2,), f5), c)
    else:
        # each entry: sign, (before, after) letters for the left factor, same for the right
        shapes = {
            (Y_, D_, E_): [(-1, ((), (E_,)), ((), ())), (1, ((), ()), ((), (E_,)))],
            # not zero: the x-correction below is forced by the chain map condition
            (X_, Y_, D_): [(1, ((X_,), ()), ((), ())), (-1, ((), ()), ((X_,), ()))],
            (X_, Y_, D_, E_): [(-1, ((X_,), (E_,)), ((), ())), (1, ((X_,), ()), ((), (E_,))),
                               (-1, ((), (E_,)), ((X_,), ())), (-1, ((), ()), ((X_,), (E_,)))],
        }.get(w, [])
        for f1, l1, f3, l2, f5, c in _nabla2_terms(A) if shapes else ():
            for sg, e1, e2 in shapes:
                s1, w1 = _insert(l1, e1)
                s2, w2 = _insert(l2, e2)
                if s1 and s2:
                    _acc(out, (f1, w1, f3, w2, f5), sg * s1 * s2 * c)
    return TensorChain(A, out)


def _insert(letter: int, around: tuple) -> tuple[int, tuple]:
    s1, w = wedge_mul(around[0], (letter,))
    if not s1:
        return 0, ()
    s2, w = wedge_mul(w, around[1])
    return s1 * s2, w


def _d_tensor(t: TensorChain, res: Resolution) -> TensorChain:
    """``d (x) 1 + (-1)^p 1 (x) d`` on ``P (x)_A P`` (augmentation not applied)."""
    A = t.A
    out: dict = {}
    for (a, w1, m, w2, b), c in t.terms.items():
        if w1:
            for (a2, w, b2), c2 in res.gen_image(w1).terms.items():
                for ma, ca in A.mul_mono(a, a2).items():
                    for mm, cm in A.mul_mono(b2, m).items():
                        _acc(out, (ma, w, mm, w2, b), c * c2 * ca * cm)
        if w2:
            sign = -1 if len(w1) % 2 else 1
            for (a2, w, b2), c2 in res.gen_image(w2).terms.items():
                for mm, cm in A.mul_mono(m, a2).items():
                    for mb, cb in A.mul_mono(b2, b).items():
                        _acc(out, (a, w1, mm, w, mb), sign * c * c2 * cm * cb)
    r = TensorChain(A)
    r.terms = out
    return r


def verify_delta(arr: Arrangement) -> list[dict]:
    A = OreAlgebra(arr)
    res = Resolution(A)
    rows = []
    for p in range(1, 5):
        for w in all_wedges(p):
            lhs = _d_tensor(delta(w, A), res)
            rhs = TensorChain(A)
            for (a, w2, b), c in res.gen_image(w).terms.items():
                piece = delta(w2, A).outer(a, b)
                piece.terms = {k: v * c for k, v in piece.terms.items()}
                rhs = rhs + piece
            # degree-0 parts of d (x) 1 land in P_0 (x) P_q and must match too
            rows.append({"check": "delta", "generator": wedge_label(w), "pass": lhs == rhs})
    return rows


# cup -----------------------------------------------------------------------------
def cup(alpha: Cochain, beta: Cochain, strict: bool = False) -> Cochain:
    """``(alpha (x) beta) o Delta_{p,q}``."""
    A = alpha.A
    if strict and (hh_d(None, alpha) or hh_d(None, beta)):
        raise NotCocycle("cup expects cocycles")
    out = Cochain(A)
    for p, a_part in _by_degree(alpha).items():
        for q, b_part in _by_degree(beta).items():
            if p + q > 4:
                continue
            terms = {}
            for w in all_wedges(p + q):
                val = A.zero
                for (x, w1, m, w2, y), c in delta(w, A).terms.items():
                    if len(w1) != p:
                        continue
                    f, g = a_part[w1], b_part[w2]
                    if not f or not g:
                        continue
                    val = val + (A.mono(*x) * f * A.mono(*m) * g * A.mono(*y)).scale(c)
                if val:
                    terms[w] = val
            out = out + Cochain(A, terms)
    return out


def _by_degree(c: Cochain) -> dict[int, Cochain]:
    out: dict = {}
    for w, a in c.terms.items():
        out.setdefault(len(w), {})[w] = a
    return {p: Cochain(c.A, t) for p, t in out.items()}


# brackets ------------------------------------------------------------------------
class BarCochain:
    """``alpha o psi_p`` as a multilinear function of monomials."""

    def __init__(self, alpha: Cochain, psi: Psi):
        self.alpha = alpha
        self.psi = psi
        self.p = alpha.degree()
        self._cache: dict = {}

    def __call__(self, *monos: tuple) -> OreElement:
        if len(monos) != self.p:
            raise DegreeMismatch("wrong number of arguments")
        v = self._cache.get(monos)
        if v is None:
            A = self.alpha.A
            if self.p == 0:
                v = self.alpha[()]
            elif any(m == ONE for m in monos):
                v = A.zero
            else:
                v = evaluate(self.alpha, self.psi(BarChain.gen(A, *monos)))
            self._cache[monos] = v
        return v


def compose_diamond(f: BarCochain, g: BarCochain, args: tuple) -> OreElement:
    """``(f <> g)(a_1, ..., a_n)`` with the insertion signs ``(-1)^{(q-1)(i-1)}``."""
    A = f.alpha.A
    p, q = f.p, g.p
    out = A.zero
    if p == 0:
        return out
    for i in range(p):
        sign = -1 if ((q - 1) * i) % 2 else 1
        inner = g(*args[i:i + q])
        for m, c in inner.terms.items():
            val = f(*(args[:i] + (m,) + args[i + q:]))
            if val:
                out = out + val.scale(sign * c)
    return out


def bracket_bar(alpha: Cochain, beta: Cochain, psi: Psi | None = None) -> Cochain:
    """``[alpha~, beta~] o phi_{p+q-1}`` through the bar resolution."""
    A = alpha.A
    p, q = alpha.degree(), beta.degree()
    n = p + q - 1
    if n > 3 or max(p, q) > 2:
        raise UnsupportedDegree("the bar route needs psi_p with p <= 2 and p + q - 1 <= 3")
    if n < 0:
        return Cochain(A)
    psi = psi or Psi(A)
    fa, fb = BarCochain(alpha, psi), BarCochain(beta, psi)
    sign = -1 if ((p - 1) * (q - 1)) % 2 else 1
    terms = {}
    for w in all_wedges(n):
        val = A.zero
        for k, c in phi(n, w, A).terms.items():
            args = k[1:-1]
            v = compose_diamond(fa, fb, args) - compose_diamond(fb, fa, args).scale(sign)
            if v:
                val = val + (A.mono(*k[0]) * v * A.mono(*k[-1])).scale(c)
        if val:
            terms[w] = val
    return Cochain(A, terms)


def _derivation_data(alpha: Cochain) -> tuple[Poly, mpq]:
    A = alpha.A
    if alpha.degree() != 1 or alpha["x"] or alpha["y"]:
        raise UncoveredShape("the derivation route needs a cochain u (x) D^ + lambda (x) E^")
    u, lam = alpha["D"], alpha["E"]
    if not u.in_S() or not lam.in_S() or (lam and lam.to_poly().degree() != 0):
        raise UncoveredShape("the derivation route needs u in S and a scalar lambda")
    return u.to_poly(), lam.constant()


def derivation_lift(alpha: Cochain, w: tuple) -> Chain:
    """Lift of the derivation ``x, y -> 0, D -> u, E -> lambda`` to ``1|w|1``.

    The D letter is replaced in place by ``nabla(u)``; generators without D go to 0.
    """
    A = alpha.A
    u, _ = _derivation_data(alpha)
    if D_ not in w:
        return Chain(A)
    pos = w.index(D_)
    out: dict = {}
    for (a, l, b), c in nabla_chain(A, u).terms.items():
        seq = w[:pos] + l + w[pos + 1:]
        if len(set(seq)) < len(seq):
            continue
        s = _perm_sign(seq)
        _acc(out, (a, tuple(sorted(seq)), b), s * c)
    return Chain._raw(A, out)


def _derivation(alpha: Cochain):
    from .ore import Derivation

    A = alpha.A
    u, lam = _derivation_data(alpha)
    return Derivation(A, {"x": A.zero, "y": A.zero, "D": A.from_poly(u), "E": A.scalar(lam)})


def twisted_lift(alpha: Cochain, ch: Chain) -> Chain:
    """``delta_P(a|w|b) = delta(a)|w|b + a delta_P(1|w|1) b + a|w|delta(b)``."""
    A = alpha.A
    der = _derivation(alpha)
    out = Chain(A)
    for (a, w, b), c in ch.terms.items():
        am, bm = A.mono(*a), A.mono(*b)
        out = out + Chain.tensor(der(am), w, bm).scale(c)
        out = out + Chain.tensor(am, w, der(bm)).scale(c)
        if w:
            out = out + derivation_lift(alpha, w).lmul(am).rmul(bm).scale(c)
    return out


def verify_derivation_lift(alpha: Cochain) -> list[dict]:
    """``d delta_P = delta_P d`` on every generator."""
    A = alpha.A
    res = Resolution(A)
    rows = []
    for p in range(1, 5):
        for w in all_wedges(p):
            lhs = res.d(derivation_lift(alpha, w)) if derivation_lift(alpha, w) else Chain(A)
            rhs = twisted_lift(alpha, res.gen_image(w))
            rows.append({"check": "derivation_lift", "generator": wedge_label(w),
                         "pass": lhs == rhs})
    return rows


def bracket_derivation(alpha: Cochain, beta: Cochain) -> Cochain:
    """``[delta, beta] = delta o beta - beta o delta_P`` for a 1-cochain ``delta``."""
    A = alpha.A
    der = _derivation(alpha)
    terms = {}
    for w, b in beta.terms.items():
        v = der(b) - evaluate(beta, derivation_lift(alpha, w))
        if v:
            terms[w] = v
    for p in beta.degrees():
        for w in all_wedges(p):
            if w in beta.terms:
                continue
            v = -evaluate(beta, derivation_lift(alpha, w))
            if v:
                terms[w] = v
    return Cochain(A, terms)


def bracket(alpha: Cochain, beta: Cochain, route: str = "auto") -> Cochain:
    """Gerstenhaber bracket of two homogeneous cochains on P.

    ``route`` is ``"bar"``, ``"derivation"`` or ``"auto"`` (bar when both degrees
    are at most 2, otherwise the derivation lift for a degree-1 argument).
    """
    A = alpha.A
    if not alpha or not beta:
        return Cochain(A)
    p, q = alpha.degree(), beta.degree()
    if p == 0 or q == 0:
        return Cochain(A)
    if route == "auto":
        route = "bar" if max(p, q) <= 2 else "derivation"
    if route == "bar":
        return bracket_bar(alpha, beta)
    if route == "derivation":
        if p == 1:
            return bracket_derivation(alpha, beta)
        if q == 1:
            sign = -1 if ((p - 1) * (q - 1)) % 2 else 1
            return bracket_derivation(beta, alpha).scale(-sign)
        raise UnsupportedDegree("the derivation route needs a degree-1 argument")
    raise ValueError(f"unknown route {route!r}")


def reduce_mod_coboundary(c: Cochain, expected: Cochain, N: int = 8) -> tuple[bool, Cochain | None]:
    """Whether ``c - expected`` is a coboundary, with the witness."""
    diff = c - expected
    if not diff:
        return True, Cochain(c.A)
    wit = is_coboundary(diff, N)
    return wit is not None, wit


# Orlik-Solomon -------------------------------------------------------------------
def os_algebra_dims(n_gens: int, max_degree: int | None = None) -> list[int]:
    """Dimensions of the exterior algebra on ``n`` generators modulo the triple relations."""
    max_degree = n_gens if max_degree is None else max_degree
    triples = list(combinations(range(n_gens), 3))
    dims = []
    for d in range(max_degree + 1):
        basis = list(combinations(range(n_gens), d))
        if d < 2:
            dims.append(len(basis))
            continue
        ech = Echelon()
        # relation (w_i w_j + w_j w_k + w_k w_i) times a monomial of degree d - 2
        for i, j, k in triples:
            for mono in combinations(range(n_gens), d - 2):
                vec: dict = {}
                for a, b in ((i, j), (j, k), (k, i)):
                    seq = (a, b) + mono
                    if len(set(seq)) < len(seq):
                        continue
                    _acc(vec, tuple(sorted(seq)), mpq(_perm_sign(seq)))
                if vec:
                    ech.add(vec)
        dims.append(len(basis) - len(ech))
    return dims


def det_formula(arr: Arrangement, i: int, j: int) -> Poly:
    """``-det[[a_ix, a_jx], [a_iy, a_jy]] * Q / (a_i a_j)``."""
    ai, aj = arr.forms[i], arr.forms[j]
    det = ai.a * aj.b - aj.a * ai.b
    if not det:
        return Poly()
    return divide_exact(divide_exact(arr.Q, ai), aj).scale(-det)


def orlik_solomon_check(arr: Arrangement) -> dict:
    A = OreAlgebra(arr)
    n = arr.n_lines
    ders = [partial_derivation(A, i)[0] for i in range(n)]
    cups = {}
    formula_ok = True
    for i in range(n):
        for j in range(n):
            c = cup(ders[i], ders[j])
            cups[(i, j)] = c
            expect = Cochain(A, {"DE": A.from_poly(det_formula(arr, i, j))})
            formula_ok &= c == expect
    triples_ok = all(
        not (cups[(i, j)] + cups[(j, k)] + cups[(k, i)])
        for i, j, k in combinations(range(n), 3))
    dims = os_algebra_dims(n, 4)
    expected = [1, n, n - 1, 0, 0]
    span = [cups[(i, i + 1)] for i in range(n - 1)]
    from .hochschild import independent_mod_coboundaries

    h2 = independent_mod_coboundaries(span) if span else 0
    return {"triples": len(list(combinations(range(n), 3))), "triples_hold": triples_ok,
            "cup_formula": formula_ok, "dims": dims, "expected": expected,
            "image_dim_in_HH2": h2,
            "pass": triples_ok and formula_ok and dims == expected and h2 == n - 1}


def three_from_two(arr: Arrangement, coeffs: list) -> dict:
    """Rank of ``zeta -> delta ⌣ zeta`` on the complement ``HH^2(A)'``.

    ``delta = sum coeffs[i] * partial_i``; the rank is 0 or ``r + 2`` according
    to whether the coefficients sum to 0.
    """
    from .hochschild import independent_mod_coboundaries

    A = OreAlgebra(arr)
    delta_c = Cochain(A)
    for i, c in enumerate(coeffs):
        if c:
            delta_c = delta_c + partial_derivation(A, i)[0].scale(c)
    comp = [omega2(A)]
    comp += [Cochain(A, {"yD": A.mono(i, j)}) for i, j in quotient_complement(arr)]
    comp += [Cochain(A, {"yD": m * A.D}) for m in (A.x, A.y)]
    images = [cup(delta_c, z) for z in comp]
    nonzero = [im for im in images if im]
    rank = independent_mod_coboundaries(nonzero) if nonzero else 0
    total = sum(mpq(c) for c in coeffs)
    expected = 0 if total == 0 else len(comp)
    return {"sum": str(total), "rank": rank, "expected": expected, "dim": len(comp),
            "pass": rank == expected}


def leibniz_check(alpha: Cochain, beta: Cochain, gamma: Cochain, N: int = 8) -> dict:
    """``[a, b ⌣ c] = [a, b] ⌣ c + (-1)^{(p-1)q} b ⌣ [a, c]`` modulo coboundaries."""
    p, q = alpha.degree(), beta.degree()
    lhs = bracket(alpha, cup(beta, gamma))
    sign = -1 if ((p - 1) * q) % 2 else 1
    rhs = cup(bracket(alpha, beta), gamma) + cup(beta, bracket(alpha, gamma)).scale(sign)
    ok, wit = reduce_mod_coboundary(lhs, rhs, N)
    return {"lhs": str(lhs), "rhs": str(rhs), "pass": ok,
            "witness": None if wit is None else str(wit)}
