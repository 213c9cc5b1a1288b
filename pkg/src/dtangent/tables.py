"""Cup and bracket tables of HH(A) checked on explicit representatives.

Every entry is a dict ``{"table", "entry", "pass", "lhs", "rhs", "witness"}``.
Entries stated in cohomology compare modulo coboundaries; the witness is the
cochain ``h`` with ``lhs - rhs = d(h)`` (``None`` for exact comparisons).
"""

from __future__ import annotations

import random
from itertools import combinations

from .base import Arrangement, Poly, Y, homogeneous_basis
from .gerstenhaber import bracket, cup, det_formula, reduce_mod_coboundary
from .hochschild import (
    Cochain,
    catalog,
    is_cocycle,
    omega2,
    omega3,
    partial_derivation,
    quotient_complement,
)
from .ore import OreAlgebra


def _entry(table: str, label: str, lhs: Cochain, rhs: Cochain, exact: bool, N: int) -> dict:
    if exact:
        ok, wit = lhs == rhs, None
    else:
        ok, wit = reduce_mod_coboundary(lhs, rhs, N)
        if wit is not None and not wit:
            wit = None
    return {"table": table, "entry": label, "pass": bool(ok), "lhs": str(lhs),
            "rhs": str(rhs), "witness": None if wit is None else str(wit)}


def _random_poly(rng: random.Random, degree: int, lo: int = -3, hi: int = 3) -> Poly:
    p = Poly({m: rng.randint(lo, hi) for m in homogeneous_basis(degree)})
    return p if p else Poly.monomial(0, degree)


def sample_parameters(arr: Arrangement, seed: int = 0) -> dict:
    """Seeded choice of ``u in S_r``, ``lambda``, ``v in S_{r+1}``, ``w in S_1`` and a second pair."""
    rng = random.Random(seed)
    r = arr.r
    return {"u": _random_poly(rng, r), "lam": rng.randint(-5, 5) or 1,
            "v": _random_poly(rng, r + 1), "w": _random_poly(rng, 1),
            "u2": _random_poly(rng, r),
            "v2": _random_poly(rng, r + 1), "w2": _random_poly(rng, 1)}


def split_u(u: Poly, r: int) -> tuple:
    """``u = mu y^r + x ubar``."""
    mu = u.coeff(0, r)
    ubar = Poly({(i - 1, j): c for (i, j), c in u.terms.items() if i})
    return mu, ubar


def cup_table(arr: Arrangement, N: int = 8) -> list[dict]:
    A = OreAlgebra(arr)
    r = arr.r
    E_ = Cochain(A, {"E": A.one})
    Sr = [A.mono(i, j) for i, j in homogeneous_basis(r)]
    rows = []
    for a, b in combinations(range(len(Sr)), 2):
        rows.append(_entry("cup", f"S_r D^ ⌣ S_r D^ ({a},{b})",
                           cup(Cochain(A, {"D": Sr[a]}), Cochain(A, {"D": Sr[b]})),
                           Cochain(A), True, N))
    for k, phi in enumerate(Sr):
        rows.append(_entry("cup", f"phi D^ ⌣ E^ ({k})", cup(Cochain(A, {"D": phi}), E_),
                           Cochain(A, {"DE": phi}), True, N))
    h2 = {k: c for k, c in catalog(A).items() if c.degree() == 2}
    for k, phi in enumerate(Sr):
        for name, c in h2.items():
            rows.append(_entry("cup", f"S_r D^ ⌣ HH2 ({k}, {name})",
                               cup(Cochain(A, {"D": phi}), c), Cochain(A), False, N))
    rows.append(_entry("cup", "E^ ⌣ omega2", cup(E_, omega2(A)), omega3(A), True, N))
    for i, j in quotient_complement(arr):
        kappa = A.mono(i, j)
        rows.append(_entry("cup", f"E^ ⌣ kappa y^D^ (x^{i}y^{j})",
                           cup(E_, Cochain(A, {"yD": kappa})),
                           Cochain(A, {"yDE": kappa}), True, N))
    for lab, m in (("x", A.x), ("y", A.y)):
        rows.append(_entry("cup", f"E^ ⌣ {lab}D y^D^",
                           cup(E_, Cochain(A, {"yD": m * A.D})),
                           Cochain(A, {"yDE": m * A.D}), True, N))
    for k, phi in enumerate(Sr):
        rows.append(_entry("cup", f"E^ ⌣ S_r D^E^ ({k})", cup(E_, Cochain(A, {"DE": phi})),
                           Cochain(A), True, N))
    parts = [partial_derivation(A, i)[0] for i in range(arr.n_lines)]
    for i in range(arr.n_lines):
        for j in range(arr.n_lines):
            rows.append(_entry("cup", f"d_{i} ⌣ d_{j}", cup(parts[i], parts[j]),
                               Cochain(A, {"DE": A.from_poly(det_formula(arr, i, j))}),
                               True, N))
    return rows


def bracket_table(arr: Arrangement, N: int = 8, seed: int = 0,
                  include_w2w2: bool = True) -> list[dict]:
    A = OreAlgebra(arr)
    r = arr.r
    P = sample_parameters(arr, seed)
    u, lam, v, w = P["u"], P["lam"], P["v"], P["w"]
    mu, ubar = split_u(u, r)
    fp = A.from_poly
    zero = Cochain(A)
    h1 = Cochain(A, {"D": fp(u), "E": lam})
    h1b = Cochain(A, {"D": fp(P["u2"]), "E": 1})
    uDE = Cochain(A, {"DE": fp(u)})
    u2DE = Cochain(A, {"DE": fp(P["u2"])})
    vw = fp(v) + fp(w) * A.D
    vw2 = fp(P["v2"]) + fp(P["w2"]) * A.D
    K = ((Y * arr.Fx).scale(mu - lam) + (Y * arr.Fbar).scale(mu) - Y * Y * ubar)
    K0 = (Y * arr.Fx).scale(mu) + (Y * arr.Fbar).scale(mu) - Y * Y * ubar
    uw = fp(u) * fp(w)
    rows = []
    add = lambda label, lhs, rhs: rows.append(_entry("bracket", label, lhs, rhs, False, N))

    for name, c in catalog(A).items():
        if name != "1":
            add(f"[1, {name}]", bracket(catalog(A)["1"], c), zero)
    parts = [partial_derivation(A, i)[0] for i in range(arr.n_lines)]
    for i, j in combinations(range(arr.n_lines), 2):
        add(f"[d_{i}, d_{j}]", bracket(parts[i], parts[j], "bar"), zero)
    add("[uD^+lE^, u'D^+E^]", bracket(h1, h1b, "bar"), zero)
    add("[uD^+lE^, u'D^E^]", bracket(h1, u2DE), zero)
    add("[uD^+lE^, (v+wD) y^D^]", bracket(h1, Cochain(A, {"yD": vw})),
        Cochain(A, {"yD": uw}))
    add("[uD^+lE^, omega2]", bracket(h1, omega2(A)), Cochain(A, {"yD": fp(K)}))
    add("[uD^+lE^, (v+wD) y^D^E^]", bracket(h1, Cochain(A, {"yDE": vw})),
        Cochain(A, {"yDE": uw}))
    add("[uD^+lE^, omega3]", bracket(h1, omega3(A)), Cochain(A, {"yDE": fp(K)}))
    add("[uD^E^, u'D^E^]", bracket(uDE, u2DE), zero)
    add("[uD^E^, (v+wD) y^D^]", bracket(uDE, Cochain(A, {"yD": vw})),
        Cochain(A, {"yDE": uw}))
    add("[uD^E^, omega2]", bracket(uDE, omega2(A)), Cochain(A, {"yDE": fp(K0)}))
    add("[(v+wD) y^D^, (v'+w'D) y^D^]",
        bracket(Cochain(A, {"yD": vw}), Cochain(A, {"yD": vw2})), zero)
    add("[(v+wD) y^D^, omega2]", bracket(Cochain(A, {"yD": vw}), omega2(A)), zero)
    if include_w2w2:
        w2w2 = bracket(omega2(A), omega2(A))
        literal = Cochain(A, {"xyD": fp((Y * Y * arr.Fbar).scale(2)) * A.E})
        rows.append(_entry("bracket", "[omega2, omega2] = 2y^2 Fbar E x^y^D^", w2w2, literal,
                           True, N))
        add("[omega2, omega2]", w2w2, zero)
    return rows


def cocycle_inputs(arr: Arrangement, seed: int = 0) -> bool:
    """All sampled bracket arguments are cocycles."""
    A = OreAlgebra(arr)
    P = sample_parameters(arr, seed)
    fp = A.from_poly
    vw = fp(P["v"]) + fp(P["w"]) * A.D
    items = [Cochain(A, {"D": fp(P["u"]), "E": P["lam"]}), Cochain(A, {"DE": fp(P["u"])}),
             Cochain(A, {"yD": vw}), Cochain(A, {"yDE": vw})]
    return all(is_cocycle(c) for c in items)
