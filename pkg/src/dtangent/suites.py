"""Verification batteries, one per module, run by the command-line tool.

A suite returns a list of checks ``{"name": str, "pass": bool, "detail": ...}``
with JSON-serialisable details.  Randomised inputs come from ``random.Random(seed)``
so identical settings give identical reports.
"""

from __future__ import annotations

import random
import sys
from dataclasses import dataclass
from typing import Callable

from gmpy2 import mpq

from .base import (
    Arrangement,
    Poly,
    X,
    Y,
    euler_defect,
    homogeneous_basis,
    lemma_indep_rank,
    quotient_basis_check,
)

SUITE_ORDER = ("base", "ore", "resolution", "hochschild", "gerstenhaber", "symmetry")


@dataclass
class Settings:
    window: int = 8
    depth: int = 4
    seed: int = 0
    progress: bool = False


def _check(name: str, ok, detail=None) -> dict:
    return {"name": name, "pass": bool(ok), "detail": detail}


def _failed(rows: list[dict], key: str = "generator") -> list:
    return [str(r.get(key, r.get("entry", "?"))) for r in rows if not r["pass"]]


def _log(cfg: Settings, msg: str) -> None:
    if cfg.progress:
        print(f"[dtangent] {msg}", file=sys.stderr, flush=True)


def random_poly(rng: random.Random, degree: int, lo: int = -4, hi: int = 4) -> Poly:
    p = Poly({m: rng.randint(lo, hi) for m in homogeneous_basis(degree)})
    return p if p else Poly.monomial(degree, 0)


def expected_hh_dims(r: int) -> list[int]:
    return [1, r + 2, 2 * r + 3, r + 2, 0]


# suites ---------------------------------------------------------------------------
def suite_base(arr: Arrangement, cfg: Settings) -> list[dict]:
    r = arr.r
    return [
        _check("F normalised", arr.F.coeff(0, r + 1) == 1 and arr.F.degree() == r + 1,
               str(arr.F)),
        _check("F = x Fbar + y^(r+1)", X * arr.Fbar + Poly.monomial(0, r + 1) == arr.F),
        _check("Q = x F", arr.Q == X * arr.F),
        _check("Euler identity x F_x + y F_y = (r+1) F", not euler_defect(arr)),
        _check("F / alpha_i independent in S_r", quotient_basis_check(arr)),
        _check("alpha F_x + beta F_y injective on S_1 x S_1", lemma_indep_rank(arr) == 4),
    ]


def suite_ore(arr: Arrangement, cfg: Settings) -> list[dict]:
    from .ore import OreAlgebra, commutator, operator_oracle, parse, relation_pairs, render

    A = OreAlgebra(arr)
    rel = [f"[{g},{h}]" for g, h, v in relation_pairs(A) if commutator(A.gen(g), A.gen(h)) != v]
    depth = min(cfg.depth, 6)
    _log(cfg, f"ore: operator oracle up to exponent sum {depth}")
    orc = operator_oracle(A, max_sum=depth, max_degree=10)
    rng = random.Random(cfg.seed)
    elems = [A.mono(rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 1), rng.randint(0, 2),
                    rng.randint(-3, 3) or 1) for _ in range(6)]
    roundtrip = all(parse(A, render(e)) == e for e in elems)
    assoc = all((a * b) * c == a * (b * c) for a in elems[:3] for b in elems[2:5]
                for c in elems[3:])
    return [
        _check("defining relations", not rel, rel),
        _check("product agrees with operator composition", orc["pass"],
               {"pairs": orc["pairs"], "checks": orc["checks"],
                "failures": orc["n_failures"]}),
        _check("associativity on sampled elements", assoc),
        _check("render/parse round trip", roundtrip),
    ]


def suite_resolution(arr: Arrangement, cfg: Settings) -> list[dict]:
    from .resolution import (
        DualResolution,
        Resolution,
        all_wedges,
        ext_one_dim,
        transposed_dual_image,
        verify_complex,
        verify_cy_chain_iso,
    )
    from .ore import OreAlgebra

    A = OreAlgebra(arr)
    res, dual = Resolution(A), DualResolution(A)
    cx = verify_complex(arr, res)
    tr = [w for p in range(4) for w in all_wedges(p)
          if dual.gen_image(w) != transposed_dual_image(res, w)]
    cy = verify_cy_chain_iso(arr)
    rng = random.Random(cfg.seed)
    lams = [mpq(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(3)]
    r = arr.r
    ext = {str(lam): ext_one_dim(lam, lam + r + 2, arr) for lam in lams}
    generic = {str(lam): ext_one_dim(lam, lam + mpq(1, 2), arr) for lam in lams}
    return [
        _check("d o d = 0 on all generators", not _failed(cx), _failed(cx)),
        _check("dual differential is the transpose", not tr, [str(w) for w in tr]),
        _check("Calabi-Yau chain map squares commute", not _failed(cy), _failed(cy)),
        _check("Ext(M_l, M_{l+r+2}) = (0,0,0,1,1)",
               all(v == [0, 0, 0, 1, 1] for v in ext.values()), ext),
        _check("Ext(M_l, M_{l+1/2}) = 0", all(v == [0] * 5 for v in generic.values()),
               generic),
    ]


def suite_hochschild(arr: Arrangement, cfg: Settings) -> list[dict]:
    from .hochschild import (
        Cochain,
        catalog,
        cohomology_dims,
        euler_gamma,
        hh1_basis_check,
        hh_d,
        hh_d_via_resolution,
        homotopy_s,
        is_coboundary,
        is_cocycle,
    )
    from .ore import OreAlgebra, pbw_monomials
    from .resolution import all_wedges

    A = OreAlgebra(arr)
    N, r = cfg.window, arr.r
    _log(cfg, f"hochschild: window {N}")
    dims = cohomology_dims(arr, N)
    other = {n: cohomology_dims(arr, N, n=n) for n in (-1, 1)}
    hh1 = hh1_basis_check(arr, N)
    cat = catalog(A)
    bad_cocycle = [k for k, c in cat.items() if not is_cocycle(c)]
    bad_nonzero = [k for k, c in cat.items() if is_coboundary(c, N) is not None]
    depth = min(cfg.depth, 3)
    bad_h = []
    for m in pbw_monomials(depth):
        for p in range(5):
            for w in all_wedges(p):
                c = Cochain(A, {w: A.mono(*m)})
                g = hh_d(None, homotopy_s(None, c)) + homotopy_s(None, hh_d(None, c))
                if g != euler_gamma(c):
                    bad_h.append(f"{m} {w}")
    rng = random.Random(cfg.seed)
    bad_t = []
    for p in range(4):
        c = Cochain(A)
        for w in all_wedges(p):
            c = c + Cochain(A, {w: A.mono(rng.randint(0, 2), rng.randint(0, 2),
                                          rng.randint(0, 1), rng.randint(0, 2),
                                          rng.randint(-3, 3))})
        if hh_d(p, c) != hh_d_via_resolution(c) or (p < 3 and hh_d(None, hh_d(p, c))):
            bad_t.append(p)
    return [
        _check("HH dims in internal degree 0", dims == expected_hh_dims(r),
               {"window": N, "dims": dims, "expected": expected_hh_dims(r)}),
        _check("internal degrees +-1 are acyclic", all(v == [0] * 5 for v in other.values()),
               {str(k): v for k, v in other.items()}),
        _check("HH1 basis of partial derivations", hh1["pass"],
               {k: v for k, v in hh1.items() if k != "pass"}),
        _check("catalog representatives are cocycles", not bad_cocycle, bad_cocycle),
        _check("catalog representatives are not coboundaries", not bad_nonzero, bad_nonzero),
        _check("d s + s d = Euler operator", not bad_h, bad_h[:10]),
        _check("table differential matches the resolution", not bad_t, bad_t),
    ]


def suite_gerstenhaber(arr: Arrangement, cfg: Settings) -> list[dict]:
    from .gerstenhaber import (
        Psi,
        orlik_solomon_check,
        three_from_two,
        verify_delta,
        verify_phi,
        verify_psi,
    )
    from .ore import OreAlgebra, pbw_monomials
    from .tables import bracket_table, cup_table

    A = OreAlgebra(arr)
    N = cfg.window
    ph = verify_phi(arr)
    de = verify_delta(arr)
    monos = [m for m in pbw_monomials(min(cfg.depth, 3)) if any(m)]
    ps = verify_psi(A, [(u, v) for u in monos for v in monos], Psi(A))
    _log(cfg, "gerstenhaber: cup table")
    cups = cup_table(arr, N)
    os_ = orlik_solomon_check(arr)
    n = arr.n_lines
    rng = random.Random(cfg.seed)
    coeffs = [rng.randint(-3, 3) for _ in range(n)]
    balanced = coeffs[:-1] + [-sum(coeffs[:-1])]
    if not any(balanced):
        balanced = [1, -1] + [0] * (n - 2)
    unbalanced = balanced[:-1] + [balanced[-1] + 1]
    tf = [three_from_two(arr, balanced), three_from_two(arr, unbalanced)]
    _log(cfg, "gerstenhaber: bracket table")
    brs = bracket_table(arr, N, cfg.seed)
    return [
        _check("phi is a chain map", not _failed(ph), _failed(ph)),
        _check("psi is a chain map on sampled pairs", not _failed(ps, "u"),
               {"pairs": len(ps), "failures": [f"{r['u']}|{r['v']}" for r in ps
                                                 if not r["pass"]]}),
        _check("diagonal is a chain map", not _failed(de), _failed(de)),
        _check("cup table", all(r["pass"] for r in cups),
               {"entries": len(cups), "failures": _failed(cups, "entry")}),
        _check("Orlik-Solomon subalgebra", os_["pass"],
               {k: v for k, v in os_.items() if k != "pass"}),
        _check("delta ⌣ - on HH2' has rank 0 or full", all(t["pass"] for t in tf), tf),
        _check("bracket table modulo coboundaries", all(r["pass"] for r in brs),
               {"entries": len(brs), "failures": _failed(brs, "entry")}),
    ]


def suite_symmetry(arr: Arrangement, cfg: Settings) -> list[dict]:
    from .errors import NotNormal
    from .ore import OreAlgebra
    from .resolution import sigma_morphism
    from .symmetry import (
        NormalWitness,
        exp_ad,
        exp_ad_series,
        graded_auto,
        inverse,
        is_normal,
        normal_auto,
        normal_auto_series,
        semidirect_check,
        verify_modular,
    )

    A = OreAlgebra(arr)
    r, n = arr.r, arr.n_lines
    depth = min(cfg.depth, 6)
    _log(cfg, f"symmetry: normality identity up to exponent sum {depth}")
    mod = verify_modular(arr, depth)
    sigma = sigma_morphism(A)
    ones = (1,) * n
    plus = normal_auto(arr, ones)
    minus = normal_auto_series(arr, ones, -1)
    rng = random.Random(cfg.seed)
    fs = [random_poly(rng, rng.randint(0, 3)) for _ in range(5)]
    bad_exp = [str(f) for f in fs if exp_ad(arr, f) != exp_ad_series(arr, f)]
    autos = [(((1, 0), (0, 1)), 1)]
    scale = rng.randint(2, 5)
    autos.append((((scale, 0), (0, scale)), mpq(scale) ** r))
    bad_semi = []
    for M, e in autos:
        th = graded_auto(arr, M, e, v=0)
        for f in fs[:3]:
            if not semidirect_check(th, M, f):
                bad_semi.append(f"{M} {f}")
    th = graded_auto(arr, autos[1][0], autos[1][1])
    inv_ok = th.compose(inverse(th)).images == graded_auto(arr, autos[0][0], 1).images
    bad_normal = []
    for _ in range(5):
        exps = tuple(rng.randint(0, 2) for _ in range(n))
        c = mpq(rng.randint(1, 9), rng.randint(1, 9)) * (rng.choice((-1, 1)))
        wit = NormalWitness(c, exps)
        try:
            got = is_normal(arr, wit.element(arr))
        except NotNormal as exc:
            bad_normal.append(f"{exps}: {exc}")
            continue
        if got != wit:
            bad_normal.append(f"{exps}: {got}")
    rejects = {}
    for label, u in (("x+D", A.x + A.D), ("x^2+y^2", A.from_poly(X * X + Y * Y))):
        try:
            is_normal(arr, u)
            rejects[label] = None
        except NotNormal as exc:
            rejects[label] = exc.reason
    return [
        _check("sigma respects the relations", mod["relations"]),
        _check("a Q = Q sigma(a) on PBW monomials", mod["pass"],
               {k: (list(v) if isinstance(v, tuple) else v) for k, v in mod.items()
                if k != "pass"}),
        _check("sigma = theta_Q = exp(+sum d_j)", plus == sigma),
        _check("exp(-sum d_j) = sigma^-1", minus.compose(sigma) == graded_auto(
            arr, ((1, 0), (0, 1)), 1)),
        _check("exp ad f closed form = ad series", not bad_exp, bad_exp),
        _check("semidirect product identity", not bad_semi, bad_semi),
        _check("graded inverse", inv_ok),
        _check("is_normal recovers saturated products", not bad_normal, bad_normal),
        _check("is_normal rejects x+D and x^2+y^2",
               rejects == {"x+D": "not-in-S", "x^2+y^2": "non-split-factor"}, rejects),
    ]


SUITES: dict[str, Callable[[Arrangement, Settings], list[dict]]] = {
    "base": suite_base,
    "ore": suite_ore,
    "resolution": suite_resolution,
    "hochschild": suite_hochschild,
    "gerstenhaber": suite_gerstenhaber,
    "symmetry": suite_symmetry,
}


def run_suites(arr: Arrangement, names, cfg: Settings) -> list[dict]:
    out = []
    for name in SUITE_ORDER:
        if name in names:
            _log(cfg, f"suite {name}")
            checks = SUITES[name](arr, cfg)
            out.append({"name": name, "checks": checks,
                        "pass": all(c["pass"] for c in checks)})
    return out
