"""Acceptance criteria AC1..AC11.

Each test prints one line ``ACn PASS|FAIL <summary> (<seconds>s, budget <b>s)`` and
asserts the criterion exactly.  Run ``pytest tests/test_acceptance.py -v`` or
``python tests/test_acceptance.py`` for the bare list of lines.
"""

from __future__ import annotations

import random
import time
from itertools import combinations

import pytest
from gmpy2 import mpq

from dtangent.base import Poly, X, Y, example_arrangement
from dtangent.errors import NotNormal
from dtangent.gerstenhaber import orlik_solomon_check
from dtangent.hochschild import (
    Cochain,
    cohomology_dims,
    euler_gamma,
    hh1_basis_check,
    hh_d,
    homotopy_s,
    is_coboundary,
)
from dtangent.ore import AlgebraMorphism, OreAlgebra, operator_oracle, pbw_monomials
from dtangent.resolution import all_wedges, ext_one_dim, verify_complex, verify_cy_chain_iso
from dtangent.symmetry import (
    NormalWitness,
    exp_ad,
    exp_ad_series,
    graded_auto,
    is_normal,
    modular_sigma,
    normal_auto,
    normal_auto_series,
    semidirect_check,
    verify_modular,
)
from dtangent.tables import bracket_table, cup_table

SEED = 20240611
RESULTS: dict[str, str] = {}
_CAPTURE = None


def report(ac: str, ok: bool, summary: str, elapsed: float, budget: float) -> None:
    over = "" if elapsed <= budget else " OVER BUDGET"
    line = f"{ac} {'PASS' if ok else 'FAIL'} {summary} ({elapsed:.1f}s, budget {budget:g}s{over})"
    RESULTS[ac] = line
    if _CAPTURE is None:
        print(line, flush=True)
    else:
        with _CAPTURE.disabled():
            print("\n" + line, flush=True)


@pytest.fixture
def show(capsys):
    global _CAPTURE
    _CAPTURE = capsys
    yield
    _CAPTURE = None


# AC1 -----------------------------------------------------------------------------
def test_ac1_pbw_oracle(show):
    A = OreAlgebra(example_arrangement(3))
    t0 = time.perf_counter()
    rep = operator_oracle(A, max_sum=6, max_degree=10)
    el = time.perf_counter() - t0
    ok = rep["pass"] and rep["pairs"] == 210 ** 2 and rep["n_failures"] == 0
    report("AC1", ok, f"{rep['pairs']} pairs x 66 monomials = {rep['checks']} exact checks, "
                      f"{rep['n_failures']} failures", el, 60)
    assert ok


# AC2 -----------------------------------------------------------------------------
def test_ac2_resolution(show):
    t0 = time.perf_counter()
    counts, ok = {}, True
    for r in (3, 4, 5):
        rows = verify_complex(example_arrangement(r))
        counts[r] = sum(row["pass"] for row in rows)
        ok &= len(rows) == 15 and counts[r] == 15
    report("AC2", ok, f"d o d = 0 on generators, passes per r: {counts}",
           time.perf_counter() - t0, 10)
    assert ok


# AC3 -----------------------------------------------------------------------------
def test_ac3_homotopy(show):
    A = OreAlgebra(example_arrangement(3))
    t0 = time.perf_counter()
    wedges = [w for p in range(5) for w in all_wedges(p)]
    monos = pbw_monomials(4)
    bad = []
    for m in monos:
        for w in wedges:
            c = Cochain(A, {w: A.mono(*m)})
            if hh_d(None, homotopy_s(None, c)) + homotopy_s(None, hh_d(None, c)) != euler_gamma(c):
                bad.append((m, w))
    ok = not bad and len(wedges) == 16
    report("AC3", ok, f"(ds+sd) = gamma on {len(monos)} x {len(wedges)} cochains, "
                      f"{len(bad)} failures", time.perf_counter() - t0, 30)
    assert ok


# AC4 -----------------------------------------------------------------------------
def test_ac4_hh_dims(show):
    t0 = time.perf_counter()
    expected = {3: [1, 5, 9, 5, 0], 4: [1, 6, 11, 6, 0]}
    got = {(r, N): cohomology_dims(example_arrangement(r), N) for r in (3, 4) for N in (6, 8)}
    ok = all(got[(r, N)] == expected[r] for r, N in got)
    report("AC4", ok, "dims " + ", ".join(f"r={r} N={N}: {v}" for (r, N), v in got.items()),
           time.perf_counter() - t0, 300)
    assert ok


# AC5 -----------------------------------------------------------------------------
def test_ac5_hh1_basis(show):
    t0 = time.perf_counter()
    reps = {r: hh1_basis_check(example_arrangement(r), 8) for r in (3, 4)}
    ok = all(rep["pass"] and rep["span_dim"] == r + 2 for r, rep in reps.items())
    report("AC5", ok, "HH1 span dims " + ", ".join(f"r={r}: {rep['span_dim']}/{r + 2}"
                                                   for r, rep in reps.items()),
           time.perf_counter() - t0, 60)
    assert ok


# AC6 -----------------------------------------------------------------------------
def test_ac6_cup_table(show):
    """Rows checked as printed.  The kappa row is compared with its literal wedge
    order y^ E^ D^, which is minus the canonical y^ D^ E^."""
    t0 = time.perf_counter()
    failures, total, literal_fail = [], 0, []
    for r in (3, 4):
        arr = example_arrangement(r)
        A = OreAlgebra(arr)
        for row in cup_table(arr):
            total += 1
            if row["entry"].startswith("E^ ⌣ kappa"):
                # literal statement: result = kappa (x) y^ ^ E^ ^ D^ = -kappa (x) y^D^E^
                lhs_equals_plus = row["pass"]
                mono = row["entry"].split("(")[1].rstrip(")")
                i, j = (int(s) for s in mono.replace("x^", "").split("y^"))
                literal = Cochain(A, {"yDE": A.mono(i, j, c=-1)})
                plus = Cochain(A, {"yDE": A.mono(i, j)})
                if not (plus == literal or is_coboundary(plus - literal) is not None):
                    literal_fail.append((r, row["entry"], lhs_equals_plus))
                continue
            if not row["pass"]:
                failures.append((r, row["entry"]))
    ok = not failures and not literal_fail
    note = ""
    if literal_fail:
        note = (f"; {len(literal_fail)} kappa rows hold only with y^D^E^ (the opposite sign "
                f"of the printed y^E^D^), sign verified: "
                f"{all(flag for _, _, flag in literal_fail)}")
    report("AC6", ok, f"{total - len(failures) - len(literal_fail)}/{total} cup rows exact"
                      f"{note}", time.perf_counter() - t0, 120)
    assert ok


# AC7 -----------------------------------------------------------------------------
def test_ac7_orlik_solomon(show):
    t0 = time.perf_counter()
    reps = {r: orlik_solomon_check(example_arrangement(r)) for r in (3, 4)}
    ok = all(rep["pass"] and rep["triples"] == len(list(combinations(range(r + 2), 3)))
             and rep["dims"][:4] == [1, r + 2, r + 1, 0] for r, rep in reps.items())
    report("AC7", ok, "; ".join(f"r={r}: {rep['triples']} triples hold={rep['triples_hold']}, "
                                f"dims {rep['dims'][:4]}" for r, rep in reps.items()),
           time.perf_counter() - t0, 30)
    assert ok


# AC8 -----------------------------------------------------------------------------
def test_ac8_bracket_table(show):
    t0 = time.perf_counter()
    failures, total, w2w2 = [], 0, {}
    for r in (3, 4):
        for seed in (SEED, SEED + 1):
            rows = bracket_table(example_arrangement(r), N=8, seed=seed)
            total += len(rows)
            failures += [(r, row["entry"]) for row in rows if not row["pass"]]
            for row in rows:
                if row["entry"].startswith("[omega2, omega2]"):
                    w2w2[(r, seed, row["entry"])] = (row["pass"], row["witness"] is not None)
    reduced = all(p and (w or "=" in e[2]) for e, (p, w) in w2w2.items())
    ok = not failures and reduced
    report("AC8", ok, f"{total - len(failures)}/{total} bracket rows modulo coboundaries at "
                      f"N=8; [omega2,omega2] literal 2y^2 Fbar E x^y^D^ and certified coboundary",
           time.perf_counter() - t0, 300)
    assert ok


# AC9 -----------------------------------------------------------------------------
def test_ac9_calabi_yau(show):
    t0 = time.perf_counter()
    arr = example_arrangement(3)
    A = OreAlgebra(arr)
    sigma = modular_sigma(arr)
    relations = not sigma.relation_failures()
    mod = verify_modular(arr, 6)
    squares = all(row["pass"] for row in verify_cy_chain_iso(arr))
    ones = (1,) * arr.n_lines
    exp_minus = normal_auto_series(arr, ones, -1)
    exp_plus = normal_auto_series(arr, ones, +1)
    literal = exp_minus == sigma
    consistent = exp_plus == sigma == normal_auto(arr, ones) and \
        exp_minus.compose(sigma) == AlgebraMorphism.identity(A)
    ok = relations and mod["pass"] and squares and literal
    report("AC9", ok,
           f"relations={relations}, aQ=Q sigma(a) on {mod['holds']}/{mod['monomials']} "
           f"(opposite orientation {mod['opposite_orientation_holds']}), psi squares={squares}, "
           f"sigma=exp(-sum d)={literal} [exp(-sum d)(E)={exp_minus(A.E)}, "
           f"sigma(E)={sigma(A.E)}; sigma=exp(+sum d) and exp(-sum d)=sigma^-1: {consistent}]",
           time.perf_counter() - t0, 120)
    assert relations and mod["pass"] and squares and consistent
    assert literal, "sigma(E) = E + r + 2 but exp(-sum d)(E) = E - (r + 2)"


# AC10 ----------------------------------------------------------------------------
def test_ac10_ext(show):
    t0 = time.perf_counter()
    rng = random.Random(SEED)
    lams = [mpq(rng.randint(-1000, 1000), rng.randint(1, 97)) for _ in range(3)]
    dims = {str(lam): ext_one_dim(lam, lam + 5, 3) for lam in lams}
    ok = all(v == [0, 0, 0, 1, 1] for v in dims.values())
    report("AC10", ok, f"Ext(M_l, M_(l+5)) = {dims}", time.perf_counter() - t0, 5)
    assert ok


# AC11 ----------------------------------------------------------------------------
def _rand_poly(rng, degree):
    p = Poly({(degree - j, j): rng.randint(-5, 5) for j in range(degree + 1)})
    return p if p else Poly.monomial(0, degree)


def test_ac11_automorphisms(show):
    t0 = time.perf_counter()
    arr = example_arrangement(3)
    A = OreAlgebra(arr)
    rng = random.Random(SEED)
    fs = []
    for _ in range(10):
        f = Poly()
        for d in range(rng.randint(1, 3) + 1):
            f = f + _rand_poly(rng, d)
        fs.append(f)
    exp_ok = sum(exp_ad(arr, f) == exp_ad_series(arr, f) for f in fs)

    semi_ok = 0
    for _ in range(5):
        t = mpq(rng.choice([-3, -2, 2, 3, 5]), rng.choice([1, 2, 3]))
        M = ((t, 0), (0, t))
        phi0 = _rand_poly(rng, 3)
        th = graded_auto(arr, M, t ** 3, v=rng.randint(-4, 4), phi0=phi0)
        f = _rand_poly(rng, rng.randint(1, 3)) + Poly.monomial(0, 1)
        semi_ok += semidirect_check(th, M, f) and not semidirect_check(th, M, f, mutate=True)

    foreign = [X * X + Y * Y, X + Y.scale(7), X.scale(2) - Y.scale(5), X * X - Y * Y.scale(2)]
    normal_ok = 0
    for k in range(20):
        exps = tuple(rng.randint(0, 2) for _ in range(arr.n_lines))
        c = mpq(rng.randint(1, 20), rng.randint(1, 20)) * rng.choice((-1, 1))
        wit = NormalWitness(c, exps)
        u = wit.element(arr)
        if k % 2:
            u = u * rng.choice(foreign)
            try:
                is_normal(arr, u)
            except NotNormal:
                normal_ok += 1
        else:
            normal_ok += is_normal(arr, u) == wit
    rejects = []
    for u in (A.x + A.D, A.from_poly(X * X + Y * Y)):
        try:
            is_normal(arr, u)
        except NotNormal as exc:
            rejects.append(exc.reason)
    ok = exp_ok == 10 and semi_ok == 5 and normal_ok == 20 and \
        rejects == ["not-in-S", "non-split-factor"]
    report("AC11", ok, f"exp_ad {exp_ok}/10, semidirect {semi_ok}/5, is_normal {normal_ok}/20, "
                       f"rejections {rejects}", time.perf_counter() - t0, 60)
    assert ok


if __name__ == "__main__":
    import sys

    tests = [v for k, v in sorted(globals().items(), key=lambda kv: int(kv[0][7:].split("_")[0])
                                  if kv[0].startswith("test_ac") else 0)
             if k.startswith("test_ac")]
    failed = 0
    for fn in tests:
        try:
            fn(None)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
