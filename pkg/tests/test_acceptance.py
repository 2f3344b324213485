"""Acceptance criteria 1-7, each at its stated tolerance.

The terminal summary prints one pass/fail line per criterion (see conftest).
"""

import time
from fractions import Fraction

import pytest

from preproj import linalg
from preproj.algebra import build_preprojective
from preproj.hochschild import COHOMOLOGY, HOMOLOGY, build_complex
from preproj.quiver import coxeter
from preproj.tables import TypeMetadata, consistency_suite, errata_table
from preproj.verify import verify_axioms, verify_tables

TYPES = ["A2", "A3", "A4", "D4"]

c1 = pytest.mark.criterion(1, "Hilbert series of the constructed algebra, exact")
c2 = pytest.mark.criterion(2, "top degree is the Nakayama permutation")
c3 = pytest.mark.criterion(3, "Frobenius form and Nakayama automorphism")
c4 = pytest.mark.criterion(4, "HH dimension patterns (A2 N=8, A3 N=8)")
c5 = pytest.mark.criterion(5, "calculus axiom suite on A2, N=8")
c6 = pytest.mark.criterion(6, "tables against the engine on A2, N=8")
c7 = pytest.mark.criterion(7, "symbolic consistency for h=3..6, bounds 2")


def series_coefficients(t, upto):
    """(1 + P t^h)(1 - C t + t^2)^{-1} by the recurrence M_d = C M_{d-1} - M_{d-2}."""
    c = coxeter(t)
    n = len(c.C)
    eye = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    mul = lambda X, Y: [[sum(X[i][k] * Y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    M = [eye, [[Fraction(x) for x in r] for r in c.C]]
    while len(M) <= upto:
        CM = mul(c.C, M[-1])
        M.append([[CM[i][j] - M[-2][i][j] for j in range(n)] for i in range(n)])
    H = {}
    for d in range(upto + 1):
        PM = mul(c.P, M[d - c.h]) if d >= c.h else [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                H[(d, i, j)] = M[d][i][j] + PM[i][j]
    return H


@c1
@pytest.mark.parametrize("t", TYPES)
def test_criterion1_hilbert_series(t):
    start = time.perf_counter()
    A = build_preprojective(t)
    elapsed = time.perf_counter() - start
    ref = series_coefficients(t, A.h + 2)
    got = A.graded_dims()
    assert all(got.get(k, 0) == v for k, v in ref.items())
    assert all(v == 0 for (d, _, _), v in ref.items() if d > A.h - 2)
    assert elapsed < 10


@c2
@pytest.mark.parametrize("t", TYPES)
def test_criterion2_top_degree(t):
    A = build_preprojective(t)
    nu = A.coxeter.nu
    dims = A.graded_dims()
    n = A.nvertices
    assert [[dims.get((A.h - 2, i, j), 0) for j in range(n)] for i in range(n)] == \
        [[int(j == nu[i]) for j in range(n)] for i in range(n)]


@c3
@pytest.mark.parametrize("t", TYPES)
def test_criterion3_frobenius(t):
    A = build_preprojective(t)
    fr = A.frobenius
    assert linalg.rank(fr.gram) == A.dim
    for i in range(A.nvertices):
        assert fr.nakayama({A.idempotent(i): Fraction(1)}) == {A.idempotent(A.coxeter.nu[i]): Fraction(1)}


def _patterns(P, h, nvert, full_period_at_zero):
    coh = {n: P.dim_table(COHOMOLOGY, n) for n in range(P.N)}
    hom = {n: P.dim_table(HOMOLOGY, n) for n in range(P.N)}
    total = lambda tab, pred=lambda d: True: sum(k for d, k in tab.items() if pred(d))
    assert total(coh[2]) == total(coh[3])
    assert total(coh[1]) == total(coh[0], lambda d: d < h - 2)
    assert hom[0] == {0: nvert}  # HH_0 = R
    assert all(2 <= d <= h - 1 for d, k in hom[1].items() if k)
    for i in (0, 1):
        lhs = {d + 2 * h: k for d, k in coh[6 + i].items() if k}
        rhs = {d: k for d, k in coh[i].items() if k}
        if i == 0 and not full_period_at_zero:
            # only the U part of HH^0 (degrees below h-2) repeats
            lhs = {d: k for d, k in lhs.items() if d < h - 2}
            rhs = {d: k for d, k in rhs.items() if d < h - 2}
        assert lhs == rhs, (i, lhs, rhs)


@c4
def test_criterion4_a2():
    start = time.perf_counter()
    A = build_preprojective("A2")
    P = build_complex(A, 8)
    _patterns(P, A.h, A.nvertices, True)
    assert time.perf_counter() - start < 300


@c4
@pytest.mark.slow
def test_criterion4_a3():
    start = time.perf_counter()
    A = build_preprojective("A3")
    P = build_complex(A, 8, check=False)
    # for A3 the top of HH^0 (degree h-2) has no partner in HH^6; see the ledger
    _patterns(P, A.h, A.nvertices, False)
    assert time.perf_counter() - start < 1800


@pytest.fixture(scope="module")
def a2_fresh():
    return build_complex(build_preprojective("A2"), 8)


@c5
def test_criterion5_axioms(a2_fresh):
    r = verify_axioms(a2_fresh, 1)
    print(r.to_text())
    assert r.ok
    for name in ("complex", "leibniz", "precalculus1", "precalculus2", "cartan", "bv", "intertwining",
                 "lemma_theta0", "delta_squared"):
        assert r.passed(name), name


@c6
def test_criterion6_tables(a2_fresh):
    r = verify_tables(a2_fresh, 1)
    print(r.to_text())
    assert r.ok
    for name in ("contraction", "bracket", "lie", "connes"):
        assert r.passed(name), name
    # global sign conventions are recorded once per table
    conv = [row for row in errata_table() if row["row"] == "*"]
    assert len({row["table"] for row in conv}) == len(conv)


@c7
def test_criterion7_symbolic():
    start = time.perf_counter()
    for h in (3, 4, 5, 6):
        rep = consistency_suite(TypeMetadata.synthetic(h), 2, 2)
        assert rep.checked["bv"] and rep.checked["cartan"]
        assert rep.violations == [], [str(v) for v in rep.violations[:5]]
    assert time.perf_counter() - start < 60
