from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from preproj import linalg
from preproj.algebra import GradedQuiverAlgebra, PlainQuiver, build_preprojective, hilbert_matrix, relation
from preproj.quiver import UnsupportedRank, build, coxeter

TYPES = ["A2", "A3", "A4", "D4"]


def sympy_hilbert(t):
    """Coefficients of (1 + P t^h)(1 - C t + t^2)^{-1}, expanded by sympy."""
    c = coxeter(t)
    x = sympy.symbols("t")
    n = len(c.C)
    M = (sympy.eye(n) - sympy.Matrix(c.C) * x + sympy.eye(n) * x**2).inv()
    H = (sympy.eye(n) + sympy.Matrix(c.P) * x**c.h) * M
    out = {}
    for i in range(n):
        for j in range(n):
            poly = sympy.series(sympy.simplify(H[i, j]), x, 0, c.h + 3).removeO()
            for d in range(c.h + 3):
                out[(d, i, j)] = int(poly.coeff(x, d))
    return out


@pytest.fixture(scope="module", params=TYPES)
def alg(request):
    return build_preprojective(request.param)


def test_total_dimensions():
    # r h (h+1)/6 for simply-laced types
    assert {t: build_preprojective(t).dim for t in TYPES} == {"A2": 4, "A3": 10, "A4": 20, "D4": 28}


def test_graded_dims_match_sympy_series(alg):
    ref = sympy_hilbert(str(alg.quiver.qtype))
    got = alg.graded_dims()
    for (d, i, j), k in ref.items():
        assert got.get((d, i, j), 0) == k, (d, i, j)
    assert hilbert_matrix(alg.quiver) == [[[ref[(d, i, j)] for d in range(alg.h - 1)]
                                           for j in range(alg.nvertices)] for i in range(alg.nvertices)]


def test_degree_zero_block_is_identity(alg):
    dims = alg.graded_dims()
    n = alg.nvertices
    assert [[dims.get((0, i, j), 0) for j in range(n)] for i in range(n)] == \
        [[int(i == j) for j in range(n)] for i in range(n)]


def test_top_degree_is_nakayama(alg):
    nu = alg.coxeter.nu
    dims = alg.graded_dims()
    assert alg.top == alg.h - 2
    for i in range(alg.nvertices):
        for j in range(alg.nvertices):
            assert dims.get((alg.h - 2, i, j), 0) == int(j == nu[i])


def test_frobenius(alg):
    fr = alg.frobenius
    assert linalg.rank(fr.gram) == alg.dim
    nu = alg.coxeter.nu
    for i in range(alg.nvertices):
        assert fr.nakayama({alg.idempotent(i): Fraction(1)}) == {alg.idempotent(nu[i]): Fraction(1)}


def test_associative(alg):
    assert alg.is_associative()


def test_relation_vanishes(alg):
    for i in range(alg.nvertices):
        rho = relation(alg.quiver, i)
        total: dict = {}
        for word, c in rho.items():
            linalg.axpy(total, Fraction(c), alg.element(word))
        assert not total


def test_a1_rejected():
    with pytest.raises(UnsupportedRank):
        build_preprojective("A1")


def test_a2_products():
    A = build_preprojective("A2")
    assert A.element("a0.a0*") == {}
    assert A.mul(A.element("a0"), A.element("a0*")) == {}
    assert A.mul(A.one(), A.element("a0")) == A.element("a0")


@st.composite
def elements(draw, alg):
    coeffs = draw(st.lists(st.integers(-3, 3), min_size=alg.dim, max_size=alg.dim))
    return {b: Fraction(c) for b, c in enumerate(coeffs) if c}


A3 = build_preprojective("A3")


@settings(max_examples=40, deadline=None)
@given(elements(A3), elements(A3))
def test_star_is_an_anti_involution(u, v):
    assert A3.star(A3.star(u)) == u
    assert A3.star(A3.mul(u, v)) == A3.mul(A3.star(v), A3.star(u))


@settings(max_examples=40, deadline=None)
@given(elements(A3), elements(A3), elements(A3))
def test_frobenius_form_is_associative(u, v, w):
    fr = A3.frobenius
    assert fr.form(A3.mul(u, v), w) == fr.form(u, A3.mul(v, w))
    # (x, y) = (y, eta(x))
    assert fr.form(u, v) == fr.form(v, fr.nakayama(u))


def test_a3_diagonal_of_hilbert_matrix():
    # e_i A e_i: only the middle vertex has a degree-2 loop; the end vertices are 1
    dims = build_preprojective("A3").graded_dims()
    diag = [[dims.get((d, i, i), 0) for d in range(3)] for i in range(3)]
    assert diag == [[1, 0, 0], [1, 0, 1], [1, 0, 0]]
