from fractions import Fraction

import pytest

from preproj import hochschild as H
from preproj.hochschild import COHOMOLOGY, HOMOLOGY
from preproj.structure import (BVOperator, DualityMap, NoSolution, assign_labels, bv_bracket, bv_combination,
                               euler_derivation)
from preproj.tables import COCYCLE, CYCLE, Symbol, SymbolicElement


@pytest.fixture(scope="module")
def dual1(a2_pair):
    return DualityMap(a2_pair, 1)


@pytest.fixture(scope="module")
def dual0(a2_pair):
    return DualityMap(a2_pair, 0)


def test_fundamental_class(dual1, dual0):
    assert (dual1.top, dual1.shift) == (8, 8)
    assert (dual0.top, dual0.shift) == (2, 2)
    assert dual1.fundamental


def test_bijective_inside_window(a2_pair, dual1):
    for n in range(1, 8):
        for d in a2_pair.degrees(HOMOLOGY, n):
            if a2_pair.homology(HOMOLOGY, n, d).dim:
                assert dual1.is_bijective(n, d), (n, d)


def test_edge_is_not_an_isomorphism(dual0):
    # HH_0(0) = R has dimension 2 while HH^2(-2) = K is a line
    with pytest.raises(NoSolution):
        dual0.block(0, 0)
    assert not dual0.is_bijective(0, 0)


def test_duality_inverts_contraction_with_fundamental_class(a2_pair, dual1):
    for j in range(1, 8):
        for eta in a2_pair.hh(COHOMOLOGY, j):
            c = dual1.inverse(eta.vector)
            back = dual1(c, 8 - j, eta.d + dual1.shift)
            blk = a2_pair.homology(COHOMOLOGY, j, eta.d)
            assert blk.is_boundary(H.combine((1, back), (-1, eta.vector)))


@pytest.mark.parametrize("m", [0, 1])
def test_delta_of_theta0(a2_pair, m):
    # Delta(theta_0) = (1 + m h) z_0
    D = DualityMap(a2_pair, m)
    delta = BVOperator(D)
    x = delta(euler_derivation(a2_pair), 1, 0)
    blk = a2_pair.homology(COHOMOLOGY, 0, 0)
    assert blk.coords(x) == [Fraction(1 + m * 3) * c for c in blk.coords(a2_pair.unit())]


def test_delta_squares_to_zero(a2_pair, dual1):
    delta = BVOperator(dual1)
    for j in range(2, 8):
        for e in a2_pair.degrees(COHOMOLOGY, j):
            assert delta.squares_to_zero(j, e)


def _same_class(P, x, y, n, d):
    return P.homology(COHOMOLOGY, n, d).is_boundary(H.combine((1, x), (-1, y)))


def test_bv_sign_relation(a2_pair, dual1):
    """The pre-Lie bracket is (-1)^{p+1} times the printed BV combination."""
    P = a2_pair
    delta = BVOperator(dual1)
    checked = 0
    for p in range(0, 5):
        for q in range(0, 5):
            for a in P.hh(COHOMOLOGY, p):
                for b in P.hh(COHOMOLOGY, q):
                    if p + q == 0:
                        continue
                    br = P.bracket(a.vector, b.vector)
                    comb = bv_combination(delta, a.vector, p, b.vector, q)
                    assert _same_class(P, br, H.scale((-1) ** (p + 1), comb), p + q - 1, a.d + b.d)
                    assert _same_class(P, br, bv_bracket(delta, a.vector, p, b.vector, q), p + q - 1, a.d + b.d)
                    checked += 1
    assert checked > 20


def test_bracket_from_delta_does_not_depend_on_m(a2_pair, dual0, dual1):
    P = a2_pair
    d0, d1 = BVOperator(dual0), BVOperator(dual1)
    seen = 0
    for p in range(0, 3):
        for q in range(0, 3 - p):
            if p + q == 0:
                continue
            for a in P.hh(COHOMOLOGY, p):
                for b in P.hh(COHOMOLOGY, q):
                    try:
                        x0 = bv_bracket(d0, a.vector, p, b.vector, q)
                    except NoSolution:
                        continue
                    x1 = bv_bracket(d1, a.vector, p, b.vector, q)
                    assert _same_class(P, x0, x1, p + q - 1, a.d + b.d)
                    seen += 1
    assert seen >= 3


def test_intertwining(a2_pair, dual1):
    P = a2_pair
    for p in range(0, 4):
        for eta in P.hh(COHOMOLOGY, p):
            for n in range(p + 1, 8):
                for c in P.hh(HOMOLOGY, n):
                    lhs = dual1(P.contract(eta.vector, c.vector), n - p, c.d + eta.d)
                    rhs = P.cup(eta.vector, dual1(c.vector, n, c.d))
                    assert _same_class(P, lhs, rhs, 8 - n + p, c.d + eta.d - dual1.shift)


def test_delta_on_top_degree_of_hh0_is_outside_window(a3_pair):
    # A3: HH^0(h-2) = L pairs with HH_8(2h+2+2) = 0, so D^{-1} is not an inverse there
    D = DualityMap(a3_pair, 1)
    omega = a3_pair.homology(COHOMOLOGY, 0, 2).vector(0)
    with pytest.raises(NoSolution):
        BVOperator(D)(omega, 0, 2)
    assert BVOperator(D)(a3_pair.unit(), 0, 0) == {}


# ---- labels ----------------------------------------------------------------------------

@pytest.fixture(scope="module")
def labels_a2(a2_pair):
    return assign_labels(a2_pair, 1)


def test_a2_labels(labels_a2):
    L = labels_a2
    assert sorted(map(str, L.cocycles)) == ["f[0,0]", "h[0,0]", "psi[0,0]", "theta[0,0]", "theta[0,1]",
                                            "z[0,0]", "z[0,1]", "zeta[0,0]"]
    assert L.meta.h == 3
    assert L.meta.matrix("alpha") == [[1]]
    assert L.meta.index["omega"] == ()
    for row in L.to_json():
        s = Symbol(row["family"], row["k"], row["s"], row["variant"])
        assert (row["homological_degree"], row["internal_degree"]) == s.bidegree(3)


def test_label_normalisations(a2_pair, labels_a2):
    P, L = a2_pair, labels_a2
    sym = lambda f, k=0, s=0: L.vector(Symbol(f, k, s, COCYCLE))
    # z_0 is the unit and f_0 cup h_0 = psi_0
    assert sym("z") == P.unit()
    assert _same_class(P, P.cup(sym("f"), sym("h")), sym("psi"), 5, -4)
    assert _same_class(P, P.cup(sym("theta"), sym("zeta")), sym("psi"), 5, -4)


def test_express_round_trip(labels_a2):
    L = labels_a2
    for s in L.cycles:
        x = SymbolicElement.of(s, 3)
        got = L.express(L.realize(x, CYCLE), CYCLE, s.level, s.degree(3))
        assert got == x


def test_a3_labels(a3_pair):
    L = assign_labels(a3_pair, 1)
    assert L.meta.index["omega"] == (0,)
    assert L.meta.index["epsilon"] == ()
    assert any("epsilon left unlabeled" in n for n in L.notes)
    assert Symbol("omega", 0, 1, COCYCLE) not in L.cocycles  # omega cup u is a coboundary
    assert L.meta.matrix("alpha") == [[2]]
    with pytest.raises(KeyError):
        L.vector(Symbol("epsilon", 0, 0, COCYCLE))
