from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from preproj import hochschild as H
from preproj.algebra import build_preprojective
from preproj.hochschild import COHOMOLOGY, HOMOLOGY, ComplexIdentityFailure, TruncationTooShallow

PAIR = H.build_complex(build_preprojective("A3"), 6, check=False)


@st.composite
def cochains(draw, levels=(0, 1, 2, 3)):
    n = draw(st.sampled_from(levels))
    d = draw(st.sampled_from(PAIR.degrees(COHOMOLOGY, n)))
    basis = PAIR.cochain_basis(n, d)
    keys = draw(st.lists(st.sampled_from(basis), min_size=1, max_size=4, unique=True))
    return n, {k: Fraction(draw(st.integers(-3, 3).filter(bool))) for k in keys}


@st.composite
def chains(draw, levels=(0, 1, 2, 3, 4)):
    n = draw(st.sampled_from(levels))
    d = draw(st.sampled_from(PAIR.degrees(HOMOLOGY, n)))
    basis = PAIR.chain_basis(n, d)
    keys = draw(st.lists(st.sampled_from(basis), min_size=1, max_size=4, unique=True))
    return n, {k: Fraction(draw(st.integers(-3, 3).filter(bool))) for k in keys}


def diff(x, y):
    return H.combine((1, x), (-1, y))


# ---- complex identities on random elements -------------------------------------------

@settings(max_examples=60, deadline=None)
@given(chains())
def test_b_B_identities(c):
    _, c = c
    assert not PAIR.boundary(PAIR.boundary(c))
    assert not PAIR.connes_B(PAIR.connes_B(c))
    assert not H.combine((1, PAIR.boundary(PAIR.connes_B(c))), (1, PAIR.connes_B(PAIR.boundary(c))))


@settings(max_examples=60, deadline=None)
@given(cochains())
def test_delta_squared(f):
    _, f = f
    assert not PAIR.coboundary(PAIR.coboundary(f))


@settings(max_examples=60, deadline=None)
@given(cochains(), cochains())
def test_coboundary_is_a_derivation_of_cup(f, g):
    # with cup(f, g) = g . f the Koszul sign sits on the first factor
    (p, f), (q, g) = f, g
    lhs = PAIR.coboundary(PAIR.cup(f, g))
    rhs = H.combine(((-1) ** q, PAIR.cup(PAIR.coboundary(f), g)), (1, PAIR.cup(f, PAIR.coboundary(g))))
    assert not diff(lhs, rhs)


@settings(max_examples=60, deadline=None)
@given(cochains((0, 1, 2)), cochains((0, 1, 2)), chains((2, 3, 4)))
def test_contraction_is_an_action(f, g, c):
    (_, f), (_, g), (_, c) = f, g, c
    assert not diff(PAIR.contract(PAIR.cup(f, g), c), PAIR.contract(f, PAIR.contract(g, c)))


@settings(max_examples=60, deadline=None)
@given(cochains(), chains())
def test_boundary_of_contraction(f, c):
    (_, f), (_, c) = f, c
    lhs = PAIR.boundary(PAIR.contract(f, c))
    rhs = diff(PAIR.contract(f, PAIR.boundary(c)), PAIR.contract(PAIR.coboundary(f), c))
    assert not diff(lhs, rhs)


@settings(max_examples=60, deadline=None)
@given(cochains(), chains())
def test_lie_derivative_commutes_with_b_up_to_delta(f, c):
    # [b, L_f] = (-1)^k L_{delta f}, graded commutator
    (k, f), (_, c) = f, c
    s = (-1) ** k
    lhs = H.combine((1, PAIR.boundary(PAIR.lie_derivative(f, c))), (s, PAIR.lie_derivative(f, PAIR.boundary(c))))
    assert not diff(lhs, H.scale(s, PAIR.lie_derivative(PAIR.coboundary(f), c)))


def test_unit_acts_trivially():
    u = PAIR.unit()
    for n in range(4):
        for x in PAIR.hh(HOMOLOGY, n):
            assert PAIR.contract(u, x.vector) == x.vector
        for x in PAIR.hh(COHOMOLOGY, n):
            assert PAIR.cup(u, x.vector) == x.vector == PAIR.cup(x.vector, u)


# ---- dimensions ----------------------------------------------------------------------

def test_relative_c0(a2_pair):
    # relative to R: C_0 = e_1 A e_1 + e_2 A e_2, spanned by the idempotents for A2
    assert sum(len(a2_pair.chain_basis(0, d)) for d in a2_pair.degrees(HOMOLOGY, 0)) == 2


def test_full_identity_check(a2_pair):
    assert a2_pair.check_identities()


def test_identity_failure_is_reported(monkeypatch):
    P = H.build_complex(build_preprojective("A2"), 3, check=False)
    monkeypatch.setattr(P, "connes_B", lambda c: c)
    with pytest.raises(ComplexIdentityFailure):
        P.check_identities()


def test_a2_tables(a2_pair):
    # HH^n and HH_n are one-dimensional for n >= 1, HH_0 = R (dim 2)
    coh = [a2_pair.dim_table(COHOMOLOGY, n) for n in range(8)]
    hom = [a2_pair.dim_table(HOMOLOGY, n) for n in range(8)]
    assert coh == [{0: 1}, {0: 1}, {-2: 1}, {-2: 1}, {-4: 1}, {-4: 1}, {-6: 1}, {-6: 1}]
    assert hom == [{0: 2}, {2: 1}, {2: 1}, {4: 1}, {4: 1}, {6: 1}, {6: 1}, {8: 1}]


def test_a3_structure(a3_pair):
    h = 4
    coh = [a3_pair.dim_table(COHOMOLOGY, n) for n in range(8)]
    hom = [a3_pair.dim_table(HOMOLOGY, n) for n in range(8)]
    assert coh[0] == {0: 1, h - 2: 1}  # U plus L in top degree
    assert sum(coh[2].values()) == sum(coh[3].values())
    assert sum(hom[0].values()) == 3
    assert all(h + 1 <= d <= 2 * h - 2 for d in hom[4])
    for i in range(1, 2):
        assert {d + 2 * h: k for d, k in coh[i + 6].items()} == coh[i]
        assert {d - 2 * h: k for d, k in hom[i + 6].items()} == hom[i]


def test_truncation_guard(a2_pair):
    with pytest.raises(TruncationTooShallow):
        a2_pair.homology(COHOMOLOGY, 8, 0)


def test_cup_graded_commutative_on_classes(a3_pair):
    P = a3_pair
    for p in range(4):
        for q in range(4):
            for a in P.hh(COHOMOLOGY, p):
                for b in P.hh(COHOMOLOGY, q):
                    x = diff(P.cup(a.vector, b.vector), H.scale((-1) ** (p * q), P.cup(b.vector, a.vector)))
                    assert P.homology(COHOMOLOGY, p + q, a.d + b.d).is_boundary(x)


def test_representatives_round_trip(a3_pair):
    for n in range(5):
        for x in a3_pair.hh(HOMOLOGY, n):
            blk = a3_pair.homology(HOMOLOGY, n, x.d)
            coords = blk.coords(x.vector)
            assert coords == [Fraction(int(i == x.index)) for i in range(blk.dim)]
            assert x.to_json()["n"] == n
