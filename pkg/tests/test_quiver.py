import cmath

import numpy as np
import pytest

from preproj.quiver import QuiverType, UnsupportedRank, build, coxeter, dynkin_edges, require_supported

TYPES = ["A2", "A3", "A4", "A5", "D4", "D5", "D6", "E6", "E7", "E8"]


def cartan(t):
    c = coxeter(t)
    n = len(c.C)
    return 2 * np.eye(n, dtype=int) - np.array(c.C)


def reflections(A):
    # s_i(x) = x - (A x)_i alpha_i in root coordinates (simply laced, A symmetric)
    n = len(A)
    return [np.eye(n, dtype=int) - np.outer(np.eye(n, dtype=int)[i], A[i]) for i in range(n)]


def oracle_exponents(t):
    # eigenvalues of a Coxeter element are exp(2 pi i m / h)
    A = cartan(t)
    c = np.eye(len(A), dtype=int)
    for s in reflections(A):
        c = c @ s
    h = 1
    while not (np.linalg.matrix_power(c, h) == np.eye(len(A), dtype=int)).all():
        h += 1
    ms = sorted(round(cmath.phase(ev) / (2 * cmath.pi) * h) % h for ev in np.linalg.eigvals(c))
    return h, tuple(ms)


def oracle_nu(t):
    # w0 by descending from rho to -rho; then w0(alpha_i) = -alpha_nu(i)
    A = cartan(t)
    n = len(A)
    S = reflections(A)
    v = np.linalg.solve(A.astype(float), np.ones(n))
    word = []
    while True:
        pos = [i for i in range(n) if (A @ v)[i] > 1e-9]
        if not pos:
            break
        v = S[pos[0]] @ v
        word.append(pos[0])
        assert len(word) <= 200
    nu = []
    for i in range(n):
        x = np.eye(n, dtype=int)[i]
        for j in word:
            x = S[j] @ x
        k = int(np.argmin(x))
        assert (x == -np.eye(n, dtype=int)[k]).all()
        nu.append(k)
    return tuple(nu)


@pytest.mark.parametrize("t", TYPES)
def test_coxeter_number_and_exponents(t):
    h, ms = oracle_exponents(t)
    c = coxeter(t)
    assert c.h == h
    assert c.exponents == ms


@pytest.mark.parametrize("t", TYPES)
def test_nakayama_permutation(t):
    assert coxeter(t).nu == oracle_nu(t)


def test_known_values():
    assert coxeter("A2").h == 3
    assert coxeter("D4").nu == (0, 1, 2, 3)
    assert coxeter("E8").h == 30
    c = coxeter("A3")
    assert (c.r_minus, c.r_plus) == (1, 2)


@pytest.mark.parametrize("t", TYPES)
def test_double_quiver(t):
    q = build(t)
    assert len(q.arrows) == 2 * len(dynkin_edges(QuiverType.parse(t)))
    for a in q.arrows:
        b = q.arrows[a.partner]
        assert (b.source, b.target) == (a.target, a.source)
        assert a.starred != b.starred
    C = np.array(coxeter(t).C)
    assert (C == C.T).all()


def test_bad_types():
    with pytest.raises(UnsupportedRank):
        QuiverType("D", 3)
    with pytest.raises(UnsupportedRank):
        QuiverType("E", 9)
    with pytest.raises(ValueError):
        QuiverType.parse("X5")
    with pytest.raises(UnsupportedRank):
        require_supported("A1")
    assert require_supported("a_3") == QuiverType("A", 3)


def test_orientation_validation():
    with pytest.raises(ValueError):
        build("A3", orientation=[(0, 1)])
    q = build("A3", orientation=[(1, 0), (2, 1)])
    assert {(a.source, a.target) for a in q.arrows if not a.starred} == {(1, 0), (2, 1)}
