from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from preproj import linalg

small = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def square(n_max=4):
    return st.integers(1, n_max).flatmap(
        lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    M = linalg.SparseMatrix.from_dense(rows)
    assert linalg.rank(M) == sympy.Matrix(rows).rank()
    assert linalg.bareiss_rank(rows) == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_matches_sympy(rows):
    R, piv = linalg.rref(linalg.SparseMatrix.from_dense(rows))
    S, spiv = sympy.Matrix(rows).rref()
    assert tuple(piv) == spiv
    dense = R.to_dense()
    for i in range(len(piv)):
        assert [sympy.Rational(x.numerator, x.denominator) for x in dense[i]] == list(S.row(i))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity_and_kernel(rows):
    M = linalg.SparseMatrix.from_dense(rows)
    ker = linalg.kernel_basis(M)
    assert linalg.rank(M) + len(ker) == M.cols
    for v in ker:
        assert not M.apply(linalg.to_sparse(v))


@settings(max_examples=60, deadline=None)
@given(square())
def test_inverse_when_regular(rows):
    M = linalg.SparseMatrix.from_dense(rows)
    if linalg.rank(M) < M.rows:
        return
    inv = linalg.inverse(M).to_dense()
    n = M.rows
    prod = [[sum(rows[i][k] * inv[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert prod == [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_consistent_systems(rows, x):
    c = len(rows[0])
    x = x[:c]
    b = [sum(r[j] * x[j] for j in range(c)) for r in rows]
    sol = linalg.solve(linalg.SparseMatrix.from_dense(rows).row_dicts(), c, b)
    assert sol is not None
    assert [sum(r[j] * sol[j] for j in range(c)) for r in rows] == b


def test_solve_inconsistent():
    rows = linalg.SparseMatrix.from_dense([[1, 1], [2, 2]]).row_dicts()
    assert linalg.solve(rows, 2, [1, 3]) is None


def test_echelon_membership():
    E = linalg.Echelon(3)
    E.add({0: Fraction(1), 1: Fraction(1)})
    assert E.contains({0: Fraction(2), 1: Fraction(2)})
    assert not E.contains({2: Fraction(1)})
    assert E.add({0: Fraction(3), 1: Fraction(3)}) is None


def test_graded_space_shift_and_dual():
    V = linalg.GradedSpace({0: 1, 2: 3})
    assert V.total == 4
    # M[n](d) = M(d - n)
    assert V.shift(-2)[-2] == 1 and V.shift(-2)[0] == 3
    assert V.dual()[-2] == 3
    assert (V + V.shift(2))[2] == 4
