"""Exact rational linear algebra on sparse matrices, plus graded-space bookkeeping.

Vectors are handled in two shapes: dense sequences of ``Fraction`` at the
public surface, and ``dict[int, Fraction]`` (no stored zeros) internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = Fraction

DENSE_CUTOFF = 64

SparseVec = dict  # dict[int, Fraction], zero entries never stored


def q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class SparseMatrix:
    """Immutable ``rows x cols`` matrix over Q storing only nonzero entries."""

    __slots__ = ("rows", "cols", "_rowmap")

    def __init__(self, rows: int, cols: int, entries: Mapping | None = None):
        self.rows = rows
        self.cols = cols
        rowmap: dict[int, dict[int, Fraction]] = {}
        if entries:
            for (r, c), v in entries.items():
                if not (0 <= r < rows and 0 <= c < cols):
                    raise IndexError((r, c))
                v = q(v)
                if v:
                    rowmap.setdefault(r, {})[c] = v
        self._rowmap = rowmap

    @classmethod
    def from_rows(cls, rows: Sequence[Mapping[int, Fraction]], cols: int) -> "SparseMatrix":
        m = cls(len(rows), cols)
        for r, row in enumerate(rows):
            clean = {c: q(v) for c, v in row.items() if v}
            if clean:
                if max(clean) >= cols or min(clean) < 0:
                    raise IndexError(r)
                m._rowmap[r] = clean
        return m

    @classmethod
    def from_columns(cls, columns: Sequence[Mapping[int, Fraction]], rows: int) -> "SparseMatrix":
        entries = {}
        for c, col in enumerate(columns):
            for r, v in col.items():
                entries[(r, c)] = v
        return cls(rows, len(columns), entries)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "SparseMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls.from_rows([{c: v for c, v in enumerate(row) if v} for row in data], cols)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @property
    def entries(self) -> dict:
        return {(r, c): v for r, row in self._rowmap.items() for c, v in row.items()}

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self._rowmap.values())

    def row(self, r: int) -> dict:
        return dict(self._rowmap.get(r, {}))

    def row_dicts(self) -> list[dict]:
        return [dict(self._rowmap.get(r, {})) for r in range(self.rows)]

    def column_dicts(self) -> list[dict]:
        cols: list[dict] = [{} for _ in range(self.cols)]
        for r, row in self._rowmap.items():
            for c, v in row.items():
                cols[c][r] = v
        return cols

    def __getitem__(self, rc) -> Fraction:
        r, c = rc
        return self._rowmap.get(r, {}).get(c, Fraction(0))

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for r, row in self._rowmap.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def apply(self, vec: Mapping[int, Fraction]) -> dict:
        """Sparse matrix-vector product on a dict vector."""
        out: dict[int, Fraction] = {}
        for r, row in self._rowmap.items():
            s = Fraction(0)
            for c, v in row.items():
                x = vec.get(c)
                if x:
                    s += v * x
            if s:
                out[r] = s
        return out

    def __matmul__(self, other):
        if isinstance(other, SparseMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            ocols = other._rowmap
            out: dict[int, dict[int, Fraction]] = {}
            for r, row in self._rowmap.items():
                acc: dict[int, Fraction] = {}
                for k, v in row.items():
                    for c, w in ocols.get(k, {}).items():
                        acc[c] = acc.get(c, 0) + v * w
                acc = {c: v for c, v in acc.items() if v}
                if acc:
                    out[r] = acc
            m = SparseMatrix(self.rows, other.cols)
            m._rowmap = out
            return m
        vec = {i: q(v) for i, v in enumerate(other) if v}
        res = self.apply(vec)
        return [res.get(i, Fraction(0)) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not self._rowmap

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self._rowmap == other._rowmap

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


# --- sparse vector helpers -------------------------------------------------

def axpy(y: dict, a: Fraction, x: Mapping[int, Fraction]) -> None:
    """In place ``y += a * x`` on dict vectors."""
    if not a:
        return
    for k, v in x.items():
        nv = y.get(k, 0) + a * v
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)


def to_dense(vec: Mapping[int, Fraction], n: int) -> list[Fraction]:
    return [vec.get(i, Fraction(0)) for i in range(n)]


def to_sparse(vec: Sequence) -> dict:
    return {i: q(v) for i, v in enumerate(vec) if v}


# --- elimination -------------------------------------------------------------

class Echelon:
    """Incrementally maintained reduced row echelon basis of a row space.

    Every stored row has pivot coefficient 1 and is zero in every other
    pivot column, so the final state is the (canonical) RREF of the span.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, dict] = {}  # pivot col -> row

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Mapping[int, Fraction]) -> dict:
        v = dict(vec)
        for c in [c for c in v if c in self.rows]:
            a = v.get(c)
            if a:
                axpy(v, -a, self.rows[c])
        return v

    def add(self, vec: Mapping[int, Fraction]) -> int | None:
        """Insert ``vec``; return its new pivot column, or None if dependent."""
        v = self.reduce(vec)
        if not v:
            return None
        p = min(v)
        inv = 1 / v[p]
        v = {c: x * inv for c, x in v.items()}
        for row in self.rows.values():
            a = row.get(p)
            if a:
                axpy(row, -a, v)
        self.rows[p] = v
        return p

    def contains(self, vec: Mapping[int, Fraction]) -> bool:
        return not self.reduce(vec)

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def basis(self) -> list[dict]:
        return [self.rows[p] for p in self.pivots]


def _row_order(rows: Sequence[Mapping]) -> list[int]:
    # sparsest rows first limits fill-in; ties by lowest row index
    return sorted(range(len(rows)), key=lambda i: (len(rows[i]), i))


def _rref_sparse(rows: Sequence[Mapping], ncols: int) -> tuple[list[dict], list[int]]:
    ech = Echelon(ncols)
    for i in _row_order(rows):
        if rows[i]:
            ech.add(rows[i])
    return ech.basis(), ech.pivots


def _rref_dense(rows: Sequence[Mapping], ncols: int) -> tuple[list[dict], list[int]]:
    m = [to_dense(r, ncols) for r in rows]
    pivots = []
    pr = 0
    for c in range(ncols):
        cands = [r for r in range(pr, len(m)) if m[r][c]]
        if not cands:
            continue
        best = min(cands, key=lambda r: (sum(1 for x in m[r] if x), r))
        m[pr], m[best] = m[best], m[pr]
        inv = 1 / m[pr][c]
        m[pr] = [x * inv for x in m[pr]]
        for r in range(len(m)):
            if r != pr and m[r][c]:
                a = m[r][c]
                m[r] = [x - a * y for x, y in zip(m[r], m[pr])]
        pivots.append(c)
        pr += 1
        if pr == len(m):
            break
    return [to_sparse(m[i]) for i in range(pr)], pivots


def rref_rows(rows: Sequence[Mapping], ncols: int) -> tuple[list[dict], list[int]]:
    """RREF of the span of ``rows``; returns nonzero rows and pivot columns."""
    if len(rows) < DENSE_CUTOFF and ncols < DENSE_CUTOFF:
        return _rref_dense(rows, ncols)
    return _rref_sparse(rows, ncols)


def rref(m: SparseMatrix) -> tuple[SparseMatrix, list[int]]:
    """Reduced row echelon form (same shape, zero rows last) and pivot columns."""
    rows, pivots = rref_rows(m.row_dicts(), m.cols)
    out = SparseMatrix(m.rows, m.cols)
    out._rowmap = {i: r for i, r in enumerate(rows)}
    return out, pivots


def rank(m: SparseMatrix) -> int:
    return len(rref(m)[1])


def kernel_rows(rows: Sequence[Mapping], ncols: int) -> list[dict]:
    """Null space basis (as dict vectors) of the matrix with the given rows."""
    red, pivots = rref_rows(rows, ncols)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    # column index -> list of (pivot col, coeff)
    bycol: dict[int, list] = {}
    for p, row in zip(pivots, red):
        for c, v in row.items():
            if c != p:
                bycol.setdefault(c, []).append((p, v))
    out = []
    for f in free:
        v = {f: Fraction(1)}
        for p, a in bycol.get(f, ()):
            v[p] = -a
        out.append(v)
    return out


def kernel_basis(m: SparseMatrix) -> list[list[Fraction]]:
    """Basis of ``{v : m v = 0}`` as dense vectors; one per free column."""
    return [to_dense(v, m.cols) for v in kernel_rows(m.row_dicts(), m.cols)]


def quotient_basis(ambient_dim: int, subspace: Sequence[Sequence]) -> tuple[list[list[Fraction]], SparseMatrix]:
    """Complement representatives for ``Q^n / span(subspace)`` and the projection.

    Representatives are standard basis vectors on the non-pivot columns of the
    subspace's RREF.  The projection maps ambient coordinates to coordinates
    with respect to those representatives and kills the subspace.
    """
    rows = []
    for v in subspace:
        if len(v) != ambient_dim:
            raise ValueError("subspace vector has wrong length")
        rows.append(to_sparse(v))
    red, pivots = rref_rows(rows, ambient_dim)
    pivset = set(pivots)
    free = [c for c in range(ambient_dim) if c not in pivset]
    reps = [[Fraction(int(i == f)) for i in range(ambient_dim)] for f in free]
    fidx = {f: k for k, f in enumerate(free)}
    entries = {(k, f): 1 for k, f in enumerate(free)}
    for p, row in zip(pivots, red):
        for c, v in row.items():
            if c != p:
                entries[(fidx[c], p)] = -v
    return reps, SparseMatrix(len(free), ambient_dim, entries)


def solve(rows: Sequence[Mapping], ncols: int, rhs: Sequence) -> list[Fraction] | None:
    """Solve ``M x = rhs`` for the matrix with the given rows; None if inconsistent."""
    aug = []
    for r, row in enumerate(rows):
        a = dict(row)
        if rhs[r]:
            a[ncols] = q(rhs[r])
        aug.append(a)
    red, pivots = rref_rows(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for p, row in zip(pivots, red):
        x[p] = row.get(ncols, Fraction(0))
    return x


def inverse(m: SparseMatrix) -> SparseMatrix:
    if m.rows != m.cols:
        raise ValueError("not square")
    n = m.rows
    aug = [{**r, n + i: Fraction(1)} for i, r in enumerate(m.row_dicts())]
    red, pivots = rref_rows(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return SparseMatrix(n, n, {(i, c - n): v for i, row in enumerate(red[:n]) for c, v in row.items() if c >= n})


def bareiss_rank(dense: Sequence[Sequence]) -> int:
    """Rank by fraction-free Bareiss elimination on integer-scaled rows."""
    from math import lcm

    m = []
    for row in dense:
        row = [q(x) for x in row]
        den = lcm(*(x.denominator for x in row)) if row else 1
        m.append([int(x * den) for x in row])
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    prev = 1
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == nrows:
            break
    return r


# --- graded spaces -------------------------------------------------------------

@dataclass(frozen=True)
class GradedSpace:
    """Finite-dimensional graded vector space ``M = sum_d M(d)``.

    ``shift(n)`` follows ``M[n](d) = M(d - n)`` and ``dual()`` follows
    ``M*(d) = M(-d)*``.
    """

    dims: Mapping[int, int]
    labels: Mapping[int, tuple] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for d, n in self.dims.items():
            if n < 0:
                raise ValueError("negative dimension")
            if n:
                clean[int(d)] = int(n)
        object.__setattr__(self, "dims", dict(sorted(clean.items())))
        object.__setattr__(self, "labels", {d: tuple(v) for d, v in self.labels.items() if d in clean})

    def __getitem__(self, d: int) -> int:
        return self.dims.get(d, 0)

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    @property
    def degrees(self) -> list[int]:
        return list(self.dims)

    def shift(self, n: int) -> "GradedSpace":
        return GradedSpace({d + n: k for d, k in self.dims.items()},
                           {d + n: v for d, v in self.labels.items()})

    def dual(self) -> "GradedSpace":
        return GradedSpace({-d: k for d, k in self.dims.items()},
                           {-d: v for d, v in self.labels.items()})

    def __add__(self, other: "GradedSpace") -> "GradedSpace":
        dims = dict(self.dims)
        for d, k in other.dims.items():
            dims[d] = dims.get(d, 0) + k
        return GradedSpace(dims)

    def restrict(self, degrees: Iterable[int]) -> "GradedSpace":
        keep = set(degrees)
        return GradedSpace({d: k for d, k in self.dims.items() if d in keep},
                           {d: v for d, v in self.labels.items() if d in keep})
