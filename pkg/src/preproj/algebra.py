"""The preprojective algebra of an ADE quiver as an explicit graded algebra.

Paths compose left to right: ``xy`` means traverse ``x`` then ``y``, so a
nonzero product needs ``target(x) == source(y)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import linalg
from .quiver import CoxeterData, DoubleQuiver, build, coxeter, require_supported


class HilbertMismatch(RuntimeError):
    pass


class DegenerateForm(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Path:
    """A path in the double quiver; ``arrows == ()`` is the trivial path ``e_source``."""

    source: int
    target: int
    arrows: tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    def name(self, quiver: DoubleQuiver) -> str:
        if not self.arrows:
            return f"e{self.source + 1}"
        return ".".join(quiver.arrows[a].name for a in self.arrows)


def paths_of_length(q: DoubleQuiver, d: int) -> list[Path]:
    out = [Path(i, i) for i in range(q.nvertices)]
    for _ in range(d):
        out = [Path(p.source, a.target, p.arrows + (a.index,))
               for p in out for a in q.arrows if a.source == p.target]
    return sorted(out, key=lambda p: (p.source, p.target, p.arrows))


def relation(q: DoubleQuiver, i: int) -> dict[tuple[int, ...], int]:
    """``e_i (sum_{a in Q} [a, a*]) e_i`` as a combination of length-2 arrow words."""
    rho: dict[tuple[int, ...], int] = {}
    for a in q.arrows:
        if a.starred:
            continue
        if a.source == i:
            rho[(a.index, a.partner)] = rho.get((a.index, a.partner), 0) + 1
        if a.target == i:
            rho[(a.partner, a.index)] = rho.get((a.partner, a.index), 0) - 1
    return rho


# --- Hilbert series ----------------------------------------------------------------

def _matmul(x, y):
    n, k, m = len(x), len(y), len(y[0])
    return [[sum(x[i][l] * y[l][j] for l in range(k)) for j in range(m)] for i in range(n)]


def hilbert_matrix(q: DoubleQuiver | CoxeterData) -> list[list[list[int]]]:
    """Entries of ``(1 + P t^h)(1 - C t + t^2)^{-1}`` as coefficient lists.

    ``H[i][j][d]`` is the coefficient of ``t^d``.  The inverse is expanded as
    a power series and certified to terminate at degree ``h - 2``.
    """
    cox = q if isinstance(q, CoxeterData) else coxeter(q.qtype)
    h, C, P = cox.h, cox.C, cox.P
    n = len(C)
    eye = [[int(i == j) for j in range(n)] for i in range(n)]
    zero = [[0] * n for _ in range(n)]
    X = [eye, [row[:] for row in C]]
    for k in range(2, h + 3):
        cx = _matmul(C, X[k - 1])
        X.append([[cx[i][j] - X[k - 2][i][j] for j in range(n)] for i in range(n)])
    H = []
    for k in range(h + 2):
        extra = _matmul(P, X[k - h]) if k >= h else zero
        H.append([[X[k][i][j] + extra[i][j] for j in range(n)] for i in range(n)])
    # the recurrence holds for H from degree h+2 on, so three zeros certify termination
    for k in (h - 1, h, h + 1):
        if any(any(row) for row in H[k]):
            raise HilbertMismatch(f"Hilbert series does not terminate at degree {k}")
    return [[[H[k][i][j] for k in range(h - 1)] for j in range(n)] for i in range(n)]


# --- the algebra -----------------------------------------------------------------------

@dataclass(frozen=True)
class PlainArrow:
    index: int
    source: int
    target: int
    name: str
    starred: bool = False
    partner: int = -1


@dataclass(frozen=True)
class PlainQuiver:
    """A quiver given by a vertex count and a list of named arrows."""

    nvertices: int
    arrows: tuple

    @classmethod
    def make(cls, nvertices: int, arrows) -> "PlainQuiver":
        """``arrows`` is a list of ``(source, target, name)``."""
        return cls(nvertices, tuple(PlainArrow(k, s, t, name) for k, (s, t, name) in enumerate(arrows)))


class GradedQuiverAlgebra:
    """Path algebra of a quiver modulo homogeneous relations, finite dimensional.

    ``basis`` is sorted by (degree, source, target, arrow word); the first
    ``r`` entries are the idempotents ``e_i``.  In each degree the ideal is
    the span of the relations and of the previous degree's ideal multiplied
    by arrows on either side.  Columns are ordered so that lex-larger words
    become pivots, leaving the lex-smallest monomials as the basis.
    """

    def __init__(self, quiver, relations, max_degree: int = 64):
        self.quiver = quiver
        self._relations = [{tuple(w): Fraction(c) for w, c in r.items() if c} for r in relations]
        self._normal: dict = {}
        self._mult: dict[tuple[int, int], dict] = {}
        self._build(max_degree)

    def _build(self, max_degree: int):
        q = self.quiver
        basis: list[Path] = []
        ideal_prev: list[dict] = []  # RREF rows of the ideal in degree d-1, keyed by (source, word)
        rels_by_degree: dict[int, list] = {}
        for r in self._relations:
            if r:
                rels_by_degree.setdefault(len(next(iter(r))), []).append(r)
        arrows = q.arrows
        d = 0
        while True:
            if d > max_degree:
                raise HilbertMismatch(f"algebra does not vanish up to degree {max_degree}")
            paths = paths_of_length(q, d)
            order = sorted(paths, key=lambda p: (p.arrows, p.source), reverse=True)
            col = {(p.source, p.arrows): c for c, p in enumerate(order)}
            gens: list[dict] = []
            for row in ideal_prev:
                for a in arrows:
                    right, left = {}, {}
                    for (src, w), v in row.items():
                        tgt = arrows[w[-1]].target
                        if tgt == a.source:
                            right[col[(src, w + (a.index,))]] = v
                        if a.target == src:
                            left[col[(a.source, (a.index,) + w)]] = v
                    for g in (right, left):
                        if g:
                            gens.append(g)
            for r in rels_by_degree.get(d, ()):
                g: dict = {}
                for w, v in r.items():
                    key = (arrows[w[0]].source, w)
                    if key not in col:
                        raise ValueError(f"relation word {w} is not a path")
                    g[col[key]] = g.get(col[key], 0) + v
                if any(g.values()):
                    gens.append(g)
            red, pivots = linalg.rref_rows(gens, len(order))
            pivset = set(pivots)
            survivors = sorted((order[c] for c in range(len(order)) if c not in pivset),
                               key=lambda p: (p.source, p.target, p.arrows))
            if not survivors:
                break
            basis.extend(survivors)
            for p in order:
                self._normal[(p.source, p.arrows)] = None
            for piv, row in zip(pivots, red):
                word = order[piv]
                self._normal[(word.source, word.arrows)] = {
                    (order[c].source, order[c].arrows): -v for c, v in row.items() if c != piv}
            ideal_prev = [{(order[c].source, order[c].arrows): v for c, v in row.items()} for row in red]
            d += 1
        self.top = d - 1
        self.basis: list[Path] = basis
        self.index = {(p.source, p.arrows): i for i, p in enumerate(basis)}
        self.degree = [p.length for p in basis]
        normal = {}
        for key, comb in self._normal.items():
            if comb is None:
                normal[key] = {self.index[key]: Fraction(1)}
            else:
                normal[key] = {self.index[k]: v for k, v in comb.items()}
        self._normal = normal

    # basic data ---------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def nvertices(self) -> int:
        return self.quiver.nvertices

    def graded_dims(self) -> dict[tuple[int, int, int], int]:
        out: dict[tuple[int, int, int], int] = {}
        for p in self.basis:
            k = (p.length, p.source, p.target)
            out[k] = out.get(k, 0) + 1
        return out

    def idempotent(self, i: int) -> int:
        return self.index[(i, ())]

    def source(self, b: int) -> int:
        return self.basis[b].source

    def target(self, b: int) -> int:
        return self.basis[b].target

    def name(self, b: int) -> str:
        return self.basis[b].name(self.quiver)

    @cached_property
    def by_endpoints(self) -> dict[tuple[int, int], list[int]]:
        out: dict[tuple[int, int], list[int]] = {}
        for b, p in enumerate(self.basis):
            out.setdefault((p.source, p.target), []).append(b)
        return out

    @cached_property
    def positive(self) -> list[int]:
        """Basis of A/R: the monomials of positive degree."""
        return [b for b in range(self.dim) if self.degree[b] > 0]

    @cached_property
    def star_count(self) -> list[int]:
        """Number of starred arrows in each basis monomial."""
        arrows = self.quiver.arrows
        return [sum(1 for a in p.arrows if arrows[a].starred) for p in self.basis]

    def normal_form(self, source: int, word: tuple[int, ...]) -> dict:
        if len(word) > self.top:
            return {}
        return self._normal[(source, word)]

    def is_associative(self) -> bool:
        n = self.dim
        for x in range(n):
            for y in range(n):
                xy = self.mul_basis(x, y)
                for z in range(n):
                    if self.mul(xy, {z: 1}) != self.mul({x: 1}, self.mul_basis(y, z)):
                        return False
        return True

    # multiplication -----------------------------------------------------------

    def mul_basis(self, x: int, y: int) -> dict:
        key = (x, y)
        res = self._mult.get(key)
        if res is None:
            px, py = self.basis[x], self.basis[y]
            if px.target != py.source:
                res = {}
            else:
                res = self.normal_form(px.source, px.arrows + py.arrows)
            self._mult[key] = res
        return res

    def mul(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for x, a in u.items():
            for y, b in v.items():
                for z, c in self.mul_basis(x, y).items():
                    nv = out.get(z, 0) + a * b * c
                    if nv:
                        out[z] = nv
                    else:
                        out.pop(z, None)
        return out

    def element(self, word: tuple[int, ...] | str, source: int | None = None) -> dict:
        """Element of A from an arrow word (indices) or a dotted name like ``"a0.a0*"``."""
        if isinstance(word, str):
            if word.startswith("e") and word[1:].isdigit():
                return {self.idempotent(int(word[1:]) - 1): Fraction(1)}
            names = {a.name: a.index for a in self.quiver.arrows}
            word = tuple(names[w] for w in word.split("."))
        if not word:
            if source is None:
                raise ValueError("trivial path needs a vertex")
            return {self.idempotent(source): Fraction(1)}
        arrows = self.quiver.arrows
        for a, b in zip(word, word[1:]):
            if arrows[a].target != arrows[b].source:
                return {}
        return dict(self.normal_form(arrows[word[0]].source, tuple(word)))

    def one(self) -> dict:
        return {self.idempotent(i): Fraction(1) for i in range(self.nvertices)}

    # Frobenius structure --------------------------------------------------------

    @cached_property
    def frobenius(self) -> "FrobeniusStructure":
        return frobenius(self)

    def to_json(self) -> str:
        fr = self.frobenius
        doc = {
            "format": "preproj.algebra/1",
            "type": str(getattr(self.quiver, "qtype", "custom")),
            "h": getattr(self, "h", None),
            "basis": [{"index": b, "name": self.name(b), "degree": self.degree[b],
                       "source": self.source(b), "target": self.target(b)}
                      for b in range(self.dim)],
            "dims": [{"d": d, "i": i, "j": j, "dim": k}
                     for (d, i, j), k in sorted(self.graded_dims().items())],
            "mult": [{"left": x, "right": y,
                      "coeffs": {str(z): str(c) for z, c in sorted(self.mul_basis(x, y).items())}}
                     for x in range(self.dim) for y in range(self.dim) if self.mul_basis(x, y)],
            "frobenius": {"f": {str(b): str(v) for b, v in sorted(fr.f.items())},
                          "eta": {str(b): {str(c): str(v) for c, v in sorted(img.items())}
                                  for b, img in enumerate(fr.eta)}},
        }
        return json.dumps(doc, indent=1, sort_keys=True)


class PreprojectiveAlgebra(GradedQuiverAlgebra):
    """``A = Pi_Q``: the double quiver modulo ``sum_{a in Q} [a, a*]``.

    Construction is certified against the Hilbert series: every graded
    piece ``e_i A(d) e_j`` must have the predicted dimension.
    """

    def __init__(self, quiver: DoubleQuiver):
        self.coxeter = coxeter(quiver.qtype)
        self.h = self.coxeter.h
        rels = [relation(quiver, i) for i in range(quiver.nvertices)]
        super().__init__(quiver, rels, max_degree=self.h)
        if self.top != self.h - 2 and quiver.nvertices > 1:
            raise HilbertMismatch(f"top degree {self.top}, expected h-2 = {self.h - 2}")
        self._check_hilbert()

    def _check_hilbert(self):
        H = hilbert_matrix(self.coxeter)
        dims = self.graded_dims()
        n = self.quiver.nvertices
        for i in range(n):
            for j in range(n):
                for d in range(self.h - 1):
                    got = dims.get((d, i, j), 0)
                    if got != H[i][j][d]:
                        raise HilbertMismatch(
                            f"dim e{i + 1}A({d})e{j + 1} = {got}, Hilbert series says {H[i][j][d]}")

    def star(self, u: dict) -> dict:
        """The anti-involution reversing every arrow: ``(xy)* = y* x*``."""
        arrows = self.quiver.arrows
        out: dict = {}
        for x, a in u.items():
            p = self.basis[x]
            if not p.arrows:
                img = {x: Fraction(1)}
            else:
                img = self.normal_form(p.target, tuple(arrows[b].partner for b in reversed(p.arrows)))
            linalg.axpy(out, a, img)
        return out


@dataclass
class FrobeniusStructure:
    algebra: PreprojectiveAlgebra
    f: dict  # basis index -> value
    gram: linalg.SparseMatrix
    eta: list  # eta[x] = image of basis x as dict

    def functional(self, u: dict) -> Fraction:
        return sum((a * self.f.get(x, 0) for x, a in u.items()), Fraction(0))

    def form(self, u: dict, v: dict) -> Fraction:
        return self.functional(self.algebra.mul(u, v))

    def nakayama(self, u: dict) -> dict:
        out: dict = {}
        for x, a in u.items():
            linalg.axpy(out, a, self.eta[x])
        return out


def frobenius(alg: PreprojectiveAlgebra, f: dict | None = None) -> FrobeniusStructure:
    """Frobenius form ``(x, y) = f(xy)`` and the Nakayama automorphism.

    By default ``f`` is 1 on the basis monomial of each ``e_i A(h-2) e_nu(i)``
    and 0 elsewhere.
    """
    if f is None:
        f = {b: Fraction(1) for b in range(alg.dim) if alg.degree[b] == alg.top}
    n = alg.dim
    gram = {}
    for x in range(n):
        for y in range(n):
            v = sum((c * f.get(z, 0) for z, c in alg.mul_basis(x, y).items()), Fraction(0))
            if v:
                gram[(x, y)] = v
    G = linalg.SparseMatrix(n, n, gram)
    if linalg.rank(G) != n:
        raise DegenerateForm("Gram matrix of the Frobenius form is singular")
    # (x, y) = (y, eta(x)):  sum_z G[y, z] eta(x)_z = G[x, y]
    rows = G.row_dicts()
    eta = []
    for x in range(n):
        sol = linalg.solve(rows, n, [G[x, y] for y in range(n)])
        eta.append(linalg.to_sparse(sol))
    return FrobeniusStructure(alg, dict(f), G, eta)


def build_preprojective(q: DoubleQuiver | str) -> PreprojectiveAlgebra:
    if isinstance(q, str):
        q = build(q)
    require_supported(q.qtype)
    return PreprojectiveAlgebra(q)
