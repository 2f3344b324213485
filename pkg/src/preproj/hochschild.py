"""Normalized bar complexes of A relative to R = span{e_i}, and the calculus
operations on them.

Chains of level n are keys ``(a0, a1, ..., an)`` of basis indices with
``a1..an`` of positive degree, consecutive ones composable, and ``a0`` in
``e_t(an) A e_s(a1)`` (a loop when n = 0).  Cochains of level n are keys
``(seq, b)``: the R-bimodule map sending the basis tensor ``seq`` to ``b``
and every other basis tensor to 0, so ``b`` lies in ``e_s(seq) A e_t(seq)``.
The internal degree of a chain is the sum of the degrees of its entries;
that of a cochain is ``deg b - deg seq``.  All operators preserve or shift
internal degree predictably and are assembled per (level, degree) block.

Vectors are plain dicts from keys to Fractions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import linalg
from .algebra import PreprojectiveAlgebra

HOMOLOGY = "homology"
COHOMOLOGY = "cohomology"


class TruncationTooShallow(ValueError):
    pass


class NotACycle(ValueError):
    pass


class ComplexIdentityFailure(RuntimeError):
    pass


def _add(out: dict, key, val):
    nv = out.get(key, 0) + val
    if nv:
        out[key] = nv
    else:
        out.pop(key, None)


def combine(*terms) -> dict:
    """Linear combination of (coefficient, vector) pairs."""
    out: dict = {}
    for a, v in terms:
        if a:
            for k, x in v.items():
                _add(out, k, a * x)
    return out


def scale(a, v: dict) -> dict:
    return {k: a * x for k, x in v.items()} if a else {}


def level(key, kind) -> int:
    return len(key) - 1 if kind == HOMOLOGY else len(key[0])


def cochain_map(f: dict) -> dict:
    """Group a cochain vector as ``seq -> {b: coeff}``."""
    out: dict = {}
    for (seq, b), c in f.items():
        out.setdefault(seq, {})[b] = c
    return out


class ChainComplexPair:
    """Truncated normalized relative Hochschild chain and cochain complexes.

    Blocks are enumerated lazily; ``N`` is the top level whose homology is
    reported (levels ``0..N-1``; level ``N`` is built to compute images).
    """

    def __init__(self, alg: PreprojectiveAlgebra, N: int = 8, check: bool = True):
        if N < 2:
            raise ValueError("truncation N must be at least 2")
        self.alg = alg
        self.N = N
        self._seqs: list[dict] = [{}]
        for v in range(alg.nvertices):
            self._seqs[0][(v, v, 0)] = [()]
        self._chain_blocks: dict = {}
        self._cochain_blocks: dict = {}
        self._homology: dict = {}
        self._pos = alg.positive
        if check:
            self.check_identities()

    # ---- enumeration -------------------------------------------------------------

    def seqs(self, n: int) -> dict:
        """Composable tensors of n positive basis elements, grouped by (source, target, degree)."""
        alg = self.alg
        while len(self._seqs) <= n:
            m = len(self._seqs)
            nxt: dict = {}
            if m == 1:
                for b in self._pos:
                    nxt.setdefault((alg.source(b), alg.target(b), alg.degree[b]), []).append((b,))
            else:
                by_src: dict = {}
                for b in self._pos:
                    by_src.setdefault(alg.source(b), []).append(b)
                for (s, t, e), lst in self._seqs[m - 1].items():
                    for b in by_src.get(t, ()):
                        key = (s, alg.target(b), e + alg.degree[b])
                        bucket = nxt.setdefault(key, [])
                        bucket.extend(seq + (b,) for seq in lst)
            for lst in nxt.values():
                lst.sort()
            self._seqs.append(nxt)
        return self._seqs[n]

    def _endpoint_degree(self, s: int, t: int, deg: int) -> list[int]:
        return [b for b in self.alg.by_endpoints.get((s, t), ()) if self.alg.degree[b] == deg]

    def chain_basis(self, n: int, d: int) -> list[tuple]:
        key = (n, d)
        blk = self._chain_blocks.get(key)
        if blk is None:
            out = []
            for (s, t, e), lst in self.seqs(n).items():
                a0s = self._endpoint_degree(t, s, d - e)
                for seq in lst:
                    for a0 in a0s:
                        out.append((a0,) + seq)
            out.sort(key=lambda k: (k[1:], k[0]))
            blk = (out, {k: i for i, k in enumerate(out)})
            self._chain_blocks[key] = blk
        return blk[0]

    def chain_index(self, n: int, d: int) -> dict:
        self.chain_basis(n, d)
        return self._chain_blocks[(n, d)][1]

    def cochain_basis(self, n: int, d: int) -> list[tuple]:
        key = (n, d)
        blk = self._cochain_blocks.get(key)
        if blk is None:
            out = []
            for (s, t, e), lst in self.seqs(n).items():
                bs = self._endpoint_degree(s, t, d + e)
                for seq in lst:
                    for b in bs:
                        out.append((seq, b))
            out.sort()
            blk = (out, {k: i for i, k in enumerate(out)})
            self._cochain_blocks[key] = blk
        return blk[0]

    def cochain_index(self, n: int, d: int) -> dict:
        self.cochain_basis(n, d)
        return self._cochain_blocks[(n, d)][1]

    def basis(self, kind: str, n: int, d: int) -> list[tuple]:
        return self.chain_basis(n, d) if kind == HOMOLOGY else self.cochain_basis(n, d)

    def index(self, kind: str, n: int, d: int) -> dict:
        return self.chain_index(n, d) if kind == HOMOLOGY else self.cochain_index(n, d)

    def degrees(self, kind: str, n: int) -> list[int]:
        out = set()
        for (s, t, e) in self.seqs(n):
            for b in self.alg.by_endpoints.get((t, s) if kind == HOMOLOGY else (s, t), ()):
                g = self.alg.degree[b]
                out.add(e + g if kind == HOMOLOGY else g - e)
        return sorted(out)

    def dim(self, kind: str, n: int, d: int) -> int:
        return len(self.basis(kind, n, d))

    def degree_of(self, vec: dict, kind: str) -> int | None:
        for key in vec:
            if kind == HOMOLOGY:
                return sum(self.alg.degree[x] for x in key)
            seq, b = key
            return self.alg.degree[b] - sum(self.alg.degree[x] for x in seq)
        return None

    # ---- differentials ------------------------------------------------------------

    def boundary(self, c: dict) -> dict:
        """Hochschild boundary b on chains."""
        mul = self.alg.mul_basis
        out: dict = {}
        for key, coef in c.items():
            n = len(key) - 1
            if n == 0:
                continue
            for i in range(n):
                sign = coef if i % 2 == 0 else -coef
                pre, post = key[:i], key[i + 2:]
                for z, v in mul(key[i], key[i + 1]).items():
                    _add(out, pre + (z,) + post, sign * v)
            sign = coef if n % 2 == 0 else -coef
            mid = key[1:n]
            for z, v in mul(key[n], key[0]).items():
                _add(out, (z,) + mid, sign * v)
        return out

    def coboundary(self, f: dict) -> dict:
        """Hochschild coboundary on cochains (homogeneous in level)."""
        if not f:
            return {}
        alg = self.alg
        mul = alg.mul_basis
        fmap = cochain_map(f)
        n = len(next(iter(f))[0])
        d = self.degree_of(f, COHOMOLOGY)
        out: dict = {}
        # evaluate (delta f) on every target tensor of level n+1 that can be hit
        targets = set(seq for seq, _ in self.cochain_basis(n + 1, d))
        for seq in targets:
            val: dict = {}
            a1, last = seq[0], seq[-1]
            # a1 * f(a2..)
            for b, c in fmap.get(seq[1:], {}).items():
                for z, v in mul(a1, b).items():
                    _add(val, z, c * v)
            for i in range(1, n + 1):
                sign = 1 if i % 2 == 0 else -1
                for z, v in mul(seq[i - 1], seq[i]).items():
                    inner = seq[:i - 1] + (z,) + seq[i + 1:]
                    for b, c in fmap.get(inner, {}).items():
                        _add(val, b, sign * c * v)
            sign = 1 if (n + 1) % 2 == 0 else -1
            for b, c in fmap.get(seq[:-1], {}).items():
                for z, v in mul(b, last).items():
                    _add(val, z, sign * c * v)
            for b, c in val.items():
                out[(seq, b)] = c
        return out

    def connes_B(self, c: dict) -> dict:
        """Connes operator B on normalized chains."""
        alg = self.alg
        out: dict = {}
        for key, coef in c.items():
            n = len(key) - 1
            if alg.degree[key[0]] == 0:
                continue
            for i in range(n + 1):
                rot = key[i:] + key[:i]
                e = alg.idempotent(alg.source(rot[0]))
                sign = coef if (n * i) % 2 == 0 else -coef
                _add(out, (e,) + rot, sign)
        return out

    # ---- block matrices --------------------------------------------------------------

    def matrix(self, op, kind_in: str, n_in: int, d_in: int, kind_out: str, n_out: int, d_out: int):
        """Matrix of a linear operator between two blocks (rows = target basis)."""
        src = self.basis(kind_in, n_in, d_in)
        tgt = self.index(kind_out, n_out, d_out)
        cols = []
        for key in src:
            img = op({key: Fraction(1)})
            col = {}
            for k, v in img.items():
                try:
                    col[tgt[k]] = v
                except KeyError:
                    raise ComplexIdentityFailure(f"operator left its target block at {k}") from None
            cols.append(col)
        return linalg.SparseMatrix.from_columns(cols, len(tgt))

    def check_identities(self, levels: Iterable[int] | None = None):
        """Verify b^2 = 0, delta^2 = 0, B^2 = 0 and bB + Bb = 0 on every block."""
        levels = range(self.N + 1) if levels is None else levels
        for n in levels:
            for d in self.degrees(HOMOLOGY, n):
                for key in self.chain_basis(n, d):
                    c = {key: Fraction(1)}
                    bc = self.boundary(c)
                    if self.boundary(bc):
                        raise ComplexIdentityFailure(f"b^2 != 0 on {key}")
                    Bc = self.connes_B(c)
                    if self.connes_B(Bc):
                        raise ComplexIdentityFailure(f"B^2 != 0 on {key}")
                    if combine((1, self.boundary(Bc)), (1, self.connes_B(bc))):
                        raise ComplexIdentityFailure(f"bB + Bb != 0 on {key}")
            if n + 2 <= self.N:
                for d in self.degrees(COHOMOLOGY, n):
                    for key in self.cochain_basis(n, d):
                        f = {key: Fraction(1)}
                        if self.coboundary(self.coboundary(f)):
                            raise ComplexIdentityFailure(f"delta^2 != 0 on {key}")
        return True

    # ---- homology ---------------------------------------------------------------------

    def homology(self, kind: str, n: int, d: int, *, limit: int | None = None) -> "HomologyBlock":
        top = self.N - 1 if limit is None else limit
        if n > top:
            raise TruncationTooShallow(f"level {n} needs truncation above N = {self.N}")
        key = (kind, n, d)
        blk = self._homology.get(key)
        if blk is None:
            blk = HomologyBlock.compute(self, kind, n, d)
            self._homology[key] = blk
        return blk

    def hh(self, kind: str, n: int) -> list["HHClass"]:
        """Basis classes of HH_n (kind homology) or HH^n (cohomology), all internal degrees."""
        out = []
        for d in self.degrees(kind, n):
            out.extend(self.homology(kind, n, d).classes())
        return out

    def dim_table(self, kind: str, n: int) -> dict[int, int]:
        table = {}
        for d in self.degrees(kind, n):
            k = self.homology(kind, n, d).dim
            if k:
                table[d] = k
        return table

    def dims_json(self, kinds=(HOMOLOGY, COHOMOLOGY)) -> str:
        rows = []
        for kind in kinds:
            for n in range(self.N):
                for d, k in sorted(self.dim_table(kind, n).items()):
                    rows.append({"kind": kind, "n": n, "d": d, "dim": k})
        return json.dumps(rows, indent=1)

    def differential(self, kind: str):
        return self.boundary if kind == HOMOLOGY else self.coboundary

    def class_of(self, vec: dict, kind: str, n: int | None = None, d: int | None = None) -> "HHClass":
        if n is None:
            n = level(next(iter(vec)), kind) if vec else 0
        if d is None:
            d = self.degree_of(vec, kind) or 0
        return HHClass(kind, n, d, dict(vec), pair=self)

    def coords(self, vec: dict, kind: str, n: int, d: int, limit: int | None = None) -> list[Fraction]:
        return self.homology(kind, n, d, limit=limit).coords(vec)

    # ---- calculus operations --------------------------------------------------------

    def cup(self, f: dict, g: dict) -> dict:
        return cup(self.alg, f, g)

    def contract(self, f: dict, c: dict) -> dict:
        return contract(self.alg, f, c)

    def bracket(self, f: dict, g: dict) -> dict:
        return bracket(self.alg, f, g)

    def lie_derivative(self, f: dict, c: dict) -> dict:
        return lie_derivative(self.alg, f, c)

    def unit(self) -> dict:
        alg = self.alg
        return {((), alg.idempotent(i)): Fraction(1) for i in range(alg.nvertices)}


# --------------------------------------------------------------------------------------
# operations (module level so they can be used without a complex)


def _level_of_cochain(f: dict) -> int:
    return len(next(iter(f))[0]) if f else 0


def cup(alg, f: dict, g: dict) -> dict:
    """Cup product ordered so that contraction is a left action.

    ``(f cup g)(a1..a_{p+q}) = g(a1..aq) f(a_{q+1}..a_{q+p})``, which gives
    ``iota_{f cup g} = iota_f iota_g`` on the nose.  On cohomology it agrees
    with the other ordering up to the Koszul sign ``(-1)^{pq}``.
    """
    return _concat_product(alg, g, f)


def _concat_product(alg, f: dict, g: dict) -> dict:
    """(f . g)(a1..a_{p+q}) = f(a1..ap) g(a_{p+1}..a_{p+q})."""
    mul = alg.mul_basis
    out: dict = {}
    gmap = cochain_map(g)
    for (sf, bf), cf in f.items():
        for sg, vals in gmap.items():
            if sf and sg and alg.target(sf[-1]) != alg.source(sg[0]):
                continue
            seq = sf + sg
            for bg, cg in vals.items():
                for z, v in mul(bf, bg).items():
                    _add(out, (seq, z), cf * cg * v)
    return out


def contract(alg, f: dict, c: dict) -> dict:
    """iota_f(a0, a1, ..., an) = (a0 f(a1..ak), a_{k+1}, ..., an), zero if n < k."""
    if not f or not c:
        return {}
    mul = alg.mul_basis
    fmap = cochain_map(f)
    k = _level_of_cochain(f)
    out: dict = {}
    for key, coef in c.items():
        n = len(key) - 1
        if n < k:
            continue
        val = fmap.get(key[1:k + 1])
        if not val:
            continue
        rest = key[k + 1:]
        a0 = key[0]
        for b, cb in val.items():
            for z, v in mul(a0, b).items():
                _add(out, (z,) + rest, coef * cb * v)
    return out


def compose(alg, f: dict, g: dict) -> dict:
    """Gerstenhaber pre-Lie product f o g, inserting g (projected to A/R) into f."""
    if not f or not g:
        return {}
    p = _level_of_cochain(f)
    q = _level_of_cochain(g)
    # index f by (position, entry)
    slots: dict = {}
    for (sf, bf), cf in f.items():
        for i, x in enumerate(sf):
            slots.setdefault((i, x), []).append((sf, bf, cf))
    out: dict = {}
    deg = alg.degree
    for (sg, bg), cg in g.items():
        if deg[bg] == 0:
            continue
        for i in range(p):
            sign = -1 if ((q - 1) * i) % 2 else 1
            for sf, bf, cf in slots.get((i, bg), ()):
                _add(out, (sf[:i] + sg + sf[i + 1:], bf), sign * cf * cg)
    return out


def bracket(alg, f: dict, g: dict) -> dict:
    """[f, g] = f o g - (-1)^{(p-1)(q-1)} g o f."""
    if not f or not g:
        return {}
    p = _level_of_cochain(f)
    q = _level_of_cochain(g)
    sign = -1 if ((p - 1) * (q - 1)) % 2 == 0 else 1
    return combine((1, compose(alg, f, g)), (sign, compose(alg, g, f)))


def lie_derivative(alg, f: dict, c: dict) -> dict:
    """Action of a cochain on chains.

    Every cyclically consecutive window of k entries of ``(a0, ..., an)`` is
    replaced by its value under f.  Windows not containing a0 keep the output
    in place (projected to A/R); windows through a0 put the output in the a0
    slot and rotate the remaining entries after it.
    """
    if not f or not c:
        return {}
    deg = alg.degree
    fmap = cochain_map(f)
    k = _level_of_cochain(f)
    out: dict = {}
    for key, coef in c.items():
        n = len(key) - 1
        # inner windows key[i+1 .. i+k]
        for i in range(0, n - k + 1):
            val = fmap.get(key[i + 1:i + k + 1])
            if not val:
                continue
            sign = coef if ((k - 1) * i) % 2 == 0 else -coef
            pre, post = key[:i + 1], key[i + k + 1:]
            for b, cb in val.items():
                # a 0-cochain is a sum over vertices; only the matching loop survives
                if deg[b] and (k or alg.source(b) == alg.target(key[i])):
                    _add(out, pre + (b,) + post, sign * cb)
        if k == 0 or k > n + 1 or deg[key[0]] == 0:
            continue
        # windows through a0: start at position j (j = n-k+2 .. n+1, position n+1 is a0)
        for j in range(max(1, n - k + 2), n + 2):
            m = n + 1 - j  # entries taken from the end
            window = key[j:] + key[:k - m]
            val = fmap.get(window)
            if not val:
                continue
            rest = key[k - m:j]
            sign = -coef if _wrap_sign(n, k, m) else coef
            for b, cb in val.items():
                _add(out, (b,) + rest, sign * cb)
    return out


def _wrap_sign(n: int, k: int, m: int) -> int:
    # rotating m entries from the end costs (-1)^{nm}; the extra (-1)^{k-1}
    # makes [b, L_f] = (-1)^k L_{delta f} hold on the nose
    return (n * m + k - 1) % 2


# --------------------------------------------------------------------------------------


@dataclass
class HomologyBlock:
    """Homology (or cohomology) of one (level, degree) block with canonical representatives."""

    kind: str
    n: int
    d: int
    basis: list
    boundaries: linalg.Echelon
    reps: list  # RREF rows (index space) of the chosen complement
    rep_pivots: list
    cycle_dim: int

    @property
    def dim(self) -> int:
        return len(self.reps)

    @classmethod
    def compute(cls, pair: ChainComplexPair, kind: str, n: int, d: int) -> "HomologyBlock":
        basis = pair.basis(kind, n, d)
        dim = len(basis)
        E = linalg.Echelon(dim)
        if dim == 0:
            return cls(kind, n, d, basis, E, [], [], 0)
        op = pair.differential(kind)
        # image of the incoming differential
        src_n = n + 1 if kind == HOMOLOGY else n - 1
        if src_n >= 0:
            idx = pair.index(kind, n, d)
            for key in pair.basis(kind, src_n, d):
                img = op({key: Fraction(1)})
                if img:
                    E.add({idx[k]: v for k, v in img.items()})
        # kernel of the outgoing differential
        tgt_n = n - 1 if kind == HOMOLOGY else n + 1
        if kind == HOMOLOGY and n == 0:
            cycles = [{i: Fraction(1)} for i in range(dim)]
        else:
            tidx = pair.index(kind, tgt_n, d)
            cols = []
            for key in basis:
                img = op({key: Fraction(1)})
                cols.append({tidx[k]: v for k, v in img.items()})
            M = linalg.SparseMatrix.from_columns(cols, len(tidx))
            cycles = linalg.kernel_rows(M.row_dicts(), dim)
        H = linalg.Echelon(dim)
        for z in cycles:
            r = E.reduce(z)
            if r:
                H.add(r)
        reps = H.basis()
        return cls(kind, n, d, basis, E, reps, H.pivots, len(cycles))

    def vector(self, j: int) -> dict:
        return {self.basis[i]: v for i, v in self.reps[j].items()}

    def classes(self) -> list["HHClass"]:
        return [HHClass(self.kind, self.n, self.d, self.vector(j), index=j) for j in range(self.dim)]

    def _indexed(self, vec: dict) -> dict:
        idx = {k: i for i, k in enumerate(self.basis)} if not hasattr(self, "_idx") else self._idx
        self._idx = idx
        try:
            return {idx[k]: v for k, v in vec.items()}
        except KeyError as exc:
            raise NotACycle(f"vector leaves the block ({exc})") from None

    def coords(self, vec: dict) -> list[Fraction]:
        """Coordinates of a cycle in the representative basis (exact; raises if not a cycle)."""
        r = self.boundaries.reduce(self._indexed(vec))
        x = [r.get(p, Fraction(0)) for p in self.rep_pivots]
        for a, row in zip(x, self.reps):
            if a:
                linalg.axpy(r, -a, row)
        if r:
            raise NotACycle("vector is not a cycle of this block")
        return x

    def is_boundary(self, vec: dict) -> bool:
        return not any(self.coords(vec))


@dataclass
class HHClass:
    kind: str
    n: int
    d: int
    vector: dict
    label: object = None
    index: int | None = None
    pair: object = field(default=None, repr=False, compare=False)

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "d": self.d,
                "label": None if self.label is None else str(self.label),
                "representative": [[list(k) if self.kind == HOMOLOGY else [list(k[0]), k[1]], str(v)]
                                   for k, v in sorted(self.vector.items())]}


def build_complex(alg: PreprojectiveAlgebra, N: int = 8, check: bool = True) -> ChainComplexPair:
    return ChainComplexPair(alg, N, check=check)
