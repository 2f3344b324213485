"""Poincare duality HH_n -> HH^{6m+2-n}[2mh+2], the BV operator it induces, and
the identification of computed classes with the named bases z, omega, theta,
f, h, zeta, psi, epsilon.

The duality is realised through a fundamental class ``c*`` in
``HH_{6m+2}(2mh+2)``: its inverse is ``eta -> iota_eta c*``, and ``D`` is
obtained by inverting that map block by block.  With the cup ordering used in
``hochschild`` this makes ``D(iota_eta c) = eta cup D(c)`` hold by
construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .hochschild import COHOMOLOGY, HOMOLOGY, ChainComplexPair, TruncationTooShallow, combine, level
from .tables import COCYCLE, CYCLE, LAG, SymbolicElement, Symbol, TypeMetadata


class NoSolution(ValueError):
    """The duality block is not invertible (dimension mismatch or singular)."""


class Underdetermined(ValueError):
    """The fundamental class is not pinned down (HH_{6m+2}(2mh+2) is not a line)."""


class AmbiguousBlock(ValueError):
    """A label was requested from a block whose dimension exceeds one."""


def _vec(block, x) -> dict:
    out: dict = {}
    for j, a in enumerate(x):
        if a:
            for k, v in block.vector(j).items():
                out[k] = out.get(k, 0) + a * v
    return {k: v for k, v in out.items() if v}


class DualityMap:
    """``D: HH_n(d) -> HH^{6m+2-n}(d-2mh-2)`` for a fixed period index m."""

    def __init__(self, pair: ChainComplexPair, m: int = 1):
        if m < 0:
            raise ValueError("period index m must be non-negative")
        self.pair = pair
        self.m = m
        self.h = pair.alg.h
        self.top = 6 * m + 2
        self.shift = 2 * m * self.h + 2
        blk = pair.homology(HOMOLOGY, self.top, self.shift, limit=self.top)
        if blk.dim != 1:
            raise Underdetermined(
                f"HH_{self.top}({self.shift}) has dimension {blk.dim}, need 1")
        self.fundamental = blk.vector(0)
        self._blocks: dict = {}

    # homology blocks up to level 6m+2 are allowed; levels above need one more
    def _hom(self, n: int, d: int):
        return self.pair.homology(HOMOLOGY, n, d, limit=max(self.top, self.pair.N - 1))

    def _coh(self, j: int, e: int):
        return self.pair.homology(COHOMOLOGY, j, e)

    def partner(self, n: int, d: int) -> tuple[int, int]:
        return self.top - n, d - self.shift

    def inverse(self, eta: dict) -> dict:
        """D^{-1}(eta) = iota_eta c* (a chain, not reduced)."""
        return self.pair.contract(eta, self.fundamental)

    def block(self, n: int, d: int):
        """Matrix T with columns the HH_n(d)-coordinates of iota_{eta_i} c*, and its inverse."""
        key = (n, d)
        if key in self._blocks:
            return self._blocks[key]
        j, e = self.partner(n, d)
        if j < 0:
            raise NoSolution(f"HH_{n} lies beyond the duality window (6m+2 = {self.top})")
        if j > self.pair.N - 1:
            raise TruncationTooShallow(f"HH^{j} needs N > {j}")
        hb, cb = self._hom(n, d), self._coh(j, e)
        if hb.dim != cb.dim:
            raise NoSolution(f"dim HH_{n}({d}) = {hb.dim} but dim HH^{j}({e}) = {cb.dim}")
        cols = [dict(enumerate(hb.coords(self.inverse(cb.vector(i))))) for i in range(cb.dim)]
        T = linalg.SparseMatrix.from_columns(cols, hb.dim)
        if linalg.rank(T) != hb.dim:
            raise NoSolution(f"duality block HH_{n}({d}) is singular")
        res = (T, linalg.inverse(T) if hb.dim else T)
        self._blocks[key] = res
        return res

    def is_bijective(self, n: int, d: int) -> bool:
        try:
            self.block(n, d)
        except NoSolution:
            return False
        return True

    def coords(self, c: dict, n: int, d: int) -> list[Fraction]:
        """Coordinates of D(c) in the representative basis of HH^{6m+2-n}."""
        _, Tinv = self.block(n, d)
        x = self._hom(n, d).coords(c)
        y = Tinv.apply(dict(enumerate(x)))
        j, e = self.partner(n, d)
        return [y.get(i, Fraction(0)) for i in range(self._coh(j, e).dim)]

    def __call__(self, c: dict, n: int | None = None, d: int | None = None) -> dict:
        if not c:
            return {}
        if n is None:
            n = level(next(iter(c)), HOMOLOGY)
        if d is None:
            d = self.pair.degree_of(c, HOMOLOGY)
        j, e = self.partner(n, d)
        return _vec(self._coh(j, e), self.coords(c, n, d))


def build_duality(pair: ChainComplexPair, m: int = 1) -> DualityMap:
    return DualityMap(pair, m)


@dataclass
class BVOperator:
    """Delta = D B D^{-1} on HH^j(e), landing in HH^{j-1}(e)."""

    duality: DualityMap
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def pair(self) -> ChainComplexPair:
        return self.duality.pair

    def __call__(self, eta: dict, j: int | None = None, e: int | None = None) -> dict:
        if not eta:
            return {}
        if j is None:
            j = level(next(iter(eta)), COHOMOLOGY)
        D = self.duality
        if j == 0:
            # D^{-1} is only an inverse where HH_{6m+2} <-> HH^0 is a bijective block,
            # and B then lands in HH_{6m+3}, which has to vanish on the class
            if e is None:
                e = self.pair.degree_of(eta, COHOMOLOGY)
            D.block(D.top, e + D.shift)
            c = self.pair.connes_B(D.inverse(eta))
            if c and not self.pair.homology(HOMOLOGY, D.top + 1, e + D.shift, limit=D.top + 1).is_boundary(c):
                raise NoSolution("Delta on HH^0 would land beyond the duality window")
            return {}
        if j > D.top:
            raise NoSolution(f"HH^{j} lies beyond the duality window (6m+2 = {D.top})")
        c = self.pair.connes_B(D.inverse(eta))
        if not c:
            return {}
        n = D.top - j + 1
        if e is None:
            e = self.pair.degree_of(eta, COHOMOLOGY)
        return D(c, n, e + D.shift)

    def matrix(self, j: int, e: int) -> list[list[Fraction]]:
        """Delta on the representative basis: rows index HH^{j-1}(e), columns HH^j(e)."""
        key = (j, e)
        if key not in self._cache:
            src = self.duality._coh(j, e)
            tgt = self.duality._coh(j - 1, e) if j else None
            cols = []
            for i in range(src.dim):
                img = self(src.vector(i), j, e)
                cols.append(tgt.coords(img) if (tgt is not None and img) else
                            [Fraction(0)] * (tgt.dim if tgt is not None else 0))
            rows = len(cols[0]) if cols else (tgt.dim if tgt is not None else 0)
            self._cache[key] = [[cols[c][r] for c in range(len(cols))] for r in range(rows)]
        return self._cache[key]

    def squares_to_zero(self, j: int, e: int) -> bool:
        if j < 2:
            return True
        x = self.matrix(j, e)
        y = self.matrix(j - 1, e)
        if not x or not y or not x[0]:
            return True
        return all(sum(y[r][k] * x[k][c] for k in range(len(x))) == 0
                   for r in range(len(y)) for c in range(len(x[0])))


def bv_delta(d: DualityMap) -> BVOperator:
    return BVOperator(d)


def bv_combination(delta: BVOperator, a: dict, p: int, b: dict, q: int) -> dict:
    """Delta(a cup b) - Delta(a) cup b - (-1)^p a cup Delta(b), as a cochain."""
    pair = delta.pair
    sign = -1 if p % 2 else 1
    return combine((1, delta(pair.cup(a, b), p + q)),
                   (-1, pair.cup(delta(a, p), b)),
                   (-sign, pair.cup(a, delta(b, q))))


def bv_bracket(delta: BVOperator, a: dict, p: int, b: dict, q: int) -> dict:
    """The bracket generated by Delta: (-1)^{p+1} times the BV combination.

    The prefactor makes the result graded antisymmetric and equal to the
    pre-Lie bracket on cohomology; for odd p it is +1.
    """
    x = bv_combination(delta, a, p, b, q)
    return x if p % 2 else {k: -v for k, v in x.items()}


# ---- labels ------------------------------------------------------------------------


def euler_derivation(pair: ChainComplexPair) -> dict:
    """theta_0: the derivation multiplying a path by its number of starred arrows."""
    alg = pair.alg
    sc = alg.star_count
    return {((x,), x): Fraction(sc[x]) for x in alg.positive if sc[x]}


@dataclass
class LabelAssignment:
    """Engine representatives for the named cocycles c_k^{(s)} and cycles c_{k,t}."""

    pair: ChainComplexPair
    duality: DualityMap
    meta: TypeMetadata
    cocycles: dict  # Symbol -> cochain
    cycles: dict  # Symbol -> chain
    notes: list = field(default_factory=list)

    def vector(self, sym: Symbol) -> dict:
        table = self.cocycles if sym.variant == COCYCLE else self.cycles
        if sym not in table:
            raise KeyError(f"{sym} is not reachable with N = {self.pair.N}")
        return table[sym]

    def has(self, sym: Symbol) -> bool:
        return sym in (self.cocycles if sym.variant == COCYCLE else self.cycles)

    def realize(self, x, variant: str) -> dict:
        """Engine vector of a SymbolicElement (or Symbol)."""
        terms = x.terms if hasattr(x, "terms") else {x: Fraction(1)}
        out: dict = {}
        for s, c in terms.items():
            for k, v in self.vector(s).items():
                out[k] = out.get(k, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def block_symbols(self, variant: str, n: int, d: int) -> list[Symbol]:
        table = self.cocycles if variant == COCYCLE else self.cycles
        return sorted(s for s in table if s.bidegree(self.meta.h) == (n, d))

    def express(self, vec: dict, variant: str, n: int, d: int):
        """Write an engine (co)cycle in the labeled basis of its block."""
        kind = COHOMOLOGY if variant == COCYCLE else HOMOLOGY
        blk = self.duality._coh(n, d) if kind == COHOMOLOGY else self.duality._hom(n, d)
        if blk.dim == 0:
            return SymbolicElement()
        syms = self.block_symbols(variant, n, d)
        x = blk.coords(vec) if vec else [Fraction(0)] * blk.dim
        if not syms:
            if any(x):
                raise NoSolution(f"no labels span {kind} block ({n}, {d})")
            return SymbolicElement()
        cols = [dict(enumerate(blk.coords(self.vector(s)))) for s in syms]
        rows = linalg.SparseMatrix.from_columns(cols, blk.dim).row_dicts()
        sol = linalg.solve(rows, len(syms), x)
        if sol is None:
            raise NoSolution(f"class not in the span of {', '.join(map(str, syms))}")
        return SymbolicElement({s: c for s, c in zip(syms, sol) if c})

    def to_json(self) -> list[dict]:
        h = self.meta.h
        out = []
        for table in (self.cocycles, self.cycles):
            for s in sorted(table):
                n, d = s.bidegree(h)
                out.append({"family": s.family, "k": s.k, "s": s.shift, "variant": s.variant,
                            "homological_degree": n, "internal_degree": d})
        return out


def _rep(pair, n, d, what):
    blk = pair.homology(COHOMOLOGY, n, d)
    if blk.dim > 1:
        raise AmbiguousBlock(f"{what}: HH^{n}({d}) has dimension {blk.dim}")
    return blk.vector(0) if blk.dim else None


def _dual_basis(pair, left: list, right_block, target: dict, tn: int, td: int):
    """Basis r_l of right_block with left_k cup r_l = delta_kl * target."""
    tb = pair.homology(COHOMOLOGY, tn, td)
    t = tb.coords(target)
    piv = next(i for i, v in enumerate(t) if v)
    G = []  # G[k][j] = coefficient of target in left_k cup basis_j
    for a in left:
        row = []
        for j in range(right_block.dim):
            c = tb.coords(pair.cup(a, right_block.vector(j)))
            lam = c[piv] / t[piv]
            if [lam * v for v in t] != c:
                raise NoSolution("pairing does not land on the target line")
            row.append(lam)
        G.append(row)
    if len(left) != right_block.dim:
        raise NoSolution("pairing blocks have different dimensions")
    Ginv = linalg.inverse(linalg.SparseMatrix.from_dense(G)).to_dense()
    # r_l = sum_j Ginv[j][l] basis_j
    return [_vec(right_block, [Ginv[j][l] for j in range(right_block.dim)])
            for l in range(len(left))]


def _coeffs(pair, vec, basis: list, n: int, d: int) -> list[Fraction]:
    blk = pair.homology(COHOMOLOGY, n, d)
    cols = [dict(enumerate(blk.coords(b))) for b in basis]
    rows = linalg.SparseMatrix.from_columns(cols, blk.dim).row_dicts()
    sol = linalg.solve(rows, len(basis), blk.coords(vec))
    if sol is None:
        raise NoSolution("vector outside the span of the labeled basis")
    return sol


def assign_labels(pair: ChainComplexPair, m: int = 1, duality: DualityMap | None = None) -> LabelAssignment:
    """Name the computed classes after the bases used by the tables.

    z_0 is the unit, theta_0 the star-counting derivation, and everything else
    is normalised from these and one canonical representative per line
    (z_k, omega_k, zeta_k, f_k) through cup products:
    theta_k = theta_0 z_k, psi_k = theta_0 zeta_k, f_k cup h_l = delta_kl psi_0,
    omega_k cup eps_l = delta_kl psi_0, and z_0^{(1)} by
    z_{h-3} cup z_0^{(1)} = f_0 cup zeta_{h-3} when z_{h-3} exists.
    """
    D = duality if duality is not None else DualityMap(pair, m)
    m = D.m
    alg = pair.alg
    h = alg.h
    cup = pair.cup
    top = pair.N - 1
    notes = []

    def dims(n):
        return pair.dim_table(COHOMOLOGY, n) if n <= top else {}

    h0 = dims(0)
    U = tuple(k for k in sorted(h0) if k < h - 2)
    Lw = tuple(range(h0.get(h - 2, 0)))
    base: dict = {}
    base[("z", 0)] = pair.unit()
    for k in U:
        if k:
            base[("z", k)] = _rep(pair, 0, k, f"z_{k}")
    if Lw:
        blk = pair.homology(COHOMOLOGY, 0, h - 2)
        for j in Lw:
            base[("omega", j)] = blk.vector(j)
    theta0 = euler_derivation(pair)
    for k in U:
        base[("theta", k)] = cup(theta0, base[("z", k)]) if k else theta0
    Kblk = pair.homology(COHOMOLOGY, 2, -2)
    K = tuple(range(Kblk.dim))
    for j in K:
        base[("f", j)] = Kblk.vector(j)
    Uz = tuple(k for k in U if pair.homology(COHOMOLOGY, 4, -4 - k).dim)
    for k in Uz:
        base[("zeta", k)] = _rep(pair, 4, -4 - k, f"zeta_{k}")
        base[("psi", k)] = cup(theta0, base[("zeta", k)])
    psi0 = base.get(("psi", 0))
    if K and psi0:
        hs = _dual_basis(pair, [base[("f", j)] for j in K], pair.homology(COHOMOLOGY, 3, -2), psi0, 5, -4)
        for j, v in zip(K, hs):
            base[("h", j)] = v
    Yblk = pair.homology(COHOMOLOGY, 5, -h - 2) if top >= 5 else None
    Y = tuple(range(Yblk.dim)) if Yblk is not None else ()
    if Y and psi0 and len(Y) == len(Lw):
        es = _dual_basis(pair, [base[("omega", j)] for j in Lw], Yblk, psi0, 5, -4)
        for j, v in zip(Y, es):
            base[("epsilon", j)] = v
    elif Lw and len(Y) != len(Lw):
        notes.append(f"dim L = {len(Lw)} but dim Y* = {len(Y)}: epsilon left unlabeled")
        Y = ()

    # periodicity generator
    u = None
    if 6 <= top:
        ub = pair.homology(COHOMOLOGY, 6, -2 * h)
        if ub.dim == 1:
            if ("z", h - 3) in base and ("zeta", h - 3) in base and K:
                lhs = cup(base[("z", h - 3)], ub.vector(0))
                rhs = cup(base[("f", 0)], base[("zeta", h - 3)])
                lam = _coeffs(pair, rhs, [lhs], 6, h - 3 - 2 * h)[0]
                u = {k: lam * v for k, v in ub.vector(0).items()}
            else:
                u = ub.vector(0)
                notes.append("z_{h-3} absent: z_0^{(1)} is the canonical representative of HH^6(-2h)")
        elif ub.dim:
            raise AmbiguousBlock(f"HH^6({-2 * h}) has dimension {ub.dim}")

    index = {"z": U, "theta": U, "zeta": Uz, "psi": Uz, "f": K, "h": K if psi0 else (),
             "omega": Lw, "epsilon": Y if ("epsilon", 0) in base else ()}
    meta = _extract_meta(pair, base, index, h, theta0, u)

    cocycles: dict = {}
    for (fam, k), v in base.items():
        s = 0
        cur = v
        while True:
            sym = Symbol(fam, k, s, COCYCLE)
            if sym.level > top or not cur or pair.homology(COHOMOLOGY, sym.level, sym.degree(h)).is_boundary(cur):
                break
            cocycles[sym] = cur
            if u is None:
                break
            cur = cup(cur, u)
            s += 1
    cycles: dict = {}
    for sym, v in cocycles.items():
        t = m - sym.shift - LAG[sym.family]
        if t < 0:
            continue
        c = D.inverse(v)
        cs = Symbol(sym.family, sym.k, t, CYCLE)
        if c and cs.level <= max(top, D.top) and not D._hom(cs.level, cs.degree(h)).is_boundary(c):
            cycles[cs] = c
    return LabelAssignment(pair, D, meta, cocycles, cycles, notes)


def _extract_meta(pair, base, index, h, theta0, u) -> TypeMetadata:
    """Products and the alpha/beta matrices, read off the engine."""
    cup = pair.cup
    products: dict = {}
    for k in index["z"]:
        for l in index["z"]:
            if k + l in index["z"]:
                c = _coeffs(pair, cup(base[("z", k)], base[("z", l)]), [base[("z", k + l)]], 0, k + l)[0]
                products[("zz", k, l)] = {("z", k + l): c}
                products[("ztheta", k, l)] = {("theta", k + l): c}
            if l - k in index["zeta"] and l in index["zeta"]:
                c = _coeffs(pair, cup(base[("z", k)], base[("zeta", l)]), [base[("zeta", l - k)]],
                            4, -4 - (l - k))[0]
                products[("zzeta", k, l)] = {("zeta", l - k): c}
                products[("zpsi", k, l)] = {("psi", l - k): c}
    M_alpha = []
    if index["h"]:
        hb = [base[("h", j)] for j in index["h"]]
        for j in index["f"]:
            M_alpha.append(_coeffs(pair, cup(theta0, base[("f", j)]), hb, 3, -2))
    M_beta = []
    if index["epsilon"] and u is not None and 6 <= pair.N - 1:
        wb = [cup(base[("omega", j)], u) for j in index["omega"]]
        for j in index["epsilon"]:
            M_beta.append(_coeffs(pair, cup(theta0, base[("epsilon", j)]), wb, 6, h - 2 - 2 * h))
    return TypeMetadata(h, index, products, M_alpha, M_beta, name=str(pair.alg.quiver.qtype))
