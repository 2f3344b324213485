"""Machine checks: the calculus axioms on computed classes, and the engine
against the closed-form tables.

Every check is evaluated on homology, i.e. a difference is accepted when it
is a boundary of the relevant block.  Checks whose inputs or outputs leave
the truncation (or the duality window) are reported as skipped, with the
reason, instead of silently passing.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import hochschild as H
from .hochschild import (COHOMOLOGY, HOMOLOGY, ChainComplexPair, ComplexIdentityFailure, NotACycle,
                         TruncationTooShallow)
from .structure import BVOperator, DualityMap, LabelAssignment, NoSolution, assign_labels, euler_derivation
from .tables import (COCYCLE, CYCLE, IndexOutOfRange, bracket_table, connes_table, contraction_table,
                     lie_table)

PASS, FAIL, SKIP = "pass", "fail", "skipped"

# checks reported for information only (they do not decide ``ok``)
INFORMATIONAL = {"bv_literal"}

# detail of checks whose output lies below level 0 (both sides vanish); dropped
TRIVIAL = "output below level 0"

FAULTS = ("cup", "bracket", "contraction", "lie", "connes", "table")


@dataclass
class CheckResult:
    check: str
    status: str
    inputs: tuple = ()
    detail: str = ""

    def to_json(self) -> dict:
        return {"check": self.check, "status": self.status, "inputs": list(self.inputs),
                "detail": self.detail}


@dataclass
class VerificationReport:
    subject: str
    results: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def summary(self) -> dict:
        out: dict = {}
        for r in self.results:
            row = out.setdefault(r.check, {PASS: 0, FAIL: 0, SKIP: 0})
            row[r.status] += 1
        return out

    def failures(self, check: str | None = None) -> list[CheckResult]:
        return [r for r in self.results if r.status == FAIL and (check is None or r.check == check)]

    def passed(self, check: str) -> bool:
        rows = [r for r in self.results if r.check == check]
        return bool(rows) and all(r.status != FAIL for r in rows) and any(r.status == PASS for r in rows)

    @property
    def ok(self) -> bool:
        return not any(r.status == FAIL for r in self.results if r.check not in INFORMATIONAL)

    def to_json(self) -> dict:
        return {"subject": self.subject, "ok": self.ok, "meta": self.meta, "summary": self.summary(),
                "witnesses": [r.to_json() for r in self.results if r.status == FAIL],
                "skipped": [r.to_json() for r in self.results if r.status == SKIP]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"{self.subject}: {'OK' if self.ok else 'FAILED'}"]
        for name, row in sorted(self.summary().items()):
            tag = " (informational)" if name in INFORMATIONAL else ""
            lines.append(f"  {name:<14} pass {row[PASS]:>5}  fail {row[FAIL]:>5}  skipped {row[SKIP]:>5}{tag}")
        for r in self.failures():
            tag = "NOTE" if r.check in INFORMATIONAL else "FAIL"
            lines.append(f"  {tag} {r.check} {' '.join(map(str, r.inputs))}: {r.detail}")
        return "\n".join(lines)


class Ops:
    """The calculus operations, optionally with one deliberately broken."""

    def __init__(self, pair: ChainComplexPair, fault: str | None = None):
        if fault is not None and fault not in FAULTS:
            raise ValueError(f"unknown fault {fault!r}; choose from {', '.join(FAULTS)}")
        self.pair = pair
        self.fault = fault

    @staticmethod
    def _twice(x):
        return {k: 2 * v for k, v in x.items()}

    def cup(self, f, g):
        x = self.pair.cup(f, g)
        return self._twice(x) if self.fault == "cup" else x

    def bracket(self, f, g):
        x = self.pair.bracket(f, g)
        return self._twice(x) if self.fault == "bracket" else x

    def contract(self, f, c):
        x = self.pair.contract(f, c)
        if self.fault == "contraction" and f and H.level(next(iter(f)), COHOMOLOGY) % 2:
            return {k: -v for k, v in x.items()}
        return x

    def lie(self, f, c):
        x = self.pair.lie_derivative(f, c)
        return self._twice(x) if self.fault == "lie" else x

    def B(self, c):
        x = self.pair.connes_B(c)
        return self._twice(x) if self.fault == "connes" else x


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


class _Classes:
    def __init__(self, pair: ChainComplexPair):
        self.pair = pair
        top = pair.N - 1
        self.coh = {n: pair.hh(COHOMOLOGY, n) for n in range(top + 1)}
        self.hom = {n: pair.hh(HOMOLOGY, n) for n in range(top + 1)}

    def zero(self, v: dict, kind: str, n: int, d: int) -> bool:
        if not v:
            return True
        if n < 0:
            return False
        return self.pair.homology(kind, n, d).is_boundary(v)


def _tag(c) -> str:
    return f"{'HH_' if c.kind == HOMOLOGY else 'HH^'}{c.n}({c.d})#{c.index}"


def _run(tasks, threads: int):
    """Evaluate zero-argument callables, keeping the input order."""
    if threads <= 1:
        out = [t() for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            out = list(ex.map(lambda t: t(), tasks))
    return [r for r in out if r.detail != TRIVIAL]


def _guard(name, inputs, fn):
    def task():
        try:
            ok, detail = fn()
        except (NoSolution, TruncationTooShallow) as exc:
            return CheckResult(name, SKIP, inputs, str(exc))
        except NotACycle as exc:
            return CheckResult(name, FAIL, inputs, f"not a cycle: {exc}")
        if ok is None:
            return CheckResult(name, SKIP, inputs, detail)
        return CheckResult(name, PASS if ok else FAIL, inputs, detail)
    return task


# ---- axioms ---------------------------------------------------------------------------


def verify_axioms(pair: ChainComplexPair, m: int = 1, *, threads: int = 1, fault: str | None = None,
                  checks: tuple | None = None) -> VerificationReport:
    """Complex identities, Leibniz, both precalculus identities, Cartan, the BV
    identity, intertwining, L_theta0 = deg/2, Delta^2 = 0 and the period-6
    dimension pattern, on every basis class (pair) reachable under N."""
    ops = Ops(pair, fault)
    cl = _Classes(pair)
    top = pair.N - 1
    alg = pair.alg
    D = DualityMap(pair, m)
    delta = BVOperator(D)
    if fault == "connes":
        delta = _FaultyDelta(D)
    rep = VerificationReport(f"axioms {alg.quiver.qtype} N={pair.N} m={m}",
                             meta={"type": str(alg.quiver.qtype), "N": pair.N, "m": m, "fault": fault})
    want = set(checks) if checks else None

    def on(name):
        return want is None or name in want

    tasks = []
    if on("complex"):
        def complex_ids():
            try:
                pair.check_identities()
            except ComplexIdentityFailure as exc:
                return False, str(exc)
            return True, "b^2, delta^2, B^2, bB+Bb on every block"
        tasks.append(_guard("complex", (), complex_ids))

    coh, hom = cl.coh, cl.hom
    for p in range(top + 1):
        for a in coh[p]:
            for q in range(top + 1):
                for b in coh[q]:
                    if on("leibniz"):
                        for r in range(top + 1):
                            if p + q + r - 1 > top:
                                continue
                            for c in coh[r]:
                                tasks.append(_guard("leibniz", (_tag(a), _tag(b), _tag(c)),
                                                    _leibniz(ops, cl, a, b, c)))
                    if p + q - 1 <= top and p + q >= 1:
                        if on("bv"):
                            tasks.append(_guard("bv", (_tag(a), _tag(b)), _bv(ops, cl, delta, a, b, False)))
                        if on("bv_literal"):
                            tasks.append(_guard("bv_literal", (_tag(a), _tag(b)),
                                                _bv(ops, cl, delta, a, b, True)))
                    for x in (hom_cls for n in range(top + 1) for hom_cls in hom[n]):
                        if on("precalculus1"):
                            tasks.append(_guard("precalculus1", (_tag(a), _tag(b), _tag(x)),
                                                _pre1(ops, cl, a, b, x)))
                        if on("precalculus2"):
                            tasks.append(_guard("precalculus2", (_tag(a), _tag(b), _tag(x)),
                                                _pre2(ops, cl, a, b, x)))
            for x in (hc for n in range(top + 1) for hc in hom[n]):
                if on("cartan"):
                    tasks.append(_guard("cartan", (_tag(a), _tag(x)), _cartan(ops, cl, a, x)))
                if on("intertwining"):
                    tasks.append(_guard("intertwining", (_tag(a), _tag(x)), _intertwine(ops, cl, D, a, x)))
            if on("delta_squared") and p >= 2:
                tasks.append(_guard("delta_squared", (_tag(a),), _delta2(cl, delta, a)))
    if on("lemma_theta0"):
        theta0 = euler_derivation(pair)
        for n in range(top + 1):
            for x in hom[n]:
                tasks.append(_guard("lemma_theta0", (_tag(x),), _lemma(ops, cl, theta0, x)))
    if on("periodicity"):
        for i in range(0, top - 5):
            tasks.append(_guard("periodicity", (f"HH^{i}", f"HH^{i + 6}"), _period(pair, i)))
    rep.results = _run(tasks, threads)
    return rep


class _FaultyDelta(BVOperator):
    def __call__(self, eta, j=None, e=None):
        x = super().__call__(eta, j, e)
        return {k: 2 * v for k, v in x.items()}


def _leibniz(ops, cl, a, b, c):
    def fn():
        p, q = a.n, b.n
        lhs = ops.bracket(a.vector, ops.cup(b.vector, c.vector))
        rhs = H.combine((1, ops.cup(ops.bracket(a.vector, b.vector), c.vector)),
                        (_sgn(q * (p + 1)), ops.cup(b.vector, ops.bracket(a.vector, c.vector))))
        n = a.n + b.n + c.n - 1
        return cl.zero(H.combine((1, lhs), (-1, rhs)), COHOMOLOGY, n, a.d + b.d + c.d), ""
    return fn


def _pre1(ops, cl, a, b, x):
    # iota_a L_b - (-1)^{p(q+1)} L_b iota_a = iota_[a,b]
    def fn():
        p, q = a.n, b.n
        n = x.n - p - q + 1
        if n < 0:
            return None, TRIVIAL
        if n > cl.pair.N - 1:
            return None, "output level outside truncation"
        lhs = H.combine((1, ops.contract(a.vector, ops.lie(b.vector, x.vector))),
                        (-_sgn(p * (q + 1)), ops.lie(b.vector, ops.contract(a.vector, x.vector))))
        rhs = ops.contract(ops.bracket(a.vector, b.vector), x.vector)
        return cl.zero(H.combine((1, lhs), (-1, rhs)), HOMOLOGY, n, a.d + b.d + x.d), ""
    return fn


def _pre2(ops, cl, a, b, x):
    # L_{a cup b} = L_a iota_b + (-1)^p iota_a L_b
    def fn():
        p, q = a.n, b.n
        n = x.n - p - q + 1
        if n < 0:
            return None, TRIVIAL
        if n > cl.pair.N - 1:
            return None, "output level outside truncation"
        lhs = ops.lie(ops.cup(a.vector, b.vector), x.vector)
        rhs = H.combine((1, ops.lie(a.vector, ops.contract(b.vector, x.vector))),
                        (_sgn(p), ops.contract(a.vector, ops.lie(b.vector, x.vector))))
        return cl.zero(H.combine((1, lhs), (-1, rhs)), HOMOLOGY, n, a.d + b.d + x.d), ""
    return fn


def _cartan(ops, cl, a, x):
    # L_a = B iota_a - (-1)^p iota_a B
    def fn():
        p = a.n
        n = x.n - p + 1
        if n < 0:
            return None, TRIVIAL
        if n > cl.pair.N - 1:
            return None, "output level outside truncation"
        lhs = ops.lie(a.vector, x.vector)
        rhs = H.combine((1, ops.B(ops.contract(a.vector, x.vector))),
                        (-_sgn(p), ops.contract(a.vector, ops.B(x.vector))))
        return cl.zero(H.combine((1, lhs), (-1, rhs)), HOMOLOGY, n, a.d + x.d), ""
    return fn


def _bv(ops, cl, delta, a, b, literal):
    def fn():
        p, q = a.n, b.n
        if p + q > delta.duality.top:
            return None, "a cup b lies beyond the duality window"
        br = ops.bracket(a.vector, b.vector)
        # Delta(a cup b) - Delta(a) cup b - (-1)^p a cup Delta(b)
        rec = H.combine((1, delta(ops.cup(a.vector, b.vector), p + q)),
                        (-1, ops.cup(delta(a.vector, p), b.vector)),
                        (-_sgn(p), ops.cup(a.vector, delta(b.vector, q))))
        if not literal and p % 2 == 0:
            rec = H.scale(-1, rec)
        n, d = p + q - 1, a.d + b.d
        if cl.zero(H.combine((1, br), (-1, rec)), COHOMOLOGY, n, d):
            return True, ""
        if literal and cl.zero(H.combine((1, br), (1, rec)), COHOMOLOGY, n, d):
            return False, "bracket = -(right-hand side): off by the prefactor (-1)^{|a|+1}"
        return False, "bracket and BV combination differ"
    return fn


def _intertwine(ops, cl, D, a, x):
    # D(iota_a x) = a cup D(x)
    def fn():
        n = x.n - a.n
        if n < 0:
            return None, TRIVIAL
        if not (1 <= x.n <= D.top - 1 and 1 <= n <= D.top - 1):
            return None, "outside the bijective range 1..6m+1 of D"
        if D.top - n > cl.pair.N - 1:
            return None, "dual level outside truncation"
        lhs = D(ops.contract(a.vector, x.vector), n, x.d + a.d)
        rhs = ops.cup(a.vector, D(x.vector, x.n, x.d))
        j = D.top - n
        return cl.zero(H.combine((1, lhs), (-1, rhs)), COHOMOLOGY, j, x.d + a.d - D.shift), ""
    return fn


def _delta2(cl, delta, a):
    def fn():
        if a.n > delta.duality.top:
            return None, "beyond the duality window"
        y = delta(delta(a.vector, a.n, a.d), a.n - 1, a.d)
        return cl.zero(y, COHOMOLOGY, a.n - 2, a.d), ""
    return fn


def _lemma(ops, cl, theta0, x):
    def fn():
        lhs = ops.lie(theta0, x.vector)
        rhs = {k: Fraction(x.d, 2) * v for k, v in x.vector.items()}
        return cl.zero(H.combine((1, lhs), (-1, rhs)), HOMOLOGY, x.n, x.d), ""
    return fn


def _period(pair, i):
    # HH^{6+i} = HH^i[-2h] for i >= 1; for i = 0 only the U part (degrees below
    # h-2) repeats, since HH^0 carries L[h-2] where HH^6 carries Y[-h-2]
    def fn():
        h = pair.alg.h
        lo = pair.dim_table(COHOMOLOGY, i)
        hi = {d + 2 * h: k for d, k in pair.dim_table(COHOMOLOGY, i + 6).items()}
        if i == 0:
            lo = {d: k for d, k in lo.items() if d < h - 2}
            hi = {d: k for d, k in hi.items() if d < h - 2}
        return hi == lo, f"HH^{i}: {lo}, HH^{i + 6} shifted by 2h: {hi}"
    return fn


# ---- tables ---------------------------------------------------------------------------


def verify_tables(pair: ChainComplexPair, m: int = 1, *, labels: LabelAssignment | None = None,
                  errata: bool = True, threads: int = 1, fault: str | None = None) -> VerificationReport:
    """Engine contraction / bracket / Lie derivative / B on labeled classes
    against Tables 1-3 and the Connes formulas."""
    if labels is None:
        try:
            labels = assign_labels(pair, m)
        except TruncationTooShallow as exc:
            return VerificationReport(f"tables {pair.alg.quiver.qtype} N={pair.N} m={m}",
                                      [CheckResult("labels", SKIP, (), f"cannot label classes: {exc}")],
                                      {"type": str(pair.alg.quiver.qtype), "N": pair.N, "m": m})
    L = labels
    meta = L.meta
    h = meta.h
    ops = Ops(pair, fault)
    rep = VerificationReport(f"tables {pair.alg.quiver.qtype} N={pair.N} m={L.duality.m}",
                             meta={"type": str(pair.alg.quiver.qtype), "N": pair.N, "m": L.duality.m,
                                   "errata": errata, "fault": fault, "labels": L.to_json(),
                                   "metadata": meta.to_json(), "notes": L.notes})

    def table(fn, *args):
        x = fn(*args, meta, errata)
        if fault == "table":
            x = 2 * x
        return x

    coc, cyc = sorted(L.cocycles), sorted(L.cycles)
    tasks = []
    for a in coc:
        for b in cyc:
            tasks.append(_guard("contraction", (str(a), str(b)), _cell(
                L, lambda a=a, b=b: ops.contract(L.vector(a), L.vector(b)),
                lambda a=a, b=b: table(contraction_table, a, b), HOMOLOGY,
                b.level - a.level, b.degree(h) + a.degree(h))))
            tasks.append(_guard("lie", (str(a), str(b)), _cell(
                L, lambda a=a, b=b: ops.lie(L.vector(a), L.vector(b)),
                lambda a=a, b=b: table(lie_table, a, b), HOMOLOGY,
                b.level - a.level + 1, b.degree(h) + a.degree(h))))
        for b in coc:
            tasks.append(_guard("bracket", (str(a), str(b)), _cell(
                L, lambda a=a, b=b: ops.bracket(L.vector(a), L.vector(b)),
                lambda a=a, b=b: table(bracket_table, a, b), COHOMOLOGY,
                a.level + b.level - 1, a.degree(h) + b.degree(h))))
    for b in cyc:
        tasks.append(_guard("connes", (str(b),), _cell(
            L, lambda b=b: ops.B(L.vector(b)),
            lambda b=b: (2 if fault == "table" else 1) * connes_table(b, meta, errata),
            HOMOLOGY, b.level + 1, b.degree(h))))
    rep.results = _run(tasks, threads)
    return rep


def _cell(L, engine, tab, kind, n, d):
    def fn():
        pair = L.pair
        top = max(pair.N - 1, L.duality.top) if kind == HOMOLOGY else pair.N - 1
        if n < 0:
            return None, TRIVIAL
        if n > top:
            return None, f"output level {n} outside truncation"
        if kind == HOMOLOGY and n == 0:
            return None, "output in HH_0, the edge of the duality window: no named cycles"
        try:
            t = tab()
            tv = L.realize(t, COCYCLE if kind == COHOMOLOGY else CYCLE)
        except (KeyError, IndexOutOfRange) as exc:
            return None, f"table value not reachable: {exc}"
        blk = pair.homology(kind, n, d, limit=top)
        ev = engine()
        x = blk.coords(ev) if ev else [Fraction(0)] * blk.dim
        y = blk.coords(tv) if tv else [Fraction(0)] * blk.dim
        if x == y:
            return True, ""
        ratio = _ratio(x, y)
        xs, ys = [str(v) for v in x], [str(v) for v in y]
        if ratio is not None:
            return False, f"engine/table ratio {ratio}: engine {xs}, table {ys} = {t}"
        return False, f"engine {xs}, table {ys} = {t}"
    return fn


def _ratio(x, y):
    nz = [(a, b) for a, b in zip(x, y) if a or b]
    if not nz or any(b == 0 for _, b in nz):
        return None
    r = nz[0][0] / nz[0][1]
    return r if all(a == r * b for a, b in nz) else None
