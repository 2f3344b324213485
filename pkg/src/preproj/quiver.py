"""ADE quivers, their doubles, and root-system constants (h, exponents, nu, P)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property


class UnsupportedRank(ValueError):
    pass


class UnknownType(ValueError):
    pass


@dataclass(frozen=True, order=True)
class QuiverType:
    family: str
    rank: int

    def __post_init__(self):
        fam = self.family.upper()
        object.__setattr__(self, "family", fam)
        r = self.rank
        ok = (fam == "A" and r >= 1) or (fam == "D" and r >= 4) or (fam == "E" and r in (6, 7, 8))
        if not ok:
            raise UnsupportedRank(f"no Dynkin diagram of type {fam}{r}")

    @classmethod
    def parse(cls, text: str) -> "QuiverType":
        m = re.fullmatch(r"\s*([ADEade])\s*_?\s*(\d+)\s*", text)
        if not m:
            raise UnknownType(f"cannot parse quiver type {text!r}; expected A<n>, D<n> or E<n>")
        return cls(m.group(1).upper(), int(m.group(2)))

    def __str__(self):
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class Arrow:
    index: int
    source: int
    target: int
    starred: bool
    partner: int  # index of the reversed arrow

    @property
    def epsilon(self) -> int:
        return -1 if self.starred else 1

    @property
    def name(self) -> str:
        base = f"a{self.index // 2}" if not self.starred else f"a{self.partner // 2}"
        return base + ("*" if self.starred else "")


def dynkin_edges(t: QuiverType) -> list[tuple[int, int]]:
    """Canonically oriented edges of the Dynkin diagram (vertices 0..r-1).

    A_n: i -> i+1.  D/E: every edge points toward the branch vertex.
    """
    r = t.rank
    if t.family == "A":
        return [(i, i + 1) for i in range(r - 1)]
    if t.family == "D":
        b = r - 3
        return [(i, i + 1) for i in range(b)] + [(r - 2, b), (r - 1, b)]
    # E_r: chain 0..r-2, extra vertex r-1 hanging off chain vertex 2
    b = 2
    chain = [(i, i + 1) for i in range(b)] + [(i + 1, i) for i in range(b, r - 2)]
    return chain + [(r - 1, b)]


@dataclass(frozen=True)
class DoubleQuiver:
    qtype: QuiverType
    edges: tuple[tuple[int, int], ...]

    @property
    def nvertices(self) -> int:
        return self.qtype.rank

    @cached_property
    def arrows(self) -> tuple[Arrow, ...]:
        out = []
        for k, (s, t) in enumerate(self.edges):
            out.append(Arrow(2 * k, s, t, False, 2 * k + 1))
            out.append(Arrow(2 * k + 1, t, s, True, 2 * k))
        return tuple(out)

    def star(self, a: int) -> int:
        return self.arrows[a].partner

    def epsilon(self, a: int) -> int:
        return self.arrows[a].epsilon

    @cached_property
    def adjacency(self) -> list[list[int]]:
        n = self.nvertices
        c = [[0] * n for _ in range(n)]
        for a in self.arrows:
            c[a.source][a.target] += 1
        return c

    def __str__(self):
        return f"double of {self.qtype}"


def build(t: QuiverType | str, orientation: list[tuple[int, int]] | None = None) -> DoubleQuiver:
    if isinstance(t, str):
        t = QuiverType.parse(t)
    edges = dynkin_edges(t)
    if orientation is not None:
        want = {frozenset(e) for e in edges}
        got = {frozenset(e) for e in orientation}
        if want != got or len(orientation) != len(edges):
            raise ValueError("orientation must orient each Dynkin edge exactly once")
        edges = list(orientation)
    return DoubleQuiver(t, tuple(edges))


@dataclass(frozen=True)
class CoxeterData:
    qtype: QuiverType
    h: int
    exponents: tuple[int, ...]
    nu: tuple[int, ...]
    adjacency: tuple[tuple[int, ...], ...]

    @property
    def P(self) -> list[list[int]]:
        n = len(self.nu)
        return [[int(self.nu[i] == j) for j in range(n)] for i in range(n)]

    @property
    def r_minus(self) -> int:
        return sum(1 for i, j in enumerate(self.nu) if i < j)

    @property
    def r_plus(self) -> int:
        return len(self.nu) - self.r_minus

    @property
    def C(self) -> list[list[int]]:
        return [list(r) for r in self.adjacency]


_E_EXPONENTS = {
    6: (1, 4, 5, 7, 8, 11),
    7: (1, 5, 7, 9, 11, 13, 17),
    8: (1, 7, 11, 13, 17, 19, 23, 29),
}


def exponents(t: QuiverType) -> tuple[int, ...]:
    r = t.rank
    if t.family == "A":
        return tuple(range(1, r + 1))
    if t.family == "D":
        return tuple(sorted(list(range(1, 2 * r - 2, 2)) + [r - 1]))
    return _E_EXPONENTS[r]


def nakayama_permutation(t: QuiverType) -> tuple[int, ...]:
    """The involution nu with w0(alpha_i) = -alpha_nu(i), from the classification."""
    r = t.rank
    if t.family == "A":
        return tuple(r - 1 - i for i in range(r))
    if t.family == "D":
        nu = list(range(r))
        if r % 2:
            nu[r - 2], nu[r - 1] = r - 1, r - 2
        return tuple(nu)
    if r == 6:
        return (4, 3, 2, 1, 0, 5)
    return tuple(range(r))


def require_supported(t: QuiverType | str) -> QuiverType:
    """The calculus pipeline needs at least one arrow: A1 has top degree h-2 = 0
    and no relation, so it is rejected here."""
    if isinstance(t, str):
        t = QuiverType.parse(t)
    if t.rank < 2:
        raise UnsupportedRank(f"{t.family}{t.rank} has no arrows (top degree h-2 = 0); need rank >= 2")
    return t


def coxeter(t: QuiverType | str) -> CoxeterData:
    if isinstance(t, str):
        t = QuiverType.parse(t)
    ex = exponents(t)
    q = build(t)
    return CoxeterData(t, ex[-1] + 1, ex, nakayama_permutation(t),
                       tuple(tuple(r) for r in q.adjacency))
