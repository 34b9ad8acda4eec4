"""Irreducible crystallographic root systems in simple-root coordinates.

Roots are tuples of integers giving coefficients over the simple roots.
Simple roots follow Bourbaki numbering, except that in B2 and G2 the first
simple root is short and the second is long, and F4 has alpha_1, alpha_2
long. The Gram form is scaled so that short roots have squared length 2,
which keeps every inner product an integer.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import InvalidRootSystem, InvariantViolation

Root = tuple[int, ...]

_RANK_OK = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 3,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}

# index of connection, used to cross-check det(cartan)
_TAB_F = {"B": 2, "C": 2, "D": 4, "F": 1, "G": 1}
_TAB_F_E = {6: 3, 7: 2, 8: 1}


@dataclass(frozen=True, order=True)
class RootSystemType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _RANK_OK or not isinstance(self.rank, int):
            raise InvalidRootSystem(f"unknown root system family {self.family!r}")
        if not _RANK_OK[self.family](self.rank):
            raise InvalidRootSystem(f"no irreducible root system of type {self.family}{self.rank}")

    def __str__(self):
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "RootSystemType":
        m = re.fullmatch(r"\s*([A-Ga-g])_?(\d+)\s*", text)
        if not m:
            raise InvalidRootSystem(f"cannot parse root system {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))


def _gram(family: str, n: int) -> list[list[int]]:
    G = [[0] * n for _ in range(n)]

    def link(i, j, v):
        G[i][j] = G[j][i] = v

    if family == "G":
        return [[2, -3], [-3, 6]]
    if family == "F":
        for i, sq in enumerate((4, 4, 2, 2)):
            G[i][i] = sq
        link(0, 1, -2)
        link(1, 2, -2)
        link(2, 3, -1)
        return G
    if family in "ADE":
        for i in range(n):
            G[i][i] = 2
        if family == "A":
            for i in range(n - 1):
                link(i, i + 1, -1)
        elif family == "D":
            for i in range(n - 2):
                link(i, i + 1, -1)
            link(n - 3, n - 1, -1)
        else:
            for i, j in ((0, 2), (2, 3), (3, 4), (1, 3)):
                link(i, j, -1)
            for i in range(4, n - 1):
                link(i, i + 1, -1)
        return G
    if n == 2:  # B2 = C2 with alpha_1 short
        return [[2, -2], [-2, 4]]
    if family == "B":
        for i in range(n - 1):
            G[i][i] = 4
        G[n - 1][n - 1] = 2
        for i in range(n - 1):
            link(i, i + 1, -2)
        return G
    # C_n: alpha_n long
    for i in range(n - 1):
        G[i][i] = 2
    G[n - 1][n - 1] = 4
    for i in range(n - 2):
        link(i, i + 1, -1)
    link(n - 2, n - 1, -2)
    return G


def _det(M: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    A = [list(row) for row in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((r for r in range(k + 1, n) if A[r][k] != 0), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            Ai, aik = A[i], A[i][k]
            Ak = A[k]
            for j in range(k + 1, n):
                Ai[j] = (Ai[j] * akk - aik * Ak[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1] if n else 1


def _weyl_order(t: RootSystemType) -> int:
    n = t.rank
    if t.family == "A":
        return math.factorial(n + 1)
    if t.family in "BC":
        return 2**n * math.factorial(n)
    if t.family == "D":
        return 2 ** (n - 1) * math.factorial(n)
    return {"E6": 51840, "E7": 2903040, "E8": 696729600, "F4": 1152, "G2": 12}[str(t)]


class RootSystem:
    """An irreducible root system with exact root arithmetic.

    Instances are immutable; use :func:`build` which caches them per type.
    """

    def __init__(self, rstype: RootSystemType):
        self.type = rstype
        n = self.rank = rstype.rank
        G = _gram(rstype.family, n)
        self.gram = tuple(tuple(r) for r in G)
        # cartan[i][j] = <alpha_i, alpha_j^vee>, so s_j(b) = b - (sum_i b_i cartan[i][j]) alpha_j
        self.cartan = tuple(tuple(2 * G[i][j] // G[j][j] for j in range(n)) for i in range(n))
        self.simple_roots: tuple[Root, ...] = tuple(
            tuple(int(i == j) for j in range(n)) for i in range(n)
        )

        roots = set(self.simple_roots)
        frontier = list(self.simple_roots)
        while frontier:
            nxt = []
            for b in frontier:
                for j in range(n):
                    img = self.reflect(b, j)
                    if img not in roots and tuple(-x for x in img) not in roots:
                        roots.add(img)
                        nxt.append(img)
            frontier = nxt
        pos = {r if any(x > 0 for x in r) else tuple(-x for x in r) for r in roots}
        self.positive_roots: tuple[Root, ...] = tuple(sorted(pos, key=lambda r: (sum(r), r)))
        self.negative_roots: tuple[Root, ...] = tuple(tuple(-x for x in r) for r in self.positive_roots)
        self._index = {r: i for i, r in enumerate(self.positive_roots)}
        self._all = frozenset(self.positive_roots) | frozenset(self.negative_roots)

        self.highest_root: Root = self.positive_roots[-1]
        self.marks: tuple[int, ...] = self.highest_root
        self.coxeter_number = 1 + sum(self.marks)
        self.index_of_connection = _det(self.cartan)
        self.weyl_order = _weyl_order(rstype)
        self._check()

    def _check(self):
        n, h = self.rank, self.coxeter_number
        if 2 * len(self.positive_roots) != n * h:
            raise InvariantViolation(f"{self.type}: |Phi+| != rank*h/2")
        if not all(self.leq(b, self.highest_root) for b in self.positive_roots):
            raise InvariantViolation(f"{self.type}: highest root is not maximal")
        fam = self.type.family
        f = n + 1 if fam == "A" else _TAB_F_E[n] if fam == "E" else _TAB_F[fam]
        if f != self.index_of_connection:
            raise InvariantViolation(f"{self.type}: det(cartan) = {self.index_of_connection}, expected {f}")

    def __repr__(self):
        return f"RootSystem({self.type})"

    def __str__(self):
        return str(self.type)

    def __reduce__(self):
        return (build, (self.type,))

    # root arithmetic
    def reflect(self, beta: Root, j: int) -> Root:
        c = sum(b * self.cartan[i][j] for i, b in enumerate(beta))
        return tuple(b - c * (i == j) for i, b in enumerate(beta))

    def inner(self, b1: Sequence[int], b2: Sequence[int]) -> int:
        G = self.gram
        return sum(x * G[i][j] * y for i, x in enumerate(b1) if x for j, y in enumerate(b2) if y)

    def norm2(self, b: Sequence[int]) -> int:
        return self.inner(b, b)

    def is_long(self, b: Root) -> bool:
        return self.norm2(b) > 2

    def is_root(self, v: Iterable[int]) -> bool:
        return tuple(v) in self._all

    def is_positive_root(self, v: Iterable[int]) -> bool:
        return tuple(v) in self._index

    def index(self, b: Root) -> int:
        """Position of a positive root in ``positive_roots``."""
        return self._index[tuple(b)]

    @staticmethod
    def height(b: Root) -> int:
        return sum(b)

    @staticmethod
    def leq(b2: Root, b1: Root) -> bool:
        """True iff b2 <= b1 in the root poset."""
        return all(x <= y for x, y in zip(b2, b1))

    def coroot_pairings(self, b: Root) -> Root:
        """The integers <alpha_j, b^vee> = 2 (alpha_j, b) / (b, b), j = 1..rank.

        These are the coweight coordinates of the coroot of ``b``.
        """
        nb = self.norm2(b)
        out = []
        for j in range(self.rank):
            num = 2 * self.inner(self.simple_roots[j], b)
            if num % nb:
                raise InvariantViolation("non-integral coroot pairing")
            out.append(num // nb)
        return tuple(out)

    @property
    def simply_laced(self) -> bool:
        return self.type.family in "ADE"

    @property
    def n_positive(self) -> int:
        return len(self.positive_roots)


@lru_cache(maxsize=None)
def _build(rstype: RootSystemType) -> RootSystem:
    return RootSystem(rstype)


def build(rstype: "RootSystemType | str", rank: int | None = None) -> RootSystem:
    """Return the (cached) root system of the given type.

    Accepts ``build("B3")``, ``build("B", 3)`` or ``build(RootSystemType("B", 3))``.
    """
    if isinstance(rstype, str):
        rstype = RootSystemType(rstype.upper(), rank) if rank is not None else RootSystemType.parse(rstype)
    return _build(rstype)


def inner(rs: RootSystem, b1: Root, b2: Root) -> int:
    return rs.inner(b1, b2)


def is_root(rs: RootSystem, v) -> bool:
    return rs.is_root(v)


def height(rs: RootSystem, b: Root) -> int:
    return sum(b)


def poset_leq(rs: RootSystem, b2: Root, b1: Root) -> bool:
    return RootSystem.leq(b2, b1)


def format_root(b: Iterable[int]) -> str:
    return "[" + ",".join(str(int(x)) for x in b) + "]"


def parse_root(text: str) -> Root:
    m = re.fullmatch(r"\s*\[?\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\]?\s*", text)
    if not m:
        raise ValueError(f"cannot parse root {text!r}")
    return tuple(int(x) for x in m.group(1).split(","))


def parse_roots(text: str) -> list[Root]:
    """Parse a list such as ``"[1,0],[1,1]"`` or ``"[[1,0],[1,1]]"``."""
    return [tuple(int(x) for x in grp.split(",")) for grp in re.findall(r"\[\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\]", text)]
