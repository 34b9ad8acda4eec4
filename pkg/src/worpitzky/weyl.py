"""Weyl group enumeration, the descent statistic and Eulerian polynomials."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import GuardExceeded, InvariantViolation
from .rootsys import Root, RootSystem
from .subsets import context

WEYL_GUARD = 10**6


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element as a permutation of the root list.

    Roots are indexed as ``rs.positive_roots`` followed by
    ``rs.negative_roots``.
    """

    rs: RootSystem
    perm: tuple[int, ...]

    def __call__(self, beta: Root) -> Root:
        return _roots(self.rs)[self.perm[_root_index(self.rs)[tuple(beta)]]]

    def matrix(self) -> tuple[tuple[int, ...], ...]:
        """Columns are the images of the simple roots."""
        cols = [self(a) for a in self.rs.simple_roots]
        return tuple(tuple(c[i] for c in cols) for i in range(self.rs.rank))


@lru_cache(maxsize=None)
def _roots(rs: RootSystem) -> tuple[Root, ...]:
    return rs.positive_roots + rs.negative_roots


@lru_cache(maxsize=None)
def _root_index(rs: RootSystem) -> dict:
    return {b: i for i, b in enumerate(_roots(rs))}


@lru_cache(maxsize=4)
def _perm_table(rs: RootSystem, guard: int = WEYL_GUARD) -> np.ndarray:
    if rs.weyl_order > guard:
        raise GuardExceeded(f"|W({rs})| = {rs.weyl_order} exceeds the guard {guard}")
    roots = _roots(rs)
    idx = _root_index(rs)
    gens = [np.array([idx[rs.reflect(b, j)] for b in roots], dtype=np.int32) for j in range(rs.rank)]
    simple_idx = [idx[a] for a in rs.simple_roots]
    ident = np.arange(len(roots), dtype=np.int32)
    seen = {tuple(ident[simple_idx])}
    elems = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                u = g[w]
                key = tuple(u[simple_idx])
                if key not in seen:
                    seen.add(key)
                    elems.append(u)
                    nxt.append(u)
            if len(elems) > guard:
                raise GuardExceeded(f"Weyl group enumeration exceeded {guard} elements")
        frontier = nxt
    if len(elems) != rs.weyl_order:
        raise InvariantViolation(f"enumerated {len(elems)} elements, expected {rs.weyl_order}")
    return np.array(elems, dtype=np.int32)


def enumerate_weyl(rs: RootSystem, guard: int = WEYL_GUARD) -> list[WeylElement]:
    table = _perm_table(rs, guard)
    return [WeylElement(rs, tuple(int(x) for x in row)) for row in table]


def _extended_images(rs: RootSystem) -> np.ndarray:
    """Images of alpha_0 = -highest root, alpha_1, ..., alpha_l under every w."""
    idx = _root_index(rs)
    cols = [idx[tuple(-x for x in rs.highest_root)]] + [idx[a] for a in rs.simple_roots]
    return _perm_table(rs)[:, cols]


def descent(rs: RootSystem, w: WeylElement, sigma) -> int:
    """Sum of marks c_i (c_0 = 1) over i with w(alpha_i) = -beta, beta positive and not in sigma."""
    ctx = context(rs)
    m = ctx.mask(sigma)
    n = rs.n_positive
    marks = (1,) + rs.marks
    simple = [tuple(-x for x in rs.highest_root)] + list(rs.simple_roots)
    idx = _root_index(rs)
    total = 0
    for c, a in zip(marks, simple):
        j = w.perm[idx[a]]
        if j >= n and not (m >> (j - n) & 1):
            total += c
    return total


class EulerianEngine:
    """Vectorised E_Sigma over many subsets of one root system."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        n = self.n = rs.n_positive
        img = _extended_images(rs)
        self.neg = img >= n
        self.pos_idx = np.where(self.neg, img - n, 0)
        self.marks = np.array((1,) + rs.marks, dtype=np.int64)
        self.h = rs.coxeter_number
        self.f = rs.index_of_connection

    def __call__(self, mask: int) -> tuple[int, ...]:
        in_sigma = np.array([(mask >> i) & 1 for i in range(self.n)], dtype=bool)
        desc = (self.neg & ~in_sigma[self.pos_idx]) @ self.marks
        counts = np.bincount(self.h - desc, minlength=self.h + 1)
        if np.any(counts % self.f):
            raise InvariantViolation(f"Eulerian counts not divisible by f = {self.f}")
        return tuple(int(c) for c in counts // self.f)


@lru_cache(maxsize=None)
def eulerian_engine(rs: RootSystem) -> EulerianEngine:
    return EulerianEngine(rs)


@dataclass(frozen=True)
class EulerianPolynomial:
    coeffs: tuple[int, ...]   # coeffs[i] is the coefficient of t^i

    def __call__(self, t):
        return sum(c * t**i for i, c in enumerate(self.coeffs))

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coeffs) if c]
        return nz[-1] if nz else -1

    def __str__(self):
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else "t" if i == 1 else f"t^{i}"
            terms.append(f"{c}{'*' if mono else ''}{mono}" if c != 1 or not mono else mono)
        return " + ".join(terms) or "0"


def eulerian_polynomial(rs: RootSystem, sigma) -> EulerianPolynomial:
    """E_Sigma(t) = (1/f) * sum over W of t^(h - dsc(w)); coefficients up to t^h."""
    coeffs = eulerian_engine(rs)(context(rs).mask(sigma))
    if any(c < 0 for c in coeffs):
        raise InvariantViolation("negative Eulerian coefficient")
    return EulerianPolynomial(coeffs)
