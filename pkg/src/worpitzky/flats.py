"""Flats of the Weyl arrangement and their localized root subsystems.

A flat X is stored through the positive roots vanishing on it. Since the
Gram form is positive definite, a root lies in the span of independent
roots B exactly when the Gram determinant of B plus that root is zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .errors import InvariantViolation
from .rootsys import Root, RootSystem, _det, format_root


@dataclass(frozen=True)
class Flat:
    codim: int
    roots: tuple[Root, ...]          # positive roots vanishing on X, sorted like rs.positive_roots
    simple_system: tuple[Root, ...]
    irreducible: bool
    cartan_type: str                 # e.g. "A2", "B2", "A1xA1"

    def __contains__(self, beta) -> bool:
        return tuple(beta) in self.roots

    def to_json(self) -> dict:
        return {
            "codim": self.codim,
            "type": self.cartan_type,
            "simple_system": [format_root(b) for b in self.simple_system],
            "roots": [format_root(b) for b in self.roots],
        }


@lru_cache(maxsize=None)
def _ip_table(rs: RootSystem) -> dict:
    pos = rs.positive_roots
    return {(u, v): rs.inner(u, v) for u in pos for v in pos}


def _gram_det(rs: RootSystem, vecs) -> int:
    ip = _ip_table(rs)
    return _det([[ip[u, v] for v in vecs] for u in vecs])


def span_closure(rs: RootSystem, basis: Iterable[Root]) -> tuple[Root, ...]:
    """Positive roots in the rational span of the given independent roots."""
    basis = list(basis)
    if _gram_det(rs, basis) == 0:
        raise ValueError("roots are linearly dependent")
    return tuple(b for b in rs.positive_roots if b in basis or _gram_det(rs, basis + [b]) == 0)


def indecomposables(roots: Iterable[Root]) -> tuple[Root, ...]:
    """Elements of a positive system that are not a sum of two of its elements."""
    roots = tuple(roots)
    rset = set(roots)
    out = []
    for a in roots:
        if not any(tuple(x - y for x, y in zip(a, b)) in rset for b in roots if b != a):
            out.append(a)
    return tuple(out)


def _components(rs: RootSystem, simple: tuple[Root, ...]) -> list[list[Root]]:
    comps: list[list[Root]] = []
    left = list(simple)
    while left:
        comp = [left.pop()]
        grew = True
        while grew:
            grew = False
            for b in list(left):
                if any(rs.inner(b, c) != 0 for c in comp):
                    comp.append(b)
                    left.remove(b)
                    grew = True
        comps.append(comp)
    return comps


def _component_type(rs: RootSystem, comp: list[Root], roots: tuple[Root, ...]) -> str:
    n = len(comp)
    count = sum(1 for b in roots if _gram_det(rs, comp + [b]) == 0)
    lengths = {rs.norm2(b) for b in comp}
    if len(lengths) == 1:
        if count == n * (n + 1) // 2:
            return f"A{n}"
        if n >= 4 and count == n * (n - 1):
            return f"D{n}"
        return {36: "E6", 63: "E7", 120: "E8"}[count]
    if n == 2:
        return {4: "B2", 6: "G2"}[count]
    if n == 4 and count == 24:
        return "F4"
    n_long = sum(1 for b in comp if rs.norm2(b) == max(lengths))
    return f"B{n}" if n_long == n - 1 else f"C{n}"


def cartan_type_of(rs: RootSystem, simple: tuple[Root, ...], roots: tuple[Root, ...]) -> tuple[str, bool]:
    comps = _components(rs, simple)
    names = sorted((_component_type(rs, c, roots) for c in comps), key=lambda s: (s[0], int(s[1:])))
    return "x".join(names), len(comps) == 1


def make_flat(rs: RootSystem, roots: tuple[Root, ...], codim: int) -> Flat:
    simple = indecomposables(roots)
    if len(simple) != codim:
        raise InvariantViolation(f"|Delta_X| = {len(simple)} != codim {codim}")
    ctype, irred = cartan_type_of(rs, simple, roots)
    return Flat(codim, roots, simple, irred, ctype)


@lru_cache(maxsize=None)
def flats_codim(rs: RootSystem, p: int) -> tuple[Flat, ...]:
    """All flats of codimension p, each once, in a canonical order."""
    if not 1 <= p <= rs.rank:
        raise ValueError(f"codimension must lie in 1..{rs.rank}")
    # (roots, basis) pairs grown one codimension at a time
    layer = {(b,): [b] for b in rs.positive_roots}
    for _ in range(p - 1):
        nxt = {}
        for roots, basis in layer.items():
            inside = set(roots)
            for b in rs.positive_roots:
                if b in inside or rs.index(b) < rs.index(basis[-1]):
                    continue
                new_basis = basis + [b]
                key = span_closure(rs, new_basis)
                if key not in nxt:
                    nxt[key] = new_basis
        layer = nxt
    keys = sorted(layer, key=lambda k: [rs.index(b) for b in k])
    return tuple(make_flat(rs, k, p) for k in keys)


@lru_cache(maxsize=None)
def irreducible_rank2_flats(rs: RootSystem) -> tuple[Flat, ...]:
    if rs.rank < 2:
        return ()
    return tuple(X for X in flats_codim(rs, 2) if X.irreducible)


def localize(flat: Flat, sigma: Iterable[Root]) -> tuple[Root, ...]:
    """Sigma_X: the members of sigma vanishing on the flat."""
    s = {tuple(b) for b in sigma}
    return tuple(b for b in flat.roots if b in s)


def in_simple_coords(flat: Flat, beta: Root) -> tuple[int, ...]:
    """Coordinates of a root of the flat with respect to its simple system."""
    basis = flat.simple_system
    n, k = len(beta), len(basis)
    # least-squares free solve: pick k independent coordinate rows
    rows = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(beta[i])] for i in range(n)]
    piv_rows = []
    A = [r[:] for r in rows]
    col = 0
    for col in range(k):
        p = next((i for i in range(len(A)) if i not in piv_rows and A[i][col] != 0), None)
        if p is None:
            raise InvariantViolation("simple system is degenerate")
        piv_rows.append(p)
        for i in range(len(A)):
            if i != p and A[i][col] != 0:
                t = A[i][col] / A[p][col]
                A[i] = [a - t * c for a, c in zip(A[i], A[p])]
    coords = [A[piv_rows[c]][k] / A[piv_rows[c]][c] for c in range(k)]
    if any(A[i][k] != 0 for i in range(len(A)) if i not in piv_rows):
        raise ValueError(f"{format_root(beta)} is not in the span of the flat")
    if any(c.denominator != 1 for c in coords):
        raise InvariantViolation("non-integral coordinates over Delta_X")
    return tuple(int(c) for c in coords)
