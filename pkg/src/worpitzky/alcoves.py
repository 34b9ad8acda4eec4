"""Alcoves inside the fundamental parallelepiped.

Points are written in coweight coordinates m_j = (alpha_j, x), so the
pairing of a root with a point is a dot product of integer coefficient
vectors with m. Internally vertices are scaled by N = lcm(marks) so that
all of them become integer vectors; the fundamental alcove has vertices
0 and e_i / c_i.

The upper closure of an alcove is taken as its closure minus every point
lying on a floor wall or on a wall through the origin. This half-open
reading is the one for which the parallelepiped is partitioned, which
``worpitzky_partition_check`` confirms on a grid.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .errors import InvariantViolation
from .flats import Flat, irreducible_rank2_flats
from .rootsys import Root, RootSystem, format_root
from .subsets import Witness, context

CEILING, FLOOR, ORIGIN = "ceiling", "floor", "origin"


@dataclass(frozen=True)
class Wall:
    root: Root
    n: int
    kind: str  # ceiling | floor | origin

    def __str__(self):
        return f"H({format_root(self.root)}, {self.n}) [{self.kind}]"


@dataclass(frozen=True)
class Alcove:
    rs: RootSystem
    address: tuple[int, ...]                  # aligned with rs.positive_roots
    vertices: tuple[tuple[Fraction, ...], ...]
    walls: tuple[Wall, ...]                   # walls[k] is the facet opposite vertices[k]

    def r(self, gamma: Root) -> int:
        return self.address[self.rs.index(gamma)]

    @property
    def ceilings(self) -> tuple[Wall, ...]:
        return tuple(w for w in self.walls if w.kind == CEILING)

    @property
    def barycenter(self) -> tuple[Fraction, ...]:
        k = len(self.vertices)
        return tuple(sum(c) / k for c in zip(*self.vertices))

    def to_json(self) -> dict:
        return {
            "address": {format_root(b): r for b, r in zip(self.rs.positive_roots, self.address)},
            "vertices": [[str(x) for x in v] for v in self.vertices],
            "walls": [{"root": format_root(w.root), "n": w.n, "kind": w.kind} for w in self.walls],
        }


class AlcoveComplex:
    """All alcoves in the fundamental parallelepiped, in integer-scaled form."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        ell = self.ell = rs.rank
        pos = rs.positive_roots
        self.N = N = math.lcm(*rs.marks)
        self.R = np.array(pos, dtype=np.int64)                    # |Phi+| x ell
        self.coroots = np.array([rs.coroot_pairings(b) for b in pos], dtype=np.int64)
        start = np.zeros((ell + 1, ell), dtype=np.int64)
        for i, c in enumerate(rs.marks):
            start[i + 1, i] = N // c

        self.X: list[np.ndarray] = []         # scaled vertices, (ell+1) x ell
        self.P: list[np.ndarray] = []         # pairings (gamma, vertex) * N, |Phi+| x (ell+1)
        self.addresses: list[tuple[int, ...]] = []
        self.walls: list[tuple[Wall, ...]] = []
        self.wall_idx: list[list[tuple[int, int, str]]] = []   # (root index, n, kind) per facet
        seen: dict[tuple[int, ...], int] = {}
        queue = deque([start])
        seen[self._address(start)] = 0
        self._add(start)
        while queue:
            X = queue.popleft()
            for vert, (gi, n, _kind) in enumerate(self._walls_of(X)):
                Y = X.copy()
                shift = (self.R[gi] @ X[vert]) - n * N
                Y[vert] = X[vert] - shift * self.coroots[gi]
                S = Y.sum(axis=0)
                if np.any(S <= 0) or np.any(S >= N * (ell + 1)):
                    continue
                a = self._address(Y)
                if a not in seen:
                    seen[a] = len(self.X)
                    self._add(Y)
                    queue.append(Y)
        self.index = seen
        expected = rs.weyl_order // rs.index_of_connection
        if len(self.X) != expected:
            raise InvariantViolation(f"{rs}: found {len(self.X)} alcoves in P, expected |W|/f = {expected}")

    def _address(self, X: np.ndarray) -> tuple[int, ...]:
        S = self.R @ X.sum(axis=0)
        D = self.N * (self.ell + 1)
        return tuple(int(-((-s) // D)) for s in S)

    def _walls_of(self, X: np.ndarray) -> list[tuple[int, int, str]]:
        P = self.R @ X.T
        out = []
        addr = self._address(X)
        for k in range(self.ell + 1):
            cols = [j for j in range(self.ell + 1) if j != k]
            sub = P[:, cols]
            hit = np.nonzero((sub.max(axis=1) == sub.min(axis=1)) & (sub[:, 0] % self.N == 0))[0]
            if len(hit) != 1:
                raise InvariantViolation("facet does not lie on a unique root hyperplane")
            gi = int(hit[0])
            n = int(sub[gi, 0] // self.N)
            if n == 0:
                kind = ORIGIN
            elif n == addr[gi]:
                kind = CEILING
            elif n == addr[gi] - 1:
                kind = FLOOR
            else:
                raise InvariantViolation("wall level inconsistent with address")
            out.append((gi, n, kind))
        return out

    def _add(self, X: np.ndarray):
        pos = self.rs.positive_roots
        self.X.append(X)
        self.P.append(self.R @ X.T)
        self.addresses.append(self._address(X))
        w = self._walls_of(X)
        self.wall_idx.append(w)
        self.walls.append(tuple(Wall(pos[gi], n, kind) for gi, n, kind in w))

    def __len__(self):
        return len(self.X)

    def alcove(self, i: int) -> Alcove:
        X = self.X[i]
        verts = tuple(tuple(Fraction(int(x), self.N) for x in v) for v in X)
        return Alcove(self.rs, self.addresses[i], verts, self.walls[i])

    def facet_mask(self, k: int) -> int:
        return ((1 << (self.ell + 1)) - 1) & ~(1 << k)

    def face_mask(self, i: int, gi: int, n: int) -> int:
        """Vertices of alcove i lying on H(gamma, n)."""
        row = self.P[i][gi]
        return sum(1 << v for v in range(self.ell + 1) if row[v] == n * self.N)


@lru_cache(maxsize=None)
def complex_of(rs: RootSystem) -> AlcoveComplex:
    return AlcoveComplex(rs)


def alcoves_in_P(rs: RootSystem) -> list[Alcove]:
    cx = complex_of(rs)
    return [cx.alcove(i) for i in range(len(cx))]


def validate_address(rs: RootSystem, r: "Mapping[Root, int] | Iterable[int]") -> bool:
    """Check the two-sided inequality for every additive triple of positive roots."""
    return address_violation(rs, r) is None


def address_violation(rs: RootSystem, r) -> tuple[Root, Root] | None:
    pos = rs.positive_roots
    if isinstance(r, Mapping):
        vals = {b: r[b] for b in pos}
    else:
        vals = dict(zip(pos, r))
    for i, g in enumerate(pos):
        for g2 in pos[i:]:
            s = tuple(x + y for x, y in zip(g, g2))
            if s in vals:
                a, b, c = vals[g], vals[g2], vals[s]
                if not (a + b - 1 <= c <= a + b):
                    return (g, g2)
    return None


def worpitzky_partition_check(rs: RootSystem, q: int) -> dict:
    """Count how often each grid point of P with denominator q is covered.

    Every point m with m_i in {1/q, ..., q/q} must lie in exactly one upper
    closure. Returns a report with the offending points (if any).
    """
    cx = complex_of(rs)
    ell, N = cx.ell, cx.N
    grid = np.array(list(itertools.product(range(1, q + 1), repeat=ell)), dtype=np.int64)
    pair = cx.R @ grid.T                               # (gamma, a) with x = a / q
    cover = np.zeros(len(grid), dtype=np.int64)
    for i in range(len(cx)):
        r = np.array(cx.addresses[i], dtype=np.int64)[:, None]
        inside = np.all((pair >= (r - 1) * q) & (pair <= r * q), axis=0)
        for gi, n, kind in cx.wall_idx[i]:
            if kind != CEILING:
                inside &= pair[gi] != n * q
        cover += inside
    bad = np.nonzero(cover != 1)[0]
    return {
        "system": str(rs),
        "q": q,
        "points": len(grid),
        "ok": len(bad) == 0,
        "bad_points": [([str(Fraction(int(a), q)) for a in grid[j]], int(cover[j])) for j in bad[:20]],
    }


@dataclass(frozen=True)
class FaceConstraint:
    """alpha in Sigma forces Sigma to meet ``ceilings`` (bitmask over Phi+)."""

    alcove: int
    alpha: int      # index into positive roots
    n: int
    face: int       # vertex bitmask of the face
    ceilings: int   # bitmask of ceiling roots whose facet contains the face


@lru_cache(maxsize=None)
def face_constraints(rs: RootSystem) -> tuple[FaceConstraint, ...]:
    """All nonempty intersections of upper closures with H(alpha, n), n = 1..ht(alpha).

    On the closure of P one has 0 <= (alpha, x) <= ht(alpha), because
    (alpha, x) = sum_i d_i m_i with 0 <= m_i <= 1, so higher levels never
    meet it.
    """
    cx = complex_of(rs)
    pos = rs.positive_roots
    out = []
    for i in range(len(cx)):
        floors = [cx.facet_mask(k) for k, (_, _, kind) in enumerate(cx.wall_idx[i]) if kind != CEILING]
        ceils = [(cx.facet_mask(k), gi) for k, (gi, _, kind) in enumerate(cx.wall_idx[i]) if kind == CEILING]
        for a, alpha in enumerate(pos):
            for n in range(1, sum(alpha) + 1):
                F = cx.face_mask(i, a, n)
                if not F or any(F & fm == F for fm in floors):
                    continue
                L = sum(1 << gi for fm, gi in ceils if F & fm == F)
                out.append(FaceConstraint(i, a, n, F, L))
    return tuple(out)


def geometric_compatibility_violation(rs: RootSystem, sigma) -> FaceConstraint | None:
    ctx = context(rs)
    m = ctx.mask(sigma)
    for c in face_constraints(rs):
        if m >> c.alpha & 1 and not (m & c.ceilings):
            return c
    return None


def geometric_compatible(rs: RootSystem, sigma) -> bool:
    """Compatibility decided directly from alcove geometry."""
    return geometric_compatibility_violation(rs, sigma) is None


class GeometricOracle:
    """Fast mask-level evaluation of geometric compatibility for sweeps."""

    def __init__(self, rs: RootSystem):
        by_alpha: dict[int, set[int]] = {}
        for c in face_constraints(rs):
            by_alpha.setdefault(c.alpha, set()).add(c.ceilings)
        # drop constraints implied by a smaller ceiling set for the same alpha
        self.rules = []
        for a, sets in by_alpha.items():
            minimal = [s for s in sets if not any(t != s and t & s == t for t in sets)]
            self.rules.append((1 << a, tuple(minimal)))

    def __call__(self, mask: int) -> bool:
        for bit, sets in self.rules:
            if mask & bit and not all(mask & s for s in sets):
                return False
        return True


@lru_cache(maxsize=None)
def geometric_oracle(rs: RootSystem) -> GeometricOracle:
    return GeometricOracle(rs)


def describe_violation(rs: RootSystem, c: FaceConstraint) -> dict:
    cx = complex_of(rs)
    A = cx.alcove(c.alcove)
    return {
        "alcove_address": [A.address[j] for j in range(len(A.address))],
        "alpha": format_root(rs.positive_roots[c.alpha]),
        "n": c.n,
        "face_vertices": [[str(x) for x in A.vertices[v]] for v in range(cx.ell + 1) if c.face >> v & 1],
    }


def face_ceiling_decomposition(A: Alcove, alpha: Root, n: int) -> set[tuple[Root, int]]:
    """The ceilings of A that cut out the face of its upper closure on H(alpha, n)."""
    rs = A.rs
    cx = complex_of(rs)
    i = cx.index[A.address]
    F = cx.face_mask(i, rs.index(alpha), n)
    walls = cx.wall_idx[i]
    if not F or any(F & cx.facet_mask(k) == F for k, w in enumerate(walls) if w[2] != CEILING):
        raise ValueError("the upper closure does not meet this hyperplane")
    out = set()
    inter = (1 << (cx.ell + 1)) - 1
    for k, (gi, lvl, kind) in enumerate(walls):
        if kind == CEILING and F & cx.facet_mask(k) == F:
            out.add((rs.positive_roots[gi], lvl))
            inter &= cx.facet_mask(k)
    if inter != F:
        raise InvariantViolation("face is not cut out by the ceilings containing it")
    return out


def _solve_in_basis(basis: list[Root], v: Root) -> list[Fraction] | None:
    """Coefficients of v over the independent vectors in basis, or None."""
    k, n = len(basis), len(v)
    A = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    piv = []
    row = 0
    for col in range(k):
        p = next((r for r in range(row, n) if A[r][col] != 0), None)
        if p is None:
            raise InvariantViolation("dependent basis")
        A[row], A[p] = A[p], A[row]
        for r in range(n):
            if r != row and A[r][col] != 0:
                t = A[r][col] / A[row][col]
                A[r] = [a - t * b for a, b in zip(A[r], A[row])]
        piv.append(row)
        row += 1
    if any(A[r][k] != 0 for r in range(row, n)):
        return None
    return [A[piv[c]][k] / A[piv[c]][c] for c in range(k)]


def check_face_ceilings(rs: RootSystem, B: Iterable[Root], alpha: Root) -> str | None:
    """Check that B is a simple system of Phi cap ZB and alpha lies in it.

    Returns a description of the failure, or None.
    """
    B = list(B)
    for beta in rs.positive_roots:
        x = _solve_in_basis(B, beta)
        if x is None or any(c.denominator != 1 for c in x):
            if beta == tuple(alpha):
                return f"{format_root(alpha)} is not an integer combination of the ceilings"
            continue
        if any(c < 0 for c in x):
            return f"{format_root(beta)} has mixed-sign coordinates over the ceilings"
    return None


def face_ceiling_report(rs: RootSystem) -> dict:
    """Run the face/ceiling invariant over every non-facet face encountered."""
    cx = complex_of(rs)
    pos = rs.positive_roots
    checked, failures = 0, []
    seen = set()
    for c in face_constraints(rs):
        if bin(c.face).count("1") == cx.ell:   # facet
            continue
        key = (c.alcove, c.alpha, c.n)
        if key in seen:
            continue
        seen.add(key)
        A = cx.alcove(c.alcove)
        B = [b for b, _ in face_ceiling_decomposition(A, pos[c.alpha], c.n)]
        checked += 1
        err = check_face_ceilings(rs, B, pos[c.alpha])
        if err:
            failures.append({"alcove": c.alcove, "alpha": format_root(pos[c.alpha]), "n": c.n, "error": err})
    return {"system": str(rs), "faces": checked, "failures": failures}


def rX_address(rs: RootSystem, X: Flat) -> dict[Root, int]:
    """The alcove address built from an irreducible rank-2 flat by height induction."""
    g1, g2 = X.simple_system
    pos = rs.positive_roots
    simple = set(rs.simple_roots)
    r: dict[Root, int] = {}

    def minus(b, g):
        d = tuple(x - y for x, y in zip(b, g))
        return d if d in rs._index else None

    for b in pos:  # sorted by height
        if b in simple or rs.leq(b, g1) or rs.leq(b, g2):
            r[b] = 1
            continue
        vals = {r[d] + 1 for d in (minus(b, g1), minus(b, g2)) if d is not None}
        if len(vals) > 1:
            raise InvariantViolation(f"r_X is not well defined at {format_root(b)}")
        if vals:
            r[b] = vals.pop()
            continue
        preds = [r[d] for a in rs.simple_roots if (d := minus(b, a)) is not None]
        r[b] = max(preds)
    return r


def shifted_addresses(rs: RootSystem, X: Flat) -> tuple[dict, dict, dict]:
    """r_X together with the two variants that raise one simple root of X to 2."""
    r = rX_address(rs, X)
    out = [r]
    for g in X.simple_system:
        ri = dict(r)
        ri[g] = 2
        out.append(ri)
    return tuple(out)


def rX_report(rs: RootSystem) -> dict:
    """Validate r_X and its shifts for every irreducible rank-2 flat.

    When the alcoves of P are available the alcove with address r_X is also
    located and both simple roots of X must be among its ceilings at level 1.
    """
    fails = []
    flats = irreducible_rank2_flats(rs)
    cx = complex_of(rs) if rs.rank <= 4 else None
    for X in flats:
        try:
            r, r1, r2 = shifted_addresses(rs, X)
        except InvariantViolation as e:
            fails.append({"flat": [format_root(b) for b in X.simple_system], "map": "r", "error": str(e)})
            continue
        for name, addr in (("r", r), ("r1", r1), ("r2", r2)):
            bad = address_violation(rs, addr)
            if bad:
                fails.append({"flat": [format_root(b) for b in X.simple_system], "map": name,
                              "triple": [format_root(b) for b in bad]})
        if cx is not None:
            key = tuple(r[b] for b in rs.positive_roots)
            if key not in cx.index:
                fails.append({"flat": [format_root(b) for b in X.simple_system], "map": "r", "error": "not in P"})
                continue
            ceil = {(w.root, w.n) for w in cx.walls[cx.index[key]] if w.kind == CEILING}
            if not all((g, 1) in ceil for g in X.simple_system):
                fails.append({"flat": [format_root(b) for b in X.simple_system], "map": "r",
                              "error": "simple roots of X are not ceilings"})
    return {"system": str(rs), "flats": len(flats), "failures": fails}


def alcove_svg(rs: RootSystem, sigma=(), size: int = 480) -> str:
    """SVG drawing of P with its alcoves for a rank-2 system.

    Ceilings are drawn thick; ceilings on roots of ``sigma`` are red.
    """
    if rs.rank != 2:
        raise ValueError("figures are only drawn for rank-2 systems")
    cx = complex_of(rs)
    ctx = context(rs)
    m = ctx.mask(sigma)
    G = rs.gram
    # coweight basis vectors in the plane: solve from Gram of the dual basis
    import numpy.linalg as la

    Ginv = la.inv(np.array(G, dtype=float))
    L = la.cholesky(Ginv)  # rows give coordinates of fundamental coweights
    pad = 20

    def to_xy(v):
        p = np.array([float(x) for x in v]) @ L
        return p

    corners = [to_xy(v) for v in ((0, 0), (1, 0), (1, 1), (0, 1))]
    xs = [c[0] for c in corners]
    ys = [c[1] for c in corners]
    scale = (size - 2 * pad) / max(max(xs) - min(xs), max(ys) - min(ys))

    def pt(v):
        p = to_xy(v)
        return (pad + (p[0] - min(xs)) * scale, size - pad - (p[1] - min(ys)) * scale)

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
             '<rect width="100%" height="100%" fill="white"/>']
    poly = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(pt, ((0, 0), (1, 0), (1, 1), (0, 1))))
    lines.append(f'<polygon points="{poly}" fill="#eef" stroke="black" stroke-width="1"/>')
    for i in range(len(cx)):
        A = cx.alcove(i)
        P = [pt(v) for v in A.vertices]
        tri = " ".join(f"{x:.2f},{y:.2f}" for x, y in P)
        lines.append(f'<polygon points="{tri}" fill="none" stroke="#888" stroke-width="0.8"/>')
        for k, w in enumerate(A.walls):
            if w.kind != CEILING:
                continue
            a, b = [P[j] for j in range(3) if j != k]
            colour = "red" if m >> rs.index(w.root) & 1 else "blue"
            lines.append(f'<line x1="{a[0]:.2f}" y1="{a[1]:.2f}" x2="{b[0]:.2f}" y2="{b[1]:.2f}" '
                         f'stroke="{colour}" stroke-width="2.5"/>')
    lines.append("</svg>")
    return "\n".join(lines)
