"""Freeness of central arrangements and multiarrangements.

The module D(A, m) of logarithmic derivations is explored degree by
degree. In each degree the homogeneous part is the kernel of an exact
integer matrix, and comparing it with the multiples of the generators
already found counts the minimal generators in that degree. That count
decides freeness both ways:

* r minimal generators whose degrees add up to |m| and whose coefficient
  determinant is nonzero form a basis (Saito's criterion), so A is free;
* more than r minimal generators, or r of them that are dependent or
  whose degrees do not add up to |m|, rule freeness out, because a free
  module of rank r has exactly r minimal generators, all of them
  independent.

To keep the linear algebra small the search runs inside the span of a
known basis of a free sub-arrangement B of A (for cones of deformations
of Weyl arrangements this is a chain Weyl < Shi^1 < Cat^1 < Shi^2 < ...).
Every element of D(A) is a unique polynomial combination of that basis,
so only the hyperplanes of A outside B impose conditions. For a simple
arrangement containing a hyperplane H0 the Euler derivation is split
off: D(A) = S*theta_E + {theta in D(A) : theta(alpha_H0) = 0}.
"""
from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import flint

from .errors import GuardExceeded, InvariantViolation
from .quasipoly import IntegralArrangement, char_poly_central, shi_arrangement
from .rootsys import RootSystem, format_root
from .subsets import context

Form = tuple[int, ...]
MODULAR_PRIME = 2**61 - 1
COLUMN_GUARD = 20000


def canonical_form(v: Sequence) -> Form:
    """Primitive integer vector with first nonzero entry positive."""
    from fractions import Fraction

    fr = [Fraction(x) for x in v]
    den = math.lcm(*(x.denominator for x in fr))
    iv = [int(x * den) for x in fr]
    if not any(iv):
        raise ValueError("zero linear form")
    g = math.gcd(*iv)
    iv = [x // g for x in iv]
    if next(x for x in iv if x) < 0:
        iv = [-x for x in iv]
    return tuple(iv)


@dataclass(frozen=True)
class CentralArrangement:
    dim: int
    forms: tuple[Form, ...]

    @classmethod
    def of(cls, forms: Iterable[Sequence], dim: int | None = None) -> "CentralArrangement":
        fs = [canonical_form(f) for f in forms]
        if dim is None:
            if not fs:
                raise ValueError("dimension needed for an empty arrangement")
            dim = len(fs[0])
        if len(set(fs)) != len(fs):
            raise ValueError("repeated hyperplane")
        if any(len(f) != dim for f in fs):
            raise ValueError("forms of inconsistent length")
        return cls(dim, tuple(sorted(fs)))

    @property
    def rank(self) -> int:
        if not self.forms:
            return 0
        return flint.fmpz_mat([list(f) for f in self.forms]).rank()

    def __len__(self):
        return len(self.forms)

    def char_poly(self) -> tuple[int, ...]:
        return char_poly_central(self.forms, self.dim)


def cone_of(arr: IntegralArrangement) -> CentralArrangement:
    """Homogenise x.C_j = b_j to x.C_j - b_j z = 0 and add z = 0."""
    forms = [tuple(c) + (-bj,) for c, bj in zip(arr.columns, arr.b)]
    forms.append((0,) * arr.ell + (1,))
    return CentralArrangement.of(forms, arr.ell + 1)


# polynomial helpers ---------------------------------------------------------

@lru_cache(maxsize=None)
def _ctx(r: int):
    return flint.fmpz_mpoly_ctx.get(("x", r), "deglex")


@lru_cache(maxsize=None)
def monomials(r: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of total degree d in r variables (fixed order)."""
    if d < 0:
        return ()
    if r == 1:
        return ((d,),)
    return tuple((a,) + rest for a in range(d, -1, -1) for rest in monomials(r - 1, d - a))


def linear_poly(r: int, a: Sequence[int]):
    ctx = _ctx(r)
    return ctx.from_dict({tuple(int(i == j) for j in range(r)): int(c) for i, c in enumerate(a) if c})


def _mono_values(P: Sequence[int], exps) -> list[int]:
    pw = [[1] for _ in P]
    out = []
    for e in exps:
        v = 1
        for i, k in enumerate(e):
            if k:
                row = pw[i]
                while len(row) <= k:
                    row.append(row[-1] * P[i])
                v *= row[k]
        out.append(v)
    return out


@lru_cache(maxsize=None)
def _hyperplane_points(a: Form, d: int) -> tuple[tuple[int, ...], ...]:
    """Integer points on a.x = 0 unisolvent for degree-d forms restricted to it."""
    r = len(a)
    p = next(i for i, x in enumerate(a) if x)
    pts = []
    for y in monomials(r - 1, d):
        x = [0] * r
        it = iter(y)
        acc = 0
        for j in range(r):
            if j == p:
                continue
            yj = next(it)
            x[j] = a[p] * yj
            acc += a[j] * yj
        x[p] = -acc
        pts.append(tuple(x))
    return tuple(pts)


@dataclass
class Derivation:
    degree: int
    components: tuple          # fmpz_mpoly per coordinate

    def apply(self, a: Sequence[int]):
        r = len(self.components)
        ctx = _ctx(r)
        out = ctx.from_dict({})
        for c, comp in zip(a, self.components):
            if c:
                out += int(c) * comp
        return out

    def __call__(self, point: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(c(*point)) for c in self.components)

    def to_json(self) -> dict:
        return {"degree": self.degree, "components": [str(c) for c in self.components]}


def euler(r: int) -> Derivation:
    gens = _ctx(r).gens()
    return Derivation(1, tuple(gens))


# the base basis --------------------------------------------------------------

class Base:
    """A basis of D(B) for a free (multi)arrangement B, used as coordinates.

    ``split`` bases hold a basis of {theta in D(B) : theta(alpha_H0) = 0};
    the Euler derivation completes it to a basis of D(B).
    """

    def __init__(self, r: int, gens: list[Derivation], forms: dict[Form, int], split: bool, label: str = ""):
        self.r = r
        self.gens = gens
        self.forms = dict(forms)     # form -> multiplicity already imposed
        self.split = split
        self.label = label
        self._g: dict[Form, list] = {}
        self._blocks: dict[tuple, list[list[int]]] = {}
        self._cols: dict[int, list[tuple[int, tuple]]] = {}

    @property
    def degrees(self) -> list[int]:
        return [g.degree for g in self.gens]

    def g(self, a: Form) -> list:
        if a not in self._g:
            self._g[a] = [g.apply(a) for g in self.gens]
        return self._g[a]

    def columns(self, d: int) -> list[tuple[int, tuple]]:
        if d not in self._cols:
            cols = [(j, e) for j, g in enumerate(self.gens) for e in monomials(self.r, d - g.degree)]
            if len(cols) > COLUMN_GUARD:
                raise GuardExceeded(f"{len(cols)} unknowns in degree {d}")
            self._cols[d] = cols
        return self._cols[d]

    def block(self, a: Form, m: int, d: int) -> list[list[int]]:
        """Rows expressing 'theta(alpha) divisible by alpha^m' in degree d."""
        key = (a, m, d)
        if key not in self._blocks:
            self._blocks[key] = self._eval_block(a, d) if m == 1 else self._subst_block(a, m, d)
        return self._blocks[key]

    def _eval_block(self, a: Form, d: int) -> list[list[int]]:
        gs = self.g(a)
        pts = _hyperplane_points(a, d)
        rows = []
        for P in pts:
            row = []
            for j, g in enumerate(gs):
                e = d - self.gens[j].degree
                if e < 0:
                    continue
                gv = int(g(*P))
                row.extend(gv * v for v in _mono_values(P, monomials(self.r, e)))
            rows.append(row)
        return rows

    def _subst_block(self, a: Form, m: int, d: int) -> list[list[int]]:
        # x = s e_p + sum_{j != p} t_j (a_p e_j - a_j e_p); alpha(x) = a_p s
        r = self.r
        ctx = _ctx(r)
        X = ctx.gens()
        p = next(i for i, x in enumerate(a) if x)
        subs = []
        for i in range(r):
            if i == p:
                subs.append(X[p] - sum((a[j] * X[j] for j in range(r) if j != p), ctx.from_dict({})))
            else:
                subs.append(a[p] * X[i])
        row_keys = [e for e in monomials(r, d) if e[p] < m]
        row_index = {e: i for i, e in enumerate(row_keys)}
        cols = self.columns(d)
        mat = [[0] * len(cols) for _ in row_keys]
        gs = self.g(a)
        for c, (j, e) in enumerate(cols):
            poly = ctx.from_dict({e: 1}) * gs[j]
            img = poly.compose(*subs)
            for exp, coef in img.to_dict().items():
                i = row_index.get(tuple(exp))
                if i is not None:
                    mat[i][c] = int(coef)
        return mat


def generic_base(r: int, a: Form | None = None, split: bool = True) -> Base:
    """Basis of D({H0}) for H0 = ker(a), or of D(empty) if ``split`` is False."""
    ctx = _ctx(r)
    one, zero = ctx.from_dict({(0,) * r: 1}), ctx.from_dict({})
    if not split:
        gens = [Derivation(0, tuple(one if i == j else zero for i in range(r))) for j in range(r)]
        return Base(r, gens, {}, False, "constant")
    p = next(i for i, x in enumerate(a) if x)
    gens = []
    for j in range(r):
        if j == p:
            continue
        comp = [zero] * r
        comp[j] = a[p] * one
        comp[p] = -a[j] * one
        gens.append(Derivation(0, tuple(comp)))
    return Base(r, gens, {a: 1}, True, f"generic {format_root(a)}")


# verdicts ---------------------------------------------------------------------

FREE, NOT_FREE, PROBABLY_NOT_FREE = "free", "not_free", "probably_not_free"


@dataclass
class Verdict:
    status: str
    exponents: tuple[int, ...] | None = None
    reason: str = ""
    exact: bool = True
    basis: list[Derivation] = field(default_factory=list, repr=False)
    generator_degrees: tuple[int, ...] = ()
    certificate: str = ""
    trials: int = 0
    seed: int = 0

    @property
    def free(self) -> bool:
        return self.status == FREE

    def to_json(self) -> dict:
        d = {"status": self.status, "reason": self.reason, "exact": self.exact}
        if self.exponents is not None:
            d["exponents"] = list(self.exponents)
        if self.generator_degrees:
            d["minimal_generator_degrees"] = list(self.generator_degrees)
        if self.certificate:
            d["saito_certificate_sha256"] = self.certificate
        if not self.exact or self.status == PROBABLY_NOT_FREE:
            d["trials"], d["seed"] = self.trials, self.seed
        return d


# linear algebra back ends ----------------------------------------------------

class _Field:
    def __init__(self, modular: bool):
        self.modular = modular

    def mat(self, rows, ncols):
        if not rows:
            rows = [[0] * ncols]
        if self.modular:
            return flint.nmod_mat(rows, MODULAR_PRIME)
        return flint.fmpz_mat(rows)

    def nullspace(self, rows, ncols) -> list[list[int]]:
        if not rows:
            return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
        M = self.mat(rows, ncols)
        N, k = M.nullspace()
        out = []
        for c in range(k):
            v = [int(N[i, c]) for i in range(ncols)]
            if self.modular:
                v = [x - MODULAR_PRIME if x > MODULAR_PRIME // 2 else x for x in v]
            else:
                g = math.gcd(*v)
                v = [x // g for x in v]
            out.append(v)
        return out

    def independent_rows(self, rows: list[list[int]], ncols: int) -> list[int]:
        """Indices of a maximal independent subset of rows, preferring earlier rows."""
        if not rows:
            return []
        T = self.mat([list(col) for col in zip(*rows)], len(rows))   # columns = original rows
        if self.modular:
            R = T.rref()[0]
        else:
            R = T.rref()[0]
        piv = []
        for i in range(R.nrows()):
            for j in range(R.ncols()):
                if R[i, j] != 0:
                    piv.append(j)
                    break
        return piv


# the search -------------------------------------------------------------------

@dataclass
class _Gen:
    degree: int
    coeffs: dict          # (base index, monomial) -> int
    derivation: Derivation


def _shift(coeffs: dict, mono: tuple) -> dict:
    return {(j, tuple(x + y for x, y in zip(e, mono))): c for (j, e), c in coeffs.items()}


def _materialise(base: Base, coeffs: dict, degree: int) -> Derivation:
    r = base.r
    ctx = _ctx(r)
    by_j: dict[int, dict] = {}
    for (j, e), c in coeffs.items():
        if c:
            by_j.setdefault(j, {})[e] = c
    comps = [ctx.from_dict({}) for _ in range(r)]
    for j, terms in by_j.items():
        f = ctx.from_dict(terms)
        for i, phi in enumerate(base.gens[j].components):
            if not phi.is_zero():
                comps[i] += f * phi
    return Derivation(degree, tuple(comps))


def _det_at(derivs: list[Derivation], point, modulus: int | None = None) -> int:
    rows = [list(d(point)) for d in derivs]
    if modulus:
        return int(flint.nmod_mat([[x % modulus for x in r] for r in rows], modulus).det())
    return int(flint.fmpz_mat(rows).det())


def symbolic_det(derivs: list[Derivation]):
    """Determinant of the component matrix by Laplace expansion over column subsets."""
    r = len(derivs)
    if any(len(d.components) != r for d in derivs):
        raise ValueError("the determinant needs as many derivations as variables")
    ctx = _ctx(r)
    A = [list(d.components) for d in derivs]
    # minors[S] = det of the last |S| rows restricted to the columns in S
    minors = {0: ctx.from_dict({(0,) * r: 1})}
    for i in range(r - 1, -1, -1):
        nxt = {}
        for S, M in minors.items():
            if M.is_zero():
                continue
            cols_in = [c for c in range(r) if S >> c & 1]
            for c in range(r):
                if S >> c & 1 or A[i][c].is_zero():
                    continue
                sign = -1 if sum(1 for x in cols_in if x < c) % 2 else 1
                T = S | 1 << c
                term = A[i][c] * M if sign > 0 else -(A[i][c] * M)
                nxt[T] = nxt[T] + term if T in nxt else term
        minors = nxt
    return minors.get((1 << r) - 1, ctx.from_dict({}))


def defining_polynomial(r: int, mult: dict[Form, int]):
    ctx = _ctx(r)
    Q = ctx.from_dict({(0,) * r: 1})
    for a, m in mult.items():
        if m:
            Q *= linear_poly(r, a) ** m
    return Q


def verify_saito(derivs: list[Derivation], mult: dict[Form, int]) -> tuple[bool, str]:
    """Exact check that derivs lie in D(A, m) and det = c * Q(A, m) with c != 0."""
    r = len(derivs)
    if not derivs or any(len(d.components) != r for d in derivs):
        return False, "a Saito basis has exactly one derivation per variable"
    for a, m in mult.items():
        if not m:
            continue
        al = linear_poly(r, a) ** m
        for d in derivs:
            q, rem = divmod(d.apply(a), al)
            if not rem.is_zero():
                return False, f"derivation of degree {d.degree} is not logarithmic along {format_root(a)}"
    D = symbolic_det(derivs)
    Q = defining_polynomial(r, mult)
    c, rem = divmod(D, Q)
    if D.is_zero() or not rem.is_zero() or not c.is_constant():
        return False, "determinant is not a nonzero multiple of the defining polynomial"
    h = hashlib.sha256()
    for d in derivs:
        for comp in d.components:
            h.update(str(sorted(comp.to_dict().items())).encode())
            h.update(b";")
    return True, h.hexdigest()


def _search(base: Base, conds: dict[Form, int], total: int, *, modular: bool = False,
            seed: int = 0, trials: int = 20, symbolic: bool = True, full_mult: dict | None = None) -> Verdict:
    """Find minimal generators of the module cut out of span(base) by ``conds``.

    ``total`` is |A| (or |m|); for split bases it includes the Euler
    derivation, which is prepended to any basis found.
    """
    r = base.r
    F = _Field(modular)
    rank_target = r - 1 if base.split else r
    sum_target = total - 1 if base.split else total
    rng = random.Random(seed)
    gens: list[_Gen] = []
    dmin = min(base.degrees) if base.gens else 0
    for d in range(dmin, max(sum_target, dmin) + 1):
        cols = base.columns(d)
        ncols = len(cols)
        if ncols == 0:
            continue
        col_index = {c: i for i, c in enumerate(cols)}
        rows: list[list[int]] = []
        for a, m in conds.items():
            if m:
                rows.extend(base.block(a, m, d))
        K = F.nullspace(rows, ncols)
        # multiples of earlier generators
        U = []
        for g in gens:
            for mono in monomials(r, d - g.degree):
                vec = [0] * ncols
                for key, c in _shift(g.coeffs, mono).items():
                    vec[col_index[key]] = c
                U.append(vec)
        pick = F.independent_rows(U + K, ncols)
        new = [K[i - len(U)] for i in pick if i >= len(U)]
        for v in new:
            coeffs = {cols[i]: c for i, c in enumerate(v) if c}
            gens.append(_Gen(d, coeffs, _materialise(base, coeffs, d)))
        degs = tuple(g.degree for g in gens)
        if len(gens) > rank_target:
            return Verdict(NOT_FREE, reason=f"{len(gens)} minimal generators exceed the rank {rank_target}"
                           f" (degrees {list(degs)})", exact=not modular, generator_degrees=degs)
        if len(gens) == rank_target:
            derivs = ([euler(r)] if base.split else []) + [g.derivation for g in gens]
            independent = False
            for t in range(trials):
                pt = [rng.randint(-10**6, 10**6) for _ in range(r)]
                if _det_at(derivs, pt, MODULAR_PRIME if modular else None) != 0:
                    independent = True
                    break
            if not independent and not modular:
                independent = not symbolic_det(derivs).is_zero()
            if not independent:
                if modular:
                    return Verdict(PROBABLY_NOT_FREE, reason="minimal generators look dependent", exact=False,
                                   generator_degrees=degs, trials=trials, seed=seed)
                return Verdict(NOT_FREE, reason="the first minimal generators are dependent, so more are needed",
                               generator_degrees=degs)
            if sum(degs) != sum_target:
                return Verdict(NOT_FREE, reason=f"independent minimal generators of degrees {list(degs)} "
                               f"do not sum to {sum_target}", exact=not modular, generator_degrees=degs)
            exps = tuple(sorted(g.degree for g in derivs))
            cert = ""
            if symbolic and not modular:
                ok, cert = verify_saito(derivs, full_mult if full_mult is not None else {})
                if not ok:
                    raise InvariantViolation(f"Saito verification failed: {cert}")
            return Verdict(FREE, exps, reason="Saito basis", exact=not modular, basis=derivs,
                           generator_degrees=degs, certificate=cert, trials=trials, seed=seed)
        if sum(degs) + (rank_target - len(gens)) * (d + 1) > sum_target:
            return Verdict(NOT_FREE, reason=f"degree sum of minimal generators must exceed {sum_target}"
                           f" (found {list(degs)} up to degree {d})", exact=not modular, generator_degrees=degs)
    return Verdict(NOT_FREE, reason="no basis up to the maximal degree", exact=not modular,
                   generator_degrees=tuple(g.degree for g in gens))


def terao_roots(chi: Sequence[int]) -> list[int] | None:
    """Roots of chi with multiplicity if it splits into linear factors with nonnegative integer roots."""
    P = flint.fmpz_poly(list(chi))
    roots = []
    c, facs = P.factor()
    for f, e in facs:
        if f.degree() != 1 or abs(int(f[1])) != 1:
            return None
        root = -int(f[0]) * int(f[1])
        if root < 0:
            return None
        roots.extend([root] * e)
    return sorted(roots)


def is_free(arr: CentralArrangement, base: Base | None = None, *, mode: str = "exact", seed: int = 0,
            trials: int = 20, screen: bool = True, symbolic: bool = True) -> Verdict:
    """Decide freeness of a central arrangement.

    With ``screen`` the characteristic polynomial must split over the
    nonnegative integers first (a necessary condition); once a basis is
    found its degrees must match the roots, which is asserted.
    """
    if mode not in ("exact", "modular"):
        raise ValueError("mode must be 'exact' or 'modular'")
    r = arr.dim
    if len(arr.forms) > 80 or r > 5 or (mode == "exact" and r > 4):
        raise GuardExceeded("freeness supports <= 80 forms and rank <= 4 (exact) or 5 (modular)")
    roots = None
    if screen:
        chi = arr.char_poly()
        roots = terao_roots(chi)
        if roots is None:
            return Verdict(NOT_FREE, reason="characteristic polynomial does not split over nonnegative integers",
                           exact=True)
    mult = {a: 1 for a in arr.forms}
    if not arr.forms:
        base = generic_base(r, split=False)
    elif base is None:
        base = generic_base(r, arr.forms[0])
    missing = [a for a in base.forms if a not in mult]
    if missing:
        raise ValueError("base arrangement is not contained in the arrangement")
    conds = {a: 1 for a in arr.forms if a not in base.forms}
    v = _search(base, conds, len(arr.forms), modular=(mode == "modular"), seed=seed, trials=trials,
                symbolic=symbolic, full_mult=mult)
    if v.free and roots is not None and list(v.exponents) != roots:
        raise InvariantViolation(f"exponents {v.exponents} disagree with chi roots {roots}")
    return v


def multi_is_free(dim: int, mult: dict[Sequence, int], *, mode: str = "exact", seed: int = 0,
                  trials: int = 20) -> Verdict:
    """Freeness of a multiarrangement (no Euler split)."""
    m = {canonical_form(a): k for a, k in mult.items()}
    base = generic_base(dim, split=False)
    return _search(base, {a: k for a, k in m.items() if k}, sum(m.values()), modular=(mode == "modular"),
                   seed=seed, trials=trials, full_mult=m)


def derivation_space(arr: CentralArrangement, mult: dict | None, d: int) -> list[Derivation]:
    """A basis of the degree-d part of D(A, m) (m = 1 when ``mult`` is None)."""
    r = arr.dim
    m = {a: 1 for a in arr.forms} if mult is None else {canonical_form(a): k for a, k in mult.items()}
    base = generic_base(r, split=False)
    cols = base.columns(d)
    rows = []
    for a, k in m.items():
        if k:
            rows.extend(base.block(a, k, d))
    K = _Field(False).nullspace(rows, len(cols))
    return [_materialise(base, {cols[i]: c for i, c in enumerate(v) if c}, d) for v in K]


def rank2_multi_exponents(forms: Sequence[Sequence[int]], mult: Sequence[int]) -> tuple[int, int]:
    """Exponents (e1 <= e2) of a rank-2 multiarrangement; always free."""
    m = {}
    for a, k in zip(forms, mult):
        m[canonical_form(a)] = m.get(canonical_form(a), 0) + k
    v = multi_is_free(2, m)
    if not v.free:
        raise InvariantViolation("rank-2 multiarrangement reported not free")
    e1, e2 = sorted(v.exponents)
    return e1, e2


def degree_shift_check(forms: Sequence[Sequence[int]], mult: Sequence[int], k: int) -> dict:
    """exponents(A, 2k + m) against exponents(A, m) + (k|A|, k|A|) in rank 2."""
    n = len(forms)
    e = rank2_multi_exponents(forms, mult)
    e2 = rank2_multi_exponents(forms, [2 * k + x for x in mult])
    expect = (e[0] + k * n, e[1] + k * n)
    return {"mult": list(mult), "k": k, "exponents": e, "shifted": e2, "ok": e2 == expect}


# deformations of Weyl arrangements -------------------------------------------

def shi_cone(rs: RootSystem, k: int, sigma=(), sign: str = "plus") -> CentralArrangement:
    return cone_of(shi_arrangement(rs, k, sigma, sign))


def catalan_cone(rs: RootSystem, k: int) -> CentralArrangement:
    return cone_of(shi_arrangement(rs, k, rs.positive_roots, "plus"))


def weyl_cone(rs: RootSystem) -> CentralArrangement:
    """Cone of the Weyl arrangement, which is Cat^0."""
    return catalan_cone(rs, 0)


def _base_from(verdict: Verdict, arr: CentralArrangement, label: str) -> Base:
    if not verdict.free:
        raise InvariantViolation(f"{label} is expected to be free: {verdict.reason}")
    # drop the Euler derivation: the rest annihilate z
    gens = verdict.basis[1:]
    r = arr.dim
    z = (0,) * (r - 1) + (1,)
    for g in gens:
        if not g.components[-1].is_zero():
            raise InvariantViolation("split basis element does not annihilate z")
    return Base(r, gens, {a: 1 for a in arr.forms}, True, label)


@lru_cache(maxsize=None)
def chain_base(rs: RootSystem, kind: str, k: int) -> Base:
    """Bases for cones of Weyl (k = 0), Shi^k and Cat^k, each built on the previous."""
    r = rs.rank + 1
    z = (0,) * rs.rank + (1,)
    if kind == "cat" and k == 0:
        kind = "weyl"
    if kind == "weyl":
        arr, base = weyl_cone(rs), generic_base(r, z)
    elif kind == "shi":
        arr, base = shi_cone(rs, k), chain_base(rs, "cat", k - 1)
    elif kind == "cat":
        arr, base = catalan_cone(rs, k), chain_base(rs, "shi", k)
    else:
        raise ValueError(kind)
    v = is_free(arr, base, screen=False)
    return _base_from(v, arr, f"{kind}{k} of {rs}")


def free_shi_subset(rs: RootSystem, sigma, k: int, sign: str = "plus", **kw) -> Verdict:
    """Freeness of cone(S^k_Sigma) or cone(S^k_{-Sigma})."""
    arr = shi_cone(rs, k, sigma, sign)
    base = chain_base(rs, "shi", k) if sign == "plus" else chain_base(rs, "cat", k - 1)
    return is_free(arr, base, **kw)


def weyl_subarrangement(rs: RootSystem, sigma) -> CentralArrangement:
    roots = context(rs).roots(context(rs).mask(sigma))
    return CentralArrangement.of(roots, rs.rank)


def subset_free(rs: RootSystem, sigma, **kw) -> Verdict:
    """Freeness of the Weyl subarrangement A_Sigma in the ambient space."""
    arr = weyl_subarrangement(rs, sigma)
    return is_free(arr, generic_base(rs.rank, split=False), **kw)


def is_shi_free(rs: RootSystem, sigma, k_list: Sequence[int] = (1, 2), **kw) -> dict:
    """Saito-checker verdicts on cone(S^k_Sigma) for each k, plus a combined flag."""
    per_k = {k: free_shi_subset(rs, sigma, k, "plus", **kw) for k in k_list}
    return {"per_k": per_k, "shi_free": all(v.free for v in per_k.values())}


def shi_free_predicate(rs: RootSystem, sigma, free: bool | None = None) -> bool:
    """Compatible and free (any type but G2), or compatible or an exception (G2)."""
    ctx = context(rs)
    m = ctx.mask(sigma)
    if ctx.is_g2:
        return ctx.is_compatible(m) or ctx.is_g2_shi_exception(m)
    if not ctx.is_compatible(m):
        return False
    if free is None:
        free = subset_free(rs, m).free
    return free


def exponent_duality_check(rs: RootSystem, sigma, k: int = 1) -> dict:
    """Exponents of cone(S^k_{+-Sigma}) against (1, kh +- e_i)."""
    h = rs.coxeter_number
    va = subset_free(rs, sigma)
    if not va.free:
        raise ValueError("the subset is not free")
    e = sorted(va.exponents)
    vp = free_shi_subset(rs, sigma, k, "plus")
    vm = free_shi_subset(rs, sigma, k, "minus")
    want_p = sorted([1] + [k * h + x for x in e])
    want_m = sorted([1] + [k * h - x for x in e])
    got_p = sorted(vp.exponents) if vp.free else None
    got_m = sorted(vm.exponents) if vm.free else None
    return {
        "system": str(rs),
        "subset": [format_root(b) for b in context(rs).roots(context(rs).mask(sigma))],
        "k": k,
        "subset_exponents": e,
        "plus": got_p,
        "plus_expected": want_p,
        "minus": got_m,
        "minus_expected": want_m,
        "ok": got_p == want_p and got_m == want_m,
    }


def ziegler_restriction(arr: CentralArrangement) -> dict[Form, int]:
    """Multirestriction onto the last coordinate hyperplane (the hyperplane at infinity)."""
    r = arr.dim
    z = (0,) * (r - 1) + (1,)
    if z not in arr.forms:
        raise ValueError("arrangement does not contain z = 0")
    mult: dict[Form, int] = {}
    for a in arr.forms:
        if a == z:
            continue
        lin = canonical_form(a[:-1])
        mult[lin] = mult.get(lin, 0) + 1
    return mult


def yoshinaga_check(arr: CentralArrangement) -> dict:
    """For a rank-3 cone: free iff chi = (t-1)(t-d1)(t-d2) with (d1, d2) the Ziegler exponents."""
    if arr.dim != 3:
        raise ValueError("the rank-3 criterion needs three variables")
    mult = ziegler_restriction(arr)
    d1, d2 = rank2_multi_exponents(list(mult), list(mult.values()))
    chi = arr.char_poly()
    ideal = flint.fmpz_poly([-1, 1]) * flint.fmpz_poly([-d1, 1]) * flint.fmpz_poly([-d2, 1])
    predicted = [int(c) for c in ideal.coeffs()]
    return {"ziegler_exponents": (d1, d2), "chi": list(chi), "free_by_criterion": list(chi) == predicted}
