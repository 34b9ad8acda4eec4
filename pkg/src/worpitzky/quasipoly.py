"""Characteristic quasi-polynomials by exact counting.

An integral arrangement (C; b) has hyperplanes H_j = {x : x.C_j = b_j}.
Its reduction mod q cuts Z_q^l, and the number of points avoiding every
reduced hyperplane is a quasi-polynomial in q for q large enough. For a
central arrangement (b = 0) the count is quasi-polynomial for every q >= 1.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import flint
import numpy as np

from .errors import FitError, GuardExceeded, InvariantViolation
from .rootsys import Root, RootSystem
from .subsets import context
from .weyl import eulerian_polynomial

COUNT_GUARD = 10**9


@dataclass(frozen=True)
class IntegralArrangement:
    ell: int
    columns: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]

    def __post_init__(self):
        if len(self.columns) != len(self.b):
            raise ValueError("one offset per column is required")
        for c in self.columns:
            if len(c) != self.ell or not any(c):
                raise ValueError("columns must be nonzero vectors of length ell")

    @property
    def n(self) -> int:
        return len(self.columns)

    @property
    def is_central(self) -> bool:
        return not any(self.b)

    def matrix(self) -> list[list[int]]:
        """The ell x n coefficient matrix C."""
        return [[c[i] for c in self.columns] for i in range(self.ell)]


def from_subset(rs: RootSystem, sigma) -> IntegralArrangement:
    roots = context(rs).roots(context(rs).mask(sigma))
    return IntegralArrangement(rs.rank, roots, (0,) * len(roots))


def shi_arrangement(rs: RootSystem, k: int, sigma=(), sign: str = "plus") -> IntegralArrangement:
    """S^k_Sigma (sign "plus") or S^k_{-Sigma} (sign "minus").

    The base is H(alpha, n) for 1-k <= n <= k. "plus" adds H(alpha, -k) for
    alpha in Sigma, "minus" removes H(alpha, k) for alpha in Sigma.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if sign not in ("plus", "minus"):
        raise ValueError("sign must be 'plus' or 'minus'")
    ctx = context(rs)
    m = ctx.mask(sigma)
    cols, b = [], []
    for i, alpha in enumerate(rs.positive_roots):
        ins = bool(m >> i & 1)
        lo, hi = 1 - k, k
        if sign == "plus" and ins:
            lo = -k
        if sign == "minus" and ins:
            hi = k - 1
        for n in range(lo, hi + 1):
            cols.append(alpha)
            b.append(n)
    return IntegralArrangement(rs.rank, tuple(cols), tuple(b))


def count_complement(arr: IntegralArrangement, q: int, chunk: int = 1 << 18) -> int:
    """Number of z in Z_q^l with z.C_j != b_j (mod q) for every j."""
    if q < 1:
        raise ValueError("q must be positive")
    ell = arr.ell
    if q**ell > COUNT_GUARD:
        raise GuardExceeded(f"q^l = {q**ell} exceeds {COUNT_GUARD}")
    if arr.n == 0:
        return q**ell
    C = np.array(arr.matrix(), dtype=np.int64)
    b = np.array(arr.b, dtype=np.int64) % q
    total = 0
    # enumerate the leading coordinates in blocks, the rest as a grid
    tail = min(ell, max(1, int(math.log(chunk, max(q, 2)))))
    tail_grid = np.array(list(itertools.product(range(q), repeat=tail)), dtype=np.int64).reshape(-1, tail)
    tail_part = (tail_grid @ C[ell - tail:]) % q
    for head in itertools.product(range(q), repeat=ell - tail):
        h = (np.array(head, dtype=np.int64) @ C[: ell - tail]) if head else 0
        vals = (tail_part + h) % q
        total += int(np.count_nonzero(np.all(vals != b, axis=1)))
    return total


def subset_counts(rs: RootSystem, q: int) -> np.ndarray:
    """Complement counts of A_Sigma mod q for every subset Sigma at once, indexed by mask.

    Points of Z_q^l are binned by the set of roots vanishing on them; the
    count for Sigma is the number of points whose set misses Sigma, i.e. a
    subset-sum (zeta) transform evaluated at the complement of Sigma.
    """
    ell, n = rs.rank, rs.n_positive
    if q**ell > COUNT_GUARD or n > 24:
        raise GuardExceeded("subset_counts is limited to q^l <= 1e9 and |Phi+| <= 24")
    C = np.array([list(b) for b in rs.positive_roots], dtype=np.int64).T
    weights = (1 << np.arange(n, dtype=np.int64))
    hist = np.zeros(1 << n, dtype=np.int64)
    for head in range(q):
        grid = np.array(list(itertools.product(range(q), repeat=ell - 1)), dtype=np.int64).reshape(-1, ell - 1)
        pts = np.hstack([np.full((len(grid), 1), head, dtype=np.int64), grid])
        zero = ((pts @ C) % q == 0) @ weights
        hist += np.bincount(zero, minlength=1 << n)
    f = hist.copy()
    for i in range(n):
        bit = 1 << i
        idx = np.arange(1 << n)
        sel = idx[(idx & bit) != 0]
        f[sel] += f[sel ^ bit]
    full = (1 << n) - 1
    return f[full ^ np.arange(1 << n)]


def period_candidate(arr: IntegralArrangement, max_subsets: int = 1 << 16) -> int:
    """lcm over column subsets J of the largest elementary divisor of C_J.

    Only the distinct normals matter. When there are too many subsets the
    enumeration is restricted to subsets of size <= l.
    """
    normals = sorted({tuple(c) for c in arr.columns})
    ell = arr.ell
    n = len(normals)
    if 2**n <= max_subsets:
        sizes = range(1, n + 1)
    else:
        sizes = range(1, ell + 1)
    rho = 1
    for size in sizes:
        for J in itertools.combinations(normals, size):
            M = flint.fmpz_mat([[c[i] for c in J] for i in range(ell)])
            S = M.snf()
            diag = [int(S[i, i]) for i in range(min(S.nrows(), S.ncols())) if S[i, i] != 0]
            if diag:
                rho = math.lcm(rho, abs(diag[-1]))
    return rho


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> list[Fraction]:
    """Coefficients (low to high) of the polynomial through the points."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        for k in range(n):
            coeffs[k] += ys[i] * basis[k] / denom
    return coeffs


def _peval(coeffs: Sequence[Fraction], x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class QuasiPolynomial:
    period: int
    constituents: tuple[tuple[Fraction, ...], ...]   # constituents[k-1] for q = k mod period, low to high
    fitted_range: tuple[int, int] = (0, 0)
    threshold: int = 1    # counts agree with the quasi-polynomial for all sampled q >= threshold

    def constituent(self, q: int) -> tuple[Fraction, ...]:
        return self.constituents[(q - 1) % self.period]

    def __call__(self, q: int) -> Fraction:
        return _peval(self.constituent(q), q)

    @property
    def degree(self) -> int:
        return max(len(c) - 1 for c in self.constituents)

    def is_monic(self, degree: int) -> bool:
        return all(len(c) == degree + 1 and c[-1] == 1 for c in self.constituents)

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "constituents": [[str(x) for x in c] for c in self.constituents],
            "fitted_range": list(self.fitted_range),
            "threshold": self.threshold,
        }


def _trim(c: list[Fraction]) -> tuple[Fraction, ...]:
    while len(c) > 1 and c[-1] == 0:
        c = c[:-1]
    return tuple(c)


def fit(counts: dict[int, int], period: int, degree: int) -> QuasiPolynomial:
    """Fit a quasi-polynomial of the given degree to exact counts.

    Constituents are interpolated on the upper half of the sampled range and
    checked against every other sample there; the smallest divisor of
    ``period`` that works is used. Lower samples only determine the
    reported threshold.
    """
    qs = sorted(counts)
    lo, hi = qs[0], qs[-1]
    top = [q for q in qs if q > (lo + hi) // 2]
    for rho in sorted(d for d in range(1, period + 1) if period % d == 0):
        consts = []
        ok = True
        for k in range(1, rho + 1):
            cls = [q for q in top if (q - k) % rho == 0]
            if len(cls) < degree + 2:
                ok = False
                break
            xs = cls[: degree + 1]
            c = _interpolate(xs, [counts[q] for q in xs])
            if any(_peval(c, q) != counts[q] for q in cls):
                ok = False
                break
            consts.append(_trim(c))
        if not ok:
            if rho == period:
                raise FitError(f"counts on q in [{top[0]}, {hi}] are not a quasi-polynomial of period "
                               f"{period}; the stabilisation threshold may not be reached")
            continue
        qp = QuasiPolynomial(rho, tuple(consts), (top[0], hi))
        bad = [q for q in qs if qp(q) != counts[q]]
        thr = max(bad) + 1 if bad else lo
        return QuasiPolynomial(rho, tuple(consts), (top[0], hi), thr)
    raise FitError("no period found")  # unreachable


def characteristic_quasipolynomial(arr: IntegralArrangement, qmax: int | None = None) -> tuple[QuasiPolynomial, dict]:
    """Fit chi^quasi from exact counts; returns the fit and the counts used."""
    rho = period_candidate(arr)
    need = 2 * rho * (arr.ell + 2) + 2
    qmax = max(qmax or 0, need)
    counts = {q: count_complement(arr, q) for q in range(1, qmax + 1)}
    qp = fit(counts, rho, arr.ell)
    if not qp.is_monic(arr.ell):
        raise InvariantViolation("fitted constituents are not monic of degree l")
    return qp, counts


def ehrhart_alcove(rs: RootSystem, t: int) -> int:
    """#{m >= 0 : sum c_i m_i <= t}, the lattice points of the t-dilated closed fundamental alcove."""
    return _ehrhart_table(rs.marks, max(t, 0))[t] if t >= 0 else 0


@lru_cache(maxsize=64)
def _ehrhart_table(marks: tuple[int, ...], t: int) -> tuple[int, ...]:
    t = max(t, 64)
    ways = [1] + [0] * t
    for c in marks:
        for s in range(c, t + 1):
            ways[s] += ways[s - c]
    return tuple(itertools.accumulate(ways))


def series_counts(rs: RootSystem, E: Sequence[int], order: int) -> list[int]:
    """Coefficients of E(t) / prod_{i=0..l} (1 - t^{c_i}) up to t^order."""
    s = [0] * (order + 1)
    for i, a in enumerate(E):
        if i <= order:
            s[i] = a
    for c in (1,) + rs.marks:
        for q in range(c, order + 1):
            s[q] += s[q - c]
    return s


@dataclass
class IdentityReport:
    system: str
    subset: list
    eulerian: tuple[int, ...]
    qmax: int
    counts: dict[int, int]
    identity2_holds: bool
    identity2_first_failure: int | None
    identity3_holds: bool
    identity3_first_failure: int | None

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d["counts"] = {str(k): v for k, v in self.counts.items()}
        d["eulerian"] = list(self.eulerian)
        return d


def verify_identity(rs: RootSystem, sigma, qmax: int = 30) -> IdentityReport:
    """Compare counts with sum a_i L(q - i) and with the generating function."""
    from .rootsys import format_root

    ctx = context(rs)
    m = ctx.mask(sigma)
    arr = from_subset(rs, m)
    E = eulerian_polynomial(rs, m).coeffs
    counts = {q: count_complement(arr, q) for q in range(1, qmax + 1)}
    first2 = next((q for q in range(1, qmax + 1)
                   if counts[q] != sum(a * ehrhart_alcove(rs, q - i) for i, a in enumerate(E))), None)
    ser = series_counts(rs, E, qmax)
    first3 = next((q for q in range(1, qmax + 1) if counts[q] != ser[q]), None)
    return IdentityReport(str(rs), [format_root(b) for b in ctx.roots(m)], E, qmax, counts,
                          first2 is None, first2, first3 is None, first3)


class IdentitySweeper:
    """Identity (2) for many subsets of one system with shared L values."""

    def __init__(self, rs: RootSystem, qmax: int):
        self.rs, self.qmax = rs, qmax
        self.L = [ehrhart_alcove(rs, t) for t in range(qmax + 1)]

    def rhs(self, E: Sequence[int]) -> list[int]:
        return [sum(a * self.L[q - i] for i, a in enumerate(E) if q - i >= 0) for q in range(self.qmax + 1)]


# characteristic polynomial of a central arrangement -------------------------

def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = math.gcd(*v)
    v = [x // g for x in v]
    first = next(x for x in v if x)
    return tuple(-x for x in v) if first < 0 else tuple(v)


FLAT_GUARD = 500_000


def char_poly_central(forms: Iterable[Sequence[int]], dim: int | None = None) -> tuple[int, ...]:
    """Characteristic polynomial of a central arrangement, coefficients low to high.

    ``forms`` are integer (or rational, pre-scaled) normal vectors. Computed
    by the Moebius recursion over the intersection lattice, with flats
    represented by the set of hyperplanes containing them.
    """
    forms = [tuple(int(x) for x in f) for f in forms]
    if dim is None:
        if not forms:
            raise ValueError("dimension needed for an empty arrangement")
        dim = len(forms[0])
    hyps = sorted({_primitive(f) for f in forms})
    n = len(hyps)
    if n == 0:
        return tuple([0] * dim + [1])
    if dim > 6 or n > 200:
        raise GuardExceeded("char_poly_central supports rank <= 6 and <= 200 hyperplanes")
    F = np.array(hyps, dtype=np.int64)
    R = flint.fmpz_mat([list(h) for h in hyps]).rank()

    # flats of rank k: mask -> (basis rows, mu)
    layers: list[dict[int, tuple[list[int], int]]] = [{0: ([], 1)}]
    child: dict[int, dict[int, int]] = {}
    layers.append({1 << j: ([j], -1) for j in range(n)})
    coeff = [1, -n]
    total = 1 + n
    for k in range(2, R):
        cur: dict[int, tuple[list[int], int]] = {}
        for S, (basis, _) in layers[k - 1].items():
            cmap = child.setdefault(S, {})
            for j in range(n):
                if S >> j & 1 or j in cmap:
                    continue
                rows = [list(hyps[i]) for i in basis + [j]]
                N, nullity = flint.fmpz_mat(rows).nullspace()
                null = np.array([[int(N[r, c]) for c in range(nullity)] for r in range(dim)], dtype=np.int64)
                inside = np.all(F @ null == 0, axis=1)
                T = sum(1 << int(i) for i in np.nonzero(inside)[0])
                for i in np.nonzero(inside)[0]:
                    if not S >> int(i) & 1:
                        cmap[int(i)] = T
                if T not in cur:
                    cur[T] = (basis + [j], 0)
                    total += 1
                    if total > FLAT_GUARD:
                        raise GuardExceeded("too many flats")
        # Moebius values: mu(X) = -sum over Y < X of mu(Y)
        for T in cur:
            subs: list[set[int]] = [set(), {1 << j for j in _bits(T)}]
            for i in range(2, k):
                nxt = set()
                for Z in subs[i - 1]:
                    cm = child.get(Z, {})
                    for j in _bits(T & ~Z):
                        if j in cm:
                            nxt.add(cm[j])
                        else:
                            raise InvariantViolation("missing child flat")
                subs.append(nxt)
            s = 1 + sum(layers[i][Y][1] for i in range(1, k) for Y in subs[i])
            cur[T] = (cur[T][0], -s)
        layers.append(cur)
        coeff.append(sum(mu for _, mu in cur.values()))
    # the centre: chi(1) = 0 for a nonempty central arrangement
    coeff.append(-sum(coeff))
    poly = [0] * (dim + 1)
    for k, c in enumerate(coeff):
        poly[dim - k] = c
    return tuple(poly)


def _bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def cone_forms(arr: IntegralArrangement) -> list[tuple[int, ...]]:
    """Linear forms of the cone: x.C_j - b_j z, plus the hyperplane z = 0."""
    out = [tuple(c) + (-bj,) for c, bj in zip(arr.columns, arr.b)]
    out.append((0,) * arr.ell + (1,))
    return out


def poly_eval(coeffs: Sequence[int], t) -> int:
    return sum(c * t**i for i, c in enumerate(coeffs))


def poly_str(coeffs: Sequence, var: str = "t") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        if mono and c == 1:
            terms.append(mono)
        elif mono and c == -1:
            terms.append(f"-{mono}")
        else:
            terms.append(f"{c}{'*' if mono else ''}{mono}")
    return " + ".join(terms).replace("+ -", "- ") or "0"
