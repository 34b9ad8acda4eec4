"""Predicates on subsets of positive roots.

Subsets are handled internally as bitmasks over ``rs.positive_roots`` so
that exhaustive sweeps stay cheap; the public functions accept any
iterable of roots (or a :class:`RootSubset`).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import InvalidSubset, InvariantViolation
from .flats import irreducible_rank2_flats
from .rootsys import Root, RootSystem, format_root

A1, A2_ = (1, 0), (0, 1)

# {alpha_2} u S for nonempty S of these three roots
_G2_CO_EXTRA = ((2, 1), (3, 1), (3, 2))
# {alpha_1, 3alpha_1+2alpha_2} u S for any S of these two roots
_G2_SHI_EXTRA = ((1, 1), (2, 1))


def _powerset(items):
    items = list(items)
    for m in range(1 << len(items)):
        yield frozenset(items[i] for i in range(len(items)) if m >> i & 1)


G2_COMPATIBLE_EXCEPTIONS: tuple[frozenset, ...] = tuple(
    frozenset({A2_}) | s for s in _powerset(_G2_CO_EXTRA) if s
)
G2_SHI_EXCEPTIONS: tuple[frozenset, ...] = tuple(
    frozenset({A1, (3, 2)}) | s for s in _powerset(_G2_SHI_EXTRA)
)


def g2_compatible_exceptions() -> list[frozenset]:
    """The seven compatible subsets of G2 that are not negatively coclosed."""
    return list(G2_COMPATIBLE_EXCEPTIONS)


def g2_shi_exceptions() -> list[frozenset]:
    """The four Shi-free subsets of G2 that are not compatible."""
    return list(G2_SHI_EXCEPTIONS)


@dataclass(frozen=True)
class Witness:
    """Why a predicate failed.

    ``kind`` is "poset" (alpha >= beta, alpha in Sigma, beta not),
    "decomposition" (alpha = d1 beta1 + d2 beta2 with both betas outside
    Sigma) or "flat" (a rank-2 localization that breaks the rule).
    """

    kind: str
    alpha: Root | None = None
    betas: tuple[Root, ...] = ()
    coeffs: tuple[int, ...] = ()
    inner: int | None = None
    flat: tuple[Root, ...] = ()
    localized: tuple[Root, ...] = ()

    def __str__(self):
        if self.kind == "poset":
            return f"{format_root(self.alpha)} in Sigma but {format_root(self.betas[0])} <= it is not"
        if self.kind == "decomposition":
            (b1, b2), (d1, d2) = self.betas, self.coeffs
            return (f"{format_root(self.alpha)} = {d1}*{format_root(b1)} + {d2}*{format_root(b2)}, "
                    f"neither in Sigma, inner product {self.inner}")
        return (f"flat with simple roots {', '.join(map(format_root, self.flat))}: "
                f"Sigma_X = {{{', '.join(map(format_root, self.localized))}}}")

    def to_json(self) -> dict:
        d = {"kind": self.kind, "text": str(self)}
        if self.alpha is not None:
            d["alpha"] = format_root(self.alpha)
        if self.betas:
            d["betas"] = [format_root(b) for b in self.betas]
        if self.coeffs:
            d["coeffs"] = list(self.coeffs)
        if self.inner is not None:
            d["inner"] = self.inner
        if self.flat:
            d["flat_simple_system"] = [format_root(b) for b in self.flat]
            d["localized"] = [format_root(b) for b in self.localized]
        return d


class SubsetContext:
    """Per-root-system tables for the bitmask predicates."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        pos = rs.positive_roots
        n = self.n = len(pos)
        self.full = (1 << n) - 1
        self.bit = {b: 1 << i for i, b in enumerate(pos)}
        # below[i]: mask of roots strictly below pos[i]
        self.below = [sum(self.bit[b] for b in pos if b != a and rs.leq(b, a)) for a in pos]
        # decomps[i]: (pair_mask, b1, b2, d1, d2, inner) for pos[i] = d1 b1 + d2 b2, b1 != b2
        self.decomps: list[list[tuple]] = [[] for _ in range(n)]
        hmax = max(sum(b) for b in pos)
        for i, b1 in enumerate(pos):
            for j in range(i + 1, n):
                b2 = pos[j]
                ip = rs.inner(b1, b2)
                h1, h2 = sum(b1), sum(b2)
                for d1 in range(1, hmax // h1 + 1):
                    for d2 in range(1, (hmax - d1 * h1) // h2 + 1):
                        v = tuple(d1 * x + d2 * y for x, y in zip(b1, b2))
                        if v in self.bit:
                            k = self.bit[v].bit_length() - 1
                            self.decomps[k].append((self.bit[b1] | self.bit[b2], b1, b2, d1, d2, ip))
        self.cc_pairs = [[d[0] for d in ds] for ds in self.decomps]
        self.nc_pairs = [[d[0] for d in ds if d[5] < 0] for ds in self.decomps]
        self.flats = [
            (sum(self.bit[b] for b in X.roots), sum(self.bit[b] for b in X.simple_system), X)
            for X in irreducible_rank2_flats(rs)
        ]
        self.is_g2 = str(rs.type) == "G2"
        if self.is_g2:
            self.g2_co_masks = {self.mask(s) for s in G2_COMPATIBLE_EXCEPTIONS}
            self.g2_shi_masks = {self.mask(s) for s in G2_SHI_EXCEPTIONS}

    def mask(self, sigma) -> int:
        if isinstance(sigma, int):
            return sigma
        if isinstance(sigma, RootSubset):
            sigma = sigma.members
        m = 0
        for b in sigma:
            b = tuple(b)
            if b not in self.bit:
                raise InvalidSubset(f"{format_root(b)} is not a positive root of {self.rs}")
            m |= self.bit[b]
        return m

    def roots(self, mask: int) -> tuple[Root, ...]:
        return tuple(b for i, b in enumerate(self.rs.positive_roots) if mask >> i & 1)

    # each *_violation returns None when the predicate holds
    def ideal_violation(self, m: int):
        pos = self.rs.positive_roots
        for i in _bits(m):
            miss = self.below[i] & ~m
            if miss:
                return Witness("poset", pos[i], (pos[(miss & -miss).bit_length() - 1],))
        return None

    def decomposition_violations(self, m: int, negative: bool) -> Iterator[Witness]:
        pos = self.rs.positive_roots
        for i in _bits(m):
            for pm, b1, b2, d1, d2, ip in self.decomps[i]:
                if not (pm & m) and (ip < 0 or not negative):
                    yield Witness("decomposition", pos[i], (b1, b2), (d1, d2), ip)

    def _decomp_violation(self, m: int, negative: bool):
        return next(self.decomposition_violations(m, negative), None)

    def coclosed_violation(self, m: int):
        return self._decomp_violation(m, False)

    def neg_coclosed_violation(self, m: int):
        return self._decomp_violation(m, True)

    def is_ideal(self, m: int) -> bool:
        return all(not (self.below[i] & ~m) for i in _bits(m))

    def is_coclosed(self, m: int) -> bool:
        return all(pm & m for i in _bits(m) for pm in self.cc_pairs[i])

    def is_neg_coclosed(self, m: int) -> bool:
        return all(pm & m for i in _bits(m) for pm in self.nc_pairs[i])

    def two_loc_simple_violation(self, m: int):
        for fm, sm, X in self.flats:
            if m & fm and not m & sm:
                return Witness("flat", flat=X.simple_system, localized=self.roots(m & fm))
        return None

    def is_2loc_simple(self, m: int) -> bool:
        return all(not (m & fm) or m & sm for fm, sm, _ in self.flats)

    def two_loc_compatible_violation(self, m: int):
        if self.is_g2:
            # the only irreducible rank-2 flat is G2 itself
            if self.is_neg_coclosed(m) or m in self.g2_co_masks:
                return None
            X = self.flats[0][2]
            return Witness("flat", flat=X.simple_system, localized=self.roots(m))
        return self.two_loc_simple_violation(m)

    def is_2loc_compatible(self, m: int) -> bool:
        return self.two_loc_compatible_violation(m) is None

    def is_compatible(self, m: int) -> bool:
        if self.is_neg_coclosed(m):
            return True
        return self.is_g2 and m in self.g2_co_masks

    def compatible_violation(self, m: int):
        if self.is_compatible(m):
            return None
        return self.neg_coclosed_violation(m)

    def is_g2_shi_exception(self, m: int) -> bool:
        return self.is_g2 and m in self.g2_shi_masks


def _bits(m: int) -> Iterator[int]:
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


@lru_cache(maxsize=None)
def context(rs: RootSystem) -> SubsetContext:
    return SubsetContext(rs)


@dataclass(frozen=True)
class RootSubset:
    rs: RootSystem
    members: tuple[Root, ...]

    @classmethod
    def of(cls, rs: RootSystem, roots: Iterable) -> "RootSubset":
        ctx = context(rs)
        return cls(rs, ctx.roots(ctx.mask(list(roots))))

    @classmethod
    def from_mask(cls, rs: RootSystem, mask: int) -> "RootSubset":
        return cls(rs, context(rs).roots(mask))

    @property
    def mask(self) -> int:
        return context(self.rs).mask(self.members)

    def complement(self) -> "RootSubset":
        ctx = context(self.rs)
        return RootSubset.from_mask(self.rs, ctx.full & ~self.mask)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, b):
        return tuple(b) in self.members

    def __str__(self):
        return "{" + ", ".join(format_root(b) for b in self.members) + "}"


@dataclass
class PropertyReport:
    rs: RootSystem
    members: tuple[Root, ...]
    flags: dict[str, bool]
    witnesses: dict[str, Witness] = field(default_factory=dict)

    CHAIN = ("ideal", "coclosed", "neg_coclosed", "compatible", "two_loc_simple")

    def chain_violations(self) -> list[tuple[str, str]]:
        """Pairs (a, b) of consecutive chain properties with a true and b false."""
        f = self.flags
        return [(a, b) for a, b in zip(self.CHAIN, self.CHAIN[1:]) if f[a] and not f[b]]

    def to_json(self) -> dict:
        return {
            "system": str(self.rs),
            "subset": [format_root(b) for b in self.members],
            "flags": dict(self.flags),
            "witnesses": {k: w.to_json() for k, w in self.witnesses.items()},
        }


def _ctx_mask(rs, sigma):
    ctx = context(rs)
    return ctx, ctx.mask(sigma)


def is_ideal(rs: RootSystem, sigma) -> bool:
    ctx, m = _ctx_mask(rs, sigma)
    return ctx.is_ideal(m)


def is_coclosed(rs: RootSystem, sigma) -> bool:
    ctx, m = _ctx_mask(rs, sigma)
    return ctx.is_coclosed(m)


def is_neg_coclosed(rs: RootSystem, sigma) -> bool:
    ctx, m = _ctx_mask(rs, sigma)
    return ctx.is_neg_coclosed(m)


def is_2loc_simple(rs: RootSystem, sigma) -> bool:
    ctx, m = _ctx_mask(rs, sigma)
    return ctx.is_2loc_simple(m)


def is_2loc_compatible(rs: RootSystem, sigma) -> bool:
    ctx, m = _ctx_mask(rs, sigma)
    return ctx.is_2loc_compatible(m)


def is_compatible(rs: RootSystem, sigma) -> bool:
    ctx, m = _ctx_mask(rs, sigma)
    return ctx.is_compatible(m)


def witness(rs: RootSystem, sigma, prop: str) -> Witness | None:
    """A violation witness for ``prop`` or None if it holds."""
    ctx, m = _ctx_mask(rs, sigma)
    fn = {
        "ideal": ctx.ideal_violation,
        "coclosed": ctx.coclosed_violation,
        "neg_coclosed": ctx.neg_coclosed_violation,
        "two_loc_simple": ctx.two_loc_simple_violation,
        "two_loc_compatible": ctx.two_loc_compatible_violation,
        "compatible": ctx.compatible_violation,
    }[prop]
    return fn(m)


def decomposition_witnesses(rs: RootSystem, sigma, negative: bool = True) -> list[Witness]:
    """Every decomposition of a member of sigma with neither part in sigma."""
    ctx, m = _ctx_mask(rs, sigma)
    return list(ctx.decomposition_violations(m, negative))


def classify(rs: RootSystem, sigma) -> PropertyReport:
    ctx, m = _ctx_mask(rs, sigma)
    flags = {
        "ideal": ctx.is_ideal(m),
        "coclosed": ctx.is_coclosed(m),
        "neg_coclosed": ctx.is_neg_coclosed(m),
        "compatible": ctx.is_compatible(m),
        "two_loc_compatible": ctx.is_2loc_compatible(m),
        "two_loc_simple": ctx.is_2loc_simple(m),
    }
    wits = {k: witness(rs, m, k) for k, v in flags.items() if not v}
    return PropertyReport(rs, ctx.roots(m), flags, {k: w for k, w in wits.items() if w is not None})


def all_masks(rs: RootSystem) -> range:
    return range(1 << rs.n_positive)


def random_masks(rs: RootSystem, count: int, seed: int = 0) -> list[int]:
    rng = random.Random(seed)
    n = rs.n_positive
    return [rng.getrandbits(n) for _ in range(count)]


def census(rs: RootSystem, masks: Iterable[int] | None = None) -> dict:
    """Counts per property plus any chain violations over the given subsets."""
    ctx = context(rs)
    masks = all_masks(rs) if masks is None else masks
    keys = ("ideal", "coclosed", "neg_coclosed", "compatible", "two_loc_compatible", "two_loc_simple")
    counts = dict.fromkeys(keys, 0)
    chain_bad, mismatch, total, nc_not_cc = [], [], 0, []
    for m in masks:
        total += 1
        f = (ctx.is_ideal(m), ctx.is_coclosed(m), ctx.is_neg_coclosed(m), ctx.is_compatible(m),
             ctx.is_2loc_compatible(m), ctx.is_2loc_simple(m))
        for k, v in zip(keys, f):
            counts[k] += v
        chain = (f[0], f[1], f[2], f[3], f[5])
        if any(a and not b for a, b in zip(chain, chain[1:])):
            chain_bad.append(m)
        if f[2] and not f[1]:
            nc_not_cc.append(m)
        if f[3] != f[4]:
            mismatch.append(m)
    return {
        "system": str(rs),
        "subsets": total,
        "counts": counts,
        "nc_not_cc": [[format_root(b) for b in ctx.roots(m)] for m in nc_not_cc],
        "chain_violations": [[format_root(b) for b in ctx.roots(m)] for m in chain_bad],
        "compatible_vs_2loc_mismatches": [[format_root(b) for b in ctx.roots(m)] for m in mismatch],
    }


def check_g2_table(geometric) -> None:
    """Cross-check the hard-coded G2 exception table against a predicate.

    ``geometric(mask) -> bool`` must decide compatibility independently.
    """
    from .rootsys import build

    ctx = context(build("G2"))
    found = {m for m in all_masks(ctx.rs) if geometric(m) and not ctx.is_neg_coclosed(m)}
    if found != ctx.g2_co_masks:
        raise InvariantViolation("G2 compatibility exception table disagrees with the geometric oracle")
