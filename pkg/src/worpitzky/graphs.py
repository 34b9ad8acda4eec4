"""Simple graphs as subsets of type A positive roots, and the interval-graph sweep."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import networkx as nx

from .errors import GuardExceeded, InvariantViolation
from .freeness import free_shi_subset, subset_free
from .rootsys import RootSystem, build
from .subsets import context

ORDERING_GUARD = 10


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: frozenset[tuple[int, int]]     # pairs (i, j), 1 <= i < j <= n

    @classmethod
    def of(cls, n: int, edges) -> "SimpleGraph":
        es = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge {u}-{v} outside 1..{n}")
            e = (min(u, v), max(u, v))
            if e in es:
                raise ValueError(f"repeated edge {e[0]}-{e[1]}")
            es.add(e)
        return cls(n, frozenset(es))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "SimpleGraph":
        """Edge list such as "1-2,2-3"."""
        pairs = []
        for tok in filter(None, (t.strip() for t in text.split(","))):
            u, v = tok.split("-")
            pairs.append((int(u), int(v)))
        if n is None:
            n = max((max(p) for p in pairs), default=0)
        return cls.of(n, pairs)

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def relabel(self, labeling) -> "SimpleGraph":
        """Vertex v becomes labeling[v - 1]."""
        if sorted(labeling) != list(range(1, self.n + 1)):
            raise ValueError("labeling is not a permutation of 1..n")
        return SimpleGraph.of(self.n, [(labeling[u - 1], labeling[v - 1]) for u, v in self.edges])

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(1, self.n + 1))
        G.add_edges_from(self.edges)
        return G

    def __str__(self):
        return ",".join(f"{u}-{v}" for u, v in sorted(self.edges))


@lru_cache(maxsize=None)
def type_a(n: int) -> RootSystem:
    return build("A", n - 1)


def edge_root(n: int, i: int, j: int) -> tuple[int, ...]:
    """eps_i - eps_j = alpha_i + ... + alpha_{j-1} in simple-root coordinates."""
    return tuple(int(i <= k + 1 < j) for k in range(n - 1))


def sigma_of(G: SimpleGraph, labeling=None) -> list[tuple[int, ...]]:
    H = G if labeling is None else G.relabel(labeling)
    return [edge_root(G.n, i, j) for i, j in sorted(H.edges)]


def graph_of_mask(n: int, mask: int) -> SimpleGraph:
    rs = type_a(n)
    edges = []
    for b in context(rs).roots(mask):
        i = next(k for k, x in enumerate(b) if x) + 1
        edges.append((i, i + sum(b)))
    return SimpleGraph.of(n, edges)


def is_interval_ordering(G: SimpleGraph, order) -> bool:
    pos = {v: k for k, v in enumerate(order)}
    seq = list(order)
    for a in range(G.n):
        for b in range(a + 2, G.n):
            if G.adjacent(seq[a], seq[b]):
                for c in range(a + 1, b):
                    if not G.adjacent(seq[a], seq[c]):
                        return False
    return len(pos) == G.n


def has_interval_ordering(G: SimpleGraph) -> tuple[bool, tuple[int, ...] | None]:
    """Brute force over vertex orderings."""
    if G.n > ORDERING_GUARD:
        raise GuardExceeded(f"{G.n} vertices exceed the ordering guard {ORDERING_GUARD}")
    for order in itertools.permutations(range(1, G.n + 1)):
        if is_interval_ordering(G, order):
            return True, order
    return False, None


def all_graphs(n: int):
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for bits in range(1 << len(pairs)):
        yield SimpleGraph.of(n, [p for k, p in enumerate(pairs) if bits >> k & 1])


class _MaskData:
    """Per-subset verdicts for type A_{n-1}; every labeled graph is one subset."""

    def __init__(self, n: int, saito_k: tuple[int, ...] = ()):
        self.n = n
        self.rs = type_a(n)
        self.ctx = context(self.rs)
        self.saito_k = saito_k
        self._cache: dict[int, dict] = {}

    def __call__(self, mask: int) -> dict:
        if mask not in self._cache:
            ctx = self.ctx
            free = subset_free(self.rs, mask).free
            d = {
                "free": free,
                "compatible": ctx.is_compatible(mask),
                "2ls": ctx.is_2loc_simple(mask),
                "coclosed": ctx.is_coclosed(mask),
                "neg_coclosed": ctx.is_neg_coclosed(mask),
            }
            d["shi_free_predicate"] = d["free"] and d["2ls"]
            if self.saito_k:
                d["shi_free_saito"] = all(free_shi_subset(self.rs, mask, k).free for k in self.saito_k)
            self._cache[mask] = d
        return self._cache[mask]


def verify_corollary(n: int, saito_k: tuple[int, ...] | None = None) -> dict:
    """Interval graphs against Shi-free and compatible-and-free labelings, for all graphs on n vertices.

    Shi-freeness of a labeling is read as 'free and 2-locally simple'; with
    ``saito_k`` (default (1,) for n <= 4) it is also decided directly on the
    cones of S^k_Sigma and the two readings must agree.
    """
    if saito_k is None:
        saito_k = (1,) if n <= 4 else ()
    data = _MaskData(n, tuple(saito_k))
    ctx = data.ctx
    failures = []
    counts = {"graphs": 0, "interval": 0}
    for G in all_graphs(n):
        counts["graphs"] += 1
        shi_free = compat_free = False
        for lab in itertools.permutations(range(1, n + 1)):
            m = ctx.mask(sigma_of(G, lab))
            d = data(m)
            if not (d["coclosed"] == d["neg_coclosed"] == d["compatible"]):
                raise InvariantViolation(f"type A collapse fails for {G} under {lab}")
            if d["free"] != nx.is_chordal(graph_of_mask(n, m).to_networkx()):
                raise InvariantViolation(f"freeness disagrees with chordality for {G}")
            if "shi_free_saito" in d and d["shi_free_saito"] != d["shi_free_predicate"]:
                raise InvariantViolation(f"Saito Shi-freeness disagrees with the predicate for {G} under {lab}")
            shi_free |= d["shi_free_predicate"]
            compat_free |= d["compatible"] and d["free"]
            if shi_free and compat_free:
                break
        interval, _ = has_interval_ordering(G)
        counts["interval"] += interval
        if not (shi_free == compat_free == interval):
            failures.append({"graph": str(G), "shi_free": shi_free, "compatible_free": compat_free,
                             "interval": interval})
    return {"n": n, **counts, "subsets_checked": len(data._cache), "saito_k": list(saito_k),
            "failures": failures, "ok": not failures}
