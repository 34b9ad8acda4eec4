import itertools
import math
from fractions import Fraction

import pytest

from worpitzky.alcoves import (CEILING, address_violation, alcove_svg, alcoves_in_P, complex_of,
                               describe_violation, face_ceiling_decomposition, face_ceiling_report,
                               geometric_compatibility_violation, geometric_compatible, rX_address,
                               rX_report, shifted_addresses, validate_address, worpitzky_partition_check)
from worpitzky.errors import InvariantViolation
from worpitzky.flats import irreducible_rank2_flats
from worpitzky.rootsys import build

RANK_LE_4 = ["A2", "B2", "G2", "A3", "B3", "C3", "B4", "D4", "F4"]


def _brute_addresses(rs):
    """Integer maps with r(alpha_i) = 1 and 1 <= r <= height satisfying the triple inequalities."""
    pos = rs.positive_roots
    ranges = [range(1, 2) if sum(b) == 1 else range(1, sum(b) + 1) for b in pos]
    return {r for r in itertools.product(*ranges) if address_violation(rs, r) is None}


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3", "B3", "C3"])
def test_addresses_match_inequality_brute_force(name):
    rs = build(name)
    assert set(complex_of(rs).addresses) == _brute_addresses(rs)


@pytest.mark.parametrize("name", RANK_LE_4)
def test_alcove_count_and_volume(name):
    rs = build(name)
    alcoves = alcoves_in_P(rs)
    assert len(alcoves) == rs.weyl_order // rs.index_of_connection
    ell = rs.rank
    total = Fraction(0)
    for A in alcoves:
        v0 = A.vertices[0]
        M = [[a - b for a, b in zip(v, v0)] for v in A.vertices[1:]]
        total += abs(_det(M)) / math.factorial(ell)
    assert total == 1


def _det(M):
    M = [row[:] for row in M]
    n, d = len(M), Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for r in range(c + 1, n):
            t = M[r][c] / M[c][c]
            M[r] = [a - t * b for a, b in zip(M[r], M[c])]
    return d


@pytest.mark.parametrize("name", RANK_LE_4)
def test_alcove_invariants(name):
    rs = build(name)
    top = tuple(Fraction(1) for _ in range(rs.rank))
    for A in alcoves_in_P(rs):
        assert validate_address(rs, A.address)
        bc = A.barycenter
        for g, r in zip(rs.positive_roots, A.address):
            val = sum(x * y for x, y in zip(g, bc))
            assert r - 1 < val < r and 1 <= r <= sum(g)
            assert math.ceil(val) == r
        for a in rs.simple_roots:
            assert A.r(a) == 1
        # each wall supports exactly ell vertices
        for k, w in enumerate(A.walls):
            on = [v for v in A.vertices if sum(x * y for x, y in zip(w.root, v)) == w.n]
            assert len(on) == rs.rank and A.vertices[k] not in on
            if w.kind == CEILING:
                assert w.n == A.r(w.root) >= 1
        # for full-support roots the top vertex is the only point of closure(P) on H(alpha, ht(alpha))
        for v in A.vertices:
            for g in rs.positive_roots:
                if all(g) and sum(x * y for x, y in zip(g, v)) == sum(g):
                    assert v == top


def test_validate_address_examples():
    a2 = build("A2")
    assert validate_address(a2, [1, 1, 1])
    assert not validate_address(a2, {(1, 0): 1, (0, 1): 1, (1, 1): 3})
    assert len(alcoves_in_P(build("G2"))) == 12
    assert len(alcoves_in_P(build("B2"))) == 4
    assert len(alcoves_in_P(a2)) == 2


@pytest.mark.parametrize("name,q", [("A2", 5), ("G2", 6), ("B2", 1), ("A3", 4), ("B3", 6), ("F4", 3)])
def test_partition(name, q):
    rep = worpitzky_partition_check(build(name), q)
    assert rep["ok"], rep["bad_points"]
    assert rep["points"] == q ** build(name).rank


def test_b2_single_point_lies_in_furthest_alcove():
    rs = build("B2")
    cx = complex_of(rs)
    top = [A for A in alcoves_in_P(rs) if {(w.root, w.n) for w in A.ceilings} == {((1, 0), 1), ((0, 1), 1)}]
    assert len(top) == 1
    assert worpitzky_partition_check(rs, 1)["ok"]
    assert (1, 1) in [tuple(int(x) for x in v) for v in top[0].vertices]


def test_upper_closure_reading_is_pinned():
    """Including floor points in the upper closures would double count the grid."""
    rs = build("A2")
    rep = worpitzky_partition_check(rs, 6)
    assert rep["ok"]


def test_geometric_examples():
    a2, g2 = build("A2"), build("G2")
    assert geometric_compatible(a2, [])
    c = geometric_compatibility_violation(a2, [(1, 1)])
    assert c is not None
    d = describe_violation(a2, c)
    assert d["alpha"] == "[1,1]" and d["face_vertices"] == [["1", "1"]]
    assert not geometric_compatible(g2, [(1, 0), (3, 2)])
    assert geometric_compatible(g2, [(0, 1), (3, 2)])


def test_face_ceiling_decomposition_examples():
    rs = build("A2")
    cx = complex_of(rs)
    far = cx.alcove(cx.index[(1, 1, 2)])
    assert face_ceiling_decomposition(far, (1, 1), 2) == {((1, 0), 1), ((0, 1), 1)}
    for A in alcoves_in_P(build("G2")):
        for w in A.ceilings:
            assert face_ceiling_decomposition(A, w.root, w.n) == {(w.root, w.n)}
    with pytest.raises(ValueError):
        face_ceiling_decomposition(cx.alcove(0), (1, 1), 2)


@pytest.mark.parametrize("name", RANK_LE_4)
def test_face_ceiling_invariant(name):
    rep = face_ceiling_report(build(name))
    assert rep["faces"] > 0 and rep["failures"] == []


def test_rx_type_a3_validates():
    rs = build("A3")
    rep = rX_report(rs)
    assert rep["flats"] == 4 and rep["failures"] == []
    X = next(X for X in irreducible_rank2_flats(rs) if set(X.simple_system) == {(1, 0, 0), (0, 1, 0)})
    r, r1, r2 = shifted_addresses(rs, X)
    assert all(r[a] == 1 for a in rs.simple_roots)
    assert validate_address(rs, r) and validate_address(rs, r1) and validate_address(rs, r2)
    assert {b for b in r if r[b] != r1[b]} == {X.simple_system[0]}


def test_rx_shift_counterexample_b3():
    """The shifted map r_1 can break the triple inequality (recorded as a known conflict)."""
    rs = build("B3")
    X = next(X for X in irreducible_rank2_flats(rs) if set(X.simple_system) == {(0, 1, 0), (1, 1, 2)})
    r, r1, r2 = shifted_addresses(rs, X)
    assert validate_address(rs, r)
    shifted = r1 if X.simple_system[0] == (0, 1, 0) else r2
    assert shifted[(0, 1, 0)] == 2 and shifted[(0, 1, 1)] == 1 and shifted[(0, 0, 1)] == 1
    assert address_violation(rs, shifted) is not None


def test_rx_ill_defined_in_f4():
    rs = build("F4")
    X = next(X for X in irreducible_rank2_flats(rs) if set(X.simple_system) == {(0, 0, 1, 0), (1, 2, 2, 1)})
    with pytest.raises(InvariantViolation):
        rX_address(rs, X)


def test_svg():
    svg = alcove_svg(build("G2"), [(1, 0), (3, 2)])
    assert svg.startswith("<svg") and svg.count("<polygon") >= 12
    with pytest.raises(ValueError):
        alcove_svg(build("A3"))
