import itertools

import numpy as np
import pytest

from worpitzky.flats import (flats_codim, in_simple_coords, irreducible_rank2_flats, localize,
                             span_closure)
from worpitzky.rootsys import build

SMALL = ["A2", "B2", "G2", "A3", "B3", "C3", "A4", "B4", "C4", "D4", "F4"]


def _brute_rank2_flats(rs):
    """Group positive roots by the plane spanned by a pair, using numpy ranks."""
    pos = rs.positive_roots
    seen = set()
    for u, v in itertools.combinations(pos, 2):
        M = np.array([u, v])
        if np.linalg.matrix_rank(M) < 2:
            continue
        key = frozenset(b for b in pos if np.linalg.matrix_rank(np.vstack([M, b])) == 2)
        seen.add(key)
    return seen


@pytest.mark.parametrize("name", SMALL)
def test_codim2_flats_match_brute_force(name):
    rs = build(name)
    fl = flats_codim(rs, 2)
    assert {frozenset(X.roots) for X in fl} == _brute_rank2_flats(rs)
    assert len({X.roots for X in fl}) == len(fl)


@pytest.mark.parametrize("name", SMALL)
def test_flat_invariants(name):
    rs = build(name)
    for p in range(1, rs.rank + 1):
        for X in flats_codim(rs, p):
            assert len(X.simple_system) == p
            assert np.linalg.matrix_rank(np.array(X.roots)) == p
            assert span_closure(rs, X.simple_system) == X.roots
            for b in X.roots:
                c = in_simple_coords(X, b)
                assert all(x >= 0 for x in c) or all(x <= 0 for x in c)


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "A4", "B4", "C4", "D4", "F4", "D5", "E6"])
def test_irreducible_rank2_types(name):
    rs = build(name)
    types = {X.cartan_type for X in irreducible_rank2_flats(rs)}
    assert types <= {"A2", "B2"}
    assert "G2" not in types


def test_documented_examples():
    a2 = build("A2")
    (X,) = flats_codim(a2, 2)
    assert X.cartan_type == "A2" and X.roots == a2.positive_roots
    a3 = build("A3")
    types = sorted(X.cartan_type for X in flats_codim(a3, 2))
    assert types == ["A1xA1"] * 3 + ["A2"] * 4
    X = next(X for X in flats_codim(a3, 2) if set(X.simple_system) == {(1, 0, 0), (0, 1, 0)})
    assert localize(X, [(1, 1, 0)]) == ((1, 1, 0),)
    assert localize(X, []) == ()
    g2 = build("G2")
    (Y,) = flats_codim(g2, 2)
    assert Y.cartan_type == "G2"
    assert localize(Y, [(1, 0), (3, 2)]) == ((1, 0), (3, 2))
    f4 = {X.cartan_type for X in irreducible_rank2_flats(build("F4"))}
    assert f4 == {"A2", "B2"}


@pytest.mark.parametrize("name", ["B3", "F4", "C4"])
def test_angle_signs_survive_localization(name):
    rs = build(name)
    for X in irreducible_rank2_flats(rs):
        for b1, b2 in itertools.combinations(X.roots, 2):
            c1, c2 = in_simple_coords(X, b1), in_simple_coords(X, b2)
            s1, s2 = X.simple_system
            local = sum(x * y * rs.inner(u, v) for x, u in zip(c1, (s1, s2)) for y, v in zip(c2, (s1, s2)))
            assert (local > 0) - (local < 0) == (rs.inner(b1, b2) > 0) - (rs.inner(b1, b2) < 0)


def test_json_descriptor():
    X = flats_codim(build("B2"), 2)[0]
    d = X.to_json()
    assert d["codim"] == 2 and d["type"] == "B2"
    assert set(d["simple_system"]) == {"[1,0]", "[0,1]"}


def test_bad_codim():
    with pytest.raises(ValueError):
        flats_codim(build("A2"), 3)
