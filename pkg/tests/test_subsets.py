import itertools

import pytest
from hypothesis import given, strategies as st

from worpitzky.alcoves import geometric_oracle
from worpitzky.errors import InvalidSubset
from worpitzky.flats import irreducible_rank2_flats
from worpitzky.rootsys import build
from worpitzky.subsets import (G2_COMPATIBLE_EXCEPTIONS, RootSubset, all_masks, census, check_g2_table,
                               classify, context, decomposition_witnesses, g2_compatible_exceptions,
                               g2_shi_exceptions, is_2loc_compatible, is_2loc_simple, is_coclosed,
                               is_compatible, is_ideal, is_neg_coclosed, random_masks, witness)

EXHAUSTIVE = ["A2", "B2", "G2", "A3", "B3", "C3"]
RANK4 = ["A4", "B4", "C4", "D4", "F4"]


# independent slow oracles --------------------------------------------------

def _decomps(rs, alpha):
    pos = rs.positive_roots
    h = sum(alpha)
    for b1, b2 in itertools.combinations(pos, 2):
        for d1 in range(1, h + 1):
            for d2 in range(1, h + 1):
                if tuple(d1 * x + d2 * y for x, y in zip(b1, b2)) == alpha:
                    yield b1, b2


def slow_coclosed(rs, sigma, negative):
    s = set(sigma)
    for a in s:
        for b1, b2 in _decomps(rs, a):
            if (not negative or rs.inner(b1, b2) < 0) and b1 not in s and b2 not in s:
                return False
    return True


def slow_ideal(rs, sigma):
    s = set(sigma)
    return all(b in s for a in s for b in rs.positive_roots if rs.leq(b, a))


def slow_2ls(rs, sigma):
    s = set(sigma)
    for X in irreducible_rank2_flats(rs):
        loc = s & set(X.roots)
        if loc and not loc & set(X.simple_system):
            return False
    return True


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3"])
def test_predicates_match_slow_oracles(name):
    rs = build(name)
    ctx = context(rs)
    for m in all_masks(rs):
        s = ctx.roots(m)
        assert ctx.is_ideal(m) == slow_ideal(rs, s)
        assert ctx.is_coclosed(m) == slow_coclosed(rs, s, False)
        assert ctx.is_neg_coclosed(m) == slow_coclosed(rs, s, True)
        assert ctx.is_2loc_simple(m) == slow_2ls(rs, s)


@pytest.mark.parametrize("name", RANK4)
def test_predicates_match_slow_oracles_sampled(name):
    rs = build(name)
    ctx = context(rs)
    for m in random_masks(rs, 40, seed=7):
        s = ctx.roots(m)
        assert ctx.is_neg_coclosed(m) == slow_coclosed(rs, s, True)
        assert ctx.is_2loc_simple(m) == slow_2ls(rs, s)


def test_ideal_examples():
    a2, g2 = build("A2"), build("G2")
    assert is_ideal(a2, []) and is_ideal(a2, a2.positive_roots)
    assert not is_ideal(a2, [(1, 1)])
    w = witness(a2, [(1, 1)], "ideal")
    assert w.kind == "poset" and w.alpha == (1, 1) and w.betas[0] in {(1, 0), (0, 1)}
    assert is_ideal(g2, [(1, 0), (0, 1), (1, 1)])


def test_coclosed_examples():
    b2 = build("B2")
    s = [(2, 1), (0, 1)]
    assert not is_coclosed(b2, s)
    w = witness(b2, s, "coclosed")
    assert w.alpha == (2, 1) and set(w.betas) == {(1, 0), (1, 1)}
    assert is_neg_coclosed(b2, s)
    assert is_coclosed(b2, [])


def test_neg_coclosed_f4_example():
    f4 = build("F4")
    s1 = [(0, 1, 0, 0), (0, 1, 2, 0)]
    s2 = s1 + [(1, 1, 1, 1)]
    assert is_neg_coclosed(f4, s1) and is_compatible(f4, s1)
    assert not is_neg_coclosed(f4, s2) and not is_compatible(f4, s2)
    ws = decomposition_witnesses(f4, s2)
    assert any(w.alpha == (1, 1, 1, 1) and set(w.betas) == {(1, 1, 0, 0), (0, 0, 1, 1)} and w.inner < 0
               for w in ws)


def test_two_local_examples():
    g2 = build("G2")
    assert is_2loc_simple(g2, [(1, 0), (3, 2)])
    assert not is_2loc_simple(build("A2"), [(1, 1)])
    assert is_2loc_simple(build("B3"), build("B3").positive_roots)
    assert is_2loc_compatible(g2, [(0, 1), (2, 1)])
    assert not is_2loc_compatible(g2, [(1, 1), (2, 1)])


def test_compatible_examples():
    for name in EXHAUSTIVE + RANK4:
        rs = build(name)
        assert is_compatible(rs, []) and is_compatible(rs, rs.positive_roots)
    g2 = build("G2")
    assert is_compatible(g2, [(0, 1), (3, 2)]) and not is_neg_coclosed(g2, [(0, 1), (3, 2)])
    assert not is_compatible(g2, [(1, 0), (3, 2)])


def test_g2_tables():
    co = g2_compatible_exceptions()
    assert len(co) == 7 and all((0, 1) in s for s in co)
    shi = g2_shi_exceptions()
    assert len(shi) == 4
    assert min(shi, key=len) == frozenset({(1, 0), (3, 2)})
    g2 = build("G2")
    assert all(is_2loc_simple(g2, s) for s in shi)
    assert not any(is_compatible(g2, s) for s in shi)


def test_g2_table_matches_geometry():
    check_g2_table(geometric_oracle(build("G2")))


@pytest.mark.parametrize("name", EXHAUSTIVE)
def test_chain_and_equivalence_exhaustive(name):
    rs = build(name)
    c = census(rs)
    assert c["chain_violations"] == [] and c["compatible_vs_2loc_mismatches"] == []
    geo = geometric_oracle(rs)
    ctx = context(rs)
    assert all(geo(m) == ctx.is_compatible(m) for m in all_masks(rs))


@pytest.mark.parametrize("name", RANK4)
def test_chain_sampled(name):
    rs = build(name)
    masks = random_masks(rs, 10_000, seed=11)
    c = census(rs, masks)
    assert c["subsets"] == 10_000
    assert c["chain_violations"] == [] and c["compatible_vs_2loc_mismatches"] == []


@pytest.mark.parametrize("name", ["A3", "A4", "D4"])
def test_simply_laced_collapse(name):
    rs = build(name)
    ctx = context(rs)
    assert all(ctx.is_coclosed(m) == ctx.is_neg_coclosed(m) for m in all_masks(rs))


def test_b2_and_g2_census_sizes():
    assert [set(x) for x in census(build("B2"))["nc_not_cc"]] == [{"[2,1]", "[0,1]"}]
    g2 = build("G2")
    ctx = context(g2)
    assert sum(ctx.is_compatible(m) and not ctx.is_neg_coclosed(m) for m in all_masks(g2)) == 7


def test_classify_report_and_witnesses():
    rep = classify(build("A2"), [(1, 1)])
    assert rep.flags == {"ideal": False, "coclosed": False, "neg_coclosed": False, "compatible": False,
                         "two_loc_compatible": False, "two_loc_simple": False}
    assert set(rep.witnesses) == set(rep.flags)
    js = rep.to_json()
    assert js["subset"] == ["[1,1]"] and js["witnesses"]["two_loc_simple"]["kind"] == "flat"
    assert rep.chain_violations() == []


def test_root_subset():
    rs = build("B2")
    s = RootSubset.of(rs, [(0, 1), (2, 1)])
    assert len(s) == 2 and (2, 1) in s and str(s) == "{[0,1], [2,1]}"
    assert set(s.complement()) == {(1, 0), (1, 1)}
    with pytest.raises(InvalidSubset):
        RootSubset.of(rs, [(1, 2)])


@st.composite
def subset_of(draw, names=("A2", "B2", "G2", "A3", "B3", "C3", "B4", "F4")):
    rs = build(draw(st.sampled_from(names)))
    return rs, draw(st.integers(0, (1 << rs.n_positive) - 1))


@given(subset_of())
def test_chain_property(args):
    rs, m = args
    assert classify(rs, m).chain_violations() == []


@given(subset_of())
def test_complement_of_closed_is_coclosed(args):
    rs, m = args
    ctx = context(rs)
    s = set(ctx.roots(m))
    closed = all(tuple(x + y for x, y in zip(a, b)) not in ctx.bit or tuple(x + y for x, y in zip(a, b)) in s
                 for a in s for b in s)
    if closed:
        assert ctx.is_coclosed(ctx.full ^ m)


@given(subset_of(("B3", "C3", "F4", "B4")))
def test_2loc_compatible_equals_compatible(args):
    rs, m = args
    assert is_2loc_compatible(rs, m) == is_compatible(rs, m)
