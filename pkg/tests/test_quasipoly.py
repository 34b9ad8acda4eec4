import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from worpitzky.errors import FitError, GuardExceeded
from worpitzky.quasipoly import (IntegralArrangement, char_poly_central, characteristic_quasipolynomial,
                                 count_complement, ehrhart_alcove, fit, from_subset, period_candidate,
                                 poly_eval, poly_str, series_counts, shi_arrangement, subset_counts,
                                 verify_identity)
from worpitzky.rootsys import build
from worpitzky.subsets import context
from worpitzky.weyl import eulerian_polynomial


def _slow_count(arr, q):
    n = 0
    for z in itertools.product(range(q), repeat=arr.ell):
        if all((sum(a * b for a, b in zip(z, c)) - bj) % q for c, bj in zip(arr.columns, arr.b)):
            n += 1
    return n


def _slow_ehrhart(marks, t):
    """Lattice points of the dilated closed alcove: m_0 + sum c_i m_i = t, all m >= 0."""
    return sum(1 for m in itertools.product(*(range(t // c + 1) for c in marks)) if sum(
        c * x for c, x in zip(marks, m)) <= t)


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3"])
@pytest.mark.parametrize("k", [0, 1])
def test_counts_match_pure_python(name, k):
    rs = build(name)
    arr = shi_arrangement(rs, k) if k else from_subset(rs, rs.positive_roots)
    for q in range(1, 9 if rs.rank == 2 else 6):
        assert count_complement(arr, q) == _slow_count(arr, q)


def test_count_validation():
    arr = from_subset(build("A2"), [])
    assert count_complement(arr, 4) == 16
    with pytest.raises(ValueError):
        count_complement(arr, 0)
    with pytest.raises(GuardExceeded):
        count_complement(from_subset(build("F4"), []), 200)
    with pytest.raises(ValueError):
        IntegralArrangement(2, ((1, 0),), (0, 0))
    with pytest.raises(ValueError):
        IntegralArrangement(2, ((0, 0),), (0,))


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3", "B3"])
def test_ehrhart_against_brute_force(name):
    rs = build(name)
    for t in range(0, 9):
        assert ehrhart_alcove(rs, t) == _slow_ehrhart(rs.marks, t)
    assert ehrhart_alcove(rs, -1) == 0


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3"])
def test_subset_counts_vectorised(name):
    rs = build(name)
    ctx = context(rs)
    for q in (2, 3, 5):
        arr = subset_counts(rs, q)
        for m in range(0, 1 << rs.n_positive, max(1, (1 << rs.n_positive) // 40)):
            assert arr[m] == count_complement(from_subset(rs, ctx.roots(m)), q)


def test_char_poly_examples_and_primes():
    assert char_poly_central([(1, 0), (0, 1), (1, 1)]) == (2, -3, 1)
    assert char_poly_central([], 3) == (0, 0, 0, 1)
    # for large primes the central count equals chi(q)
    for name in ("A2", "B2", "G2", "A3", "B3"):
        rs = build(name)
        chi = char_poly_central(rs.positive_roots)
        arr = from_subset(rs, rs.positive_roots)
        for p in (11, 13):
            assert poly_eval(chi, p) == count_complement(arr, p)
    # B3 Weyl arrangement factors as (t-1)(t-3)(t-5)
    assert char_poly_central(build("B3").positive_roots) == (-15, 23, -9, 1)
    with pytest.raises(ValueError):
        char_poly_central([])


def test_fit_and_period():
    rs = build("B2")
    arr = from_subset(rs, rs.positive_roots)
    assert period_candidate(arr) == 2
    qp, counts = characteristic_quasipolynomial(arr)
    assert qp.period == 2 and qp.is_monic(2)
    assert qp.constituents == ((3, -4, 1), (4, -4, 1))
    assert all(qp(q) == c for q, c in counts.items())
    # G2 needs period 6
    g2 = build("G2")
    assert period_candidate(from_subset(g2, g2.positive_roots)) == 6
    # type A is always period 1
    assert period_candidate(from_subset(build("A3"), build("A3").positive_roots)) == 1


def test_fit_rejects_non_quasipolynomial():
    counts = {q: 2**q for q in range(1, 30)}
    with pytest.raises(FitError):
        fit(counts, 2, 2)


@pytest.mark.parametrize("name,k,threshold", [("A2", 1, 3), ("A2", 2, 6), ("B2", 1, 4), ("G2", 1, 6),
                                              ("G2", 2, 12), ("A3", 1, 4)])
def test_shi_counts(name, k, threshold):
    rs = build(name)
    h, ell = rs.coxeter_number, rs.rank
    assert k * h == threshold
    qp, counts = characteristic_quasipolynomial(shi_arrangement(rs, k), 2 * threshold)
    assert qp.period == 1
    expect = [Fraction(0)] * (ell + 1)
    for j in range(ell + 1):
        expect[j] = Fraction(comb(ell, j) * (-k * h) ** (ell - j))
    assert list(qp.constituents[0]) == expect
    assert qp.threshold == threshold
    assert all(counts[q] == 0 for q in range(1, threshold))


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3", "B3"])
def test_identities_on_compatible_subsets(name):
    rs = build(name)
    ctx = context(rs)
    step = max(1, (1 << rs.n_positive) // 50)
    for m in range(0, 1 << rs.n_positive, step):
        rep = verify_identity(rs, ctx.roots(m), 20)
        assert rep.identity2_holds == ctx.is_compatible(m)
        assert rep.identity3_holds == rep.identity2_holds


def test_identity_failure_example():
    rep = verify_identity(build("A2"), [(1, 1)], 10)
    assert not rep.identity2_holds and rep.identity2_first_failure == 1


def test_series_counts():
    rs = build("A2")
    E = eulerian_polynomial(rs, []).coeffs
    s = series_counts(rs, E, 10)
    arr = from_subset(rs, [])
    assert s[1:] == [count_complement(arr, q) for q in range(1, 11)]


def test_poly_str():
    assert poly_str((2, -3, 1)) == "t^2 - 3*t + 2"
    assert poly_str((0,)) == "0"


@settings(max_examples=25)
@given(st.sampled_from(["A2", "B2", "G2"]), st.integers(min_value=0, max_value=63), st.integers(2, 9))
def test_counts_monotone_in_subset(name, m, q):
    rs = build(name)
    n = rs.n_positive
    m %= 1 << n
    sub = m & (m >> 1)
    c_big = count_complement(from_subset(rs, context(rs).roots(m)), q)
    c_small = count_complement(from_subset(rs, context(rs).roots(sub)), q)
    assert c_big <= c_small <= q ** rs.rank
