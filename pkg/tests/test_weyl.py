import pytest
from hypothesis import given, settings, strategies as st

from worpitzky.alcoves import alcoves_in_P
from worpitzky.errors import GuardExceeded
from worpitzky.rootsys import build
from worpitzky.subsets import context
from worpitzky.weyl import descent, enumerate_weyl, eulerian_engine, eulerian_polynomial

SMALL = ["A2", "B2", "G2", "A3", "B3", "C3"]


def _matrix_group(rs):
    """Weyl group as integer matrices acting on simple-root coordinates, by closure."""
    ell = rs.rank
    gens = []
    for j in range(ell):
        cols = [rs.reflect(a, j) for a in rs.simple_roots]
        gens.append(tuple(tuple(c[i] for c in cols) for i in range(ell)))
    ident = tuple(tuple(int(i == j) for j in range(ell)) for i in range(ell))

    def mul(A, B):
        return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(ell)) for j in range(ell)) for i in range(ell))

    seen, todo = {ident}, [ident]
    while todo:
        M = todo.pop()
        for g in gens:
            N = mul(g, M)
            if N not in seen:
                seen.add(N)
                todo.append(N)
    return seen


def _apply(M, v):
    return tuple(sum(M[i][k] * v[k] for k in range(len(v))) for i in range(len(v)))


def _slow_eulerian(rs, sigma):
    sig = {tuple(b) for b in sigma}
    pos = set(rs.positive_roots)
    marks = (1,) + rs.marks
    simple = [tuple(-x for x in rs.highest_root)] + list(rs.simple_roots)
    h, f = rs.coxeter_number, rs.index_of_connection
    coeffs = [0] * (h + 1)
    for M in _matrix_group(rs):
        dsc = 0
        for c, a in zip(marks, simple):
            img = _apply(M, a)
            neg = tuple(-x for x in img)
            if neg in pos and neg not in sig:
                dsc += c
        coeffs[h - dsc] += 1
    assert all(c % f == 0 for c in coeffs)
    return tuple(c // f for c in coeffs)


@pytest.mark.parametrize("name,size", [("A2", 6), ("B2", 8), ("G2", 12), ("A3", 24), ("B3", 48), ("F4", 1152)])
def test_group_sizes(name, size):
    assert len(enumerate_weyl(build(name))) == size


@pytest.mark.parametrize("name", SMALL)
def test_matrices_match_closure_and_preserve_gram(name):
    rs = build(name)
    W = enumerate_weyl(rs)
    mats = {w.matrix() for w in W}
    assert mats == _matrix_group(rs)
    G = rs.gram
    for M in mats:
        for i in range(rs.rank):
            for j in range(rs.rank):
                ci = [row[i] for row in M]
                cj = [row[j] for row in M]
                val = sum(ci[a] * G[a][b] * cj[b] for a in range(rs.rank) for b in range(rs.rank))
                assert val == G[i][j]


def test_identity_descent():
    for name in SMALL:
        rs = build(name)
        e = next(w for w in enumerate_weyl(rs) if w.matrix() == tuple(
            tuple(int(i == j) for j in range(rs.rank)) for i in range(rs.rank)))
        # only alpha_0 = -theta is sent to a negative root
        assert descent(rs, e, []) == 1
        assert descent(rs, e, [rs.highest_root]) == 0


def test_a2_examples():
    rs = build("A2")
    assert eulerian_polynomial(rs, []).coeffs == (0, 1, 1, 0)
    assert eulerian_polynomial(rs, [(1, 0), (0, 1)]).coeffs == (0, 0, 1, 1)
    assert eulerian_polynomial(rs, [(1, 1)]).coeffs == (0, 1, 0, 1)
    assert str(eulerian_polynomial(rs, [(1, 1)])) == "t^3 + t"


@pytest.mark.parametrize("name", SMALL)
def test_engine_matches_slow_oracle(name):
    rs = build(name)
    ctx = context(rs)
    n = rs.n_positive
    masks = range(1 << n) if n <= 6 else [0, (1 << n) - 1] + [(0x5A5A5 * k) % (1 << n) for k in range(1, 20)]
    for m in masks:
        assert eulerian_polynomial(rs, m).coeffs == _slow_eulerian(rs, ctx.roots(m))


@pytest.mark.parametrize("name", SMALL + ["B4", "D4", "F4"])
def test_value_at_one_is_alcove_count(name):
    rs = build(name)
    n = rs.n_positive
    expected = rs.weyl_order // rs.index_of_connection
    assert expected == len(alcoves_in_P(rs))
    for m in (0, (1 << n) - 1, 1):
        E = eulerian_polynomial(rs, m)
        assert E(1) == expected
        assert min(E.coeffs) >= 0
        assert E.coeffs[0] == 0      # the extended simple roots cannot all go negative


def test_nonnegative_but_not_positive():
    E = eulerian_polynomial(build("A2"), [(1, 1)])
    assert min(E.coeffs) >= 0 and 0 in E.coeffs[1:E.degree]


def test_guard():
    with pytest.raises(GuardExceeded):
        enumerate_weyl(build("F4"), guard=100)


@settings(max_examples=40)
@given(st.sampled_from(["A3", "B3", "C3", "B4", "D4"]), st.integers(min_value=0))
def test_monotone_in_sigma(name, seed):
    """Adding roots to Sigma can only lower descents, so mass moves to higher powers."""
    rs = build(name)
    n = rs.n_positive
    m = seed % (1 << n)
    bit = 1 << (seed // (1 << n) % n)
    E1 = eulerian_engine(rs)(m & ~bit)
    E2 = eulerian_engine(rs)(m | bit)
    tail1 = [sum(E1[i:]) for i in range(len(E1))]
    tail2 = [sum(E2[i:]) for i in range(len(E2))]
    assert all(a <= b for a, b in zip(tail1, tail2))
    assert sum(E1) == sum(E2)
