from __future__ import annotations

from math import factorial

import pytest
from hypothesis import given, strategies as st

from operadforge.dsl import GeneratorSymbol, Symmetry
from operadforge.free import ArityError, FreeOperad, Signature, all_raw_trees, leaves

COMM = GeneratorSymbol("m", 2, Symmetry.SYM)
ANTI = GeneratorSymbol("l", 2, Symmetry.ANTI)
ANTI2 = GeneratorSymbol("p", 2, Symmetry.ANTI)
NONE = GeneratorSymbol("s", 2, Symmetry.NONE)

LIE = FreeOperad(Signature((ANTI,)))
COM = FreeOperad(Signature((COMM,)))
ASS = FreeOperad(Signature((NONE,)))
LL2 = FreeOperad(Signature((COMM, ANTI, ANTI2)))
MIXED = FreeOperad(Signature((NONE, ANTI)))


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def test_antisymmetric_swap():
    assert LIE.canonical_form((0, 2, 1)) == ((0, 1, 2), -1)


def test_symmetric_swap():
    assert COM.canonical_form((0, 2, 1)) == ((0, 1, 2), 1)


def test_nested_swap():
    # {[3,1],2} with l antisymmetric at both levels: inner swap only
    t, s = LIE.canonical_form((0, (0, 3, 1), 2))
    assert t == (0, (0, 1, 3), 2) and s == -1


def test_nested_swap_path_independent():
    # normalizing the outer vertex first or the inner first yields the same result
    raw = (0, 2, (0, 3, 1))
    direct = LIE.canonical_form(raw)
    outer_first = LIE.canonical_form((0, (0, 3, 1), 2))
    assert direct == (outer_first[0], -outer_first[1])


@pytest.mark.parametrize("free,n,expected", [
    (COM, 3, 3),
    (ASS, 3, 12),
    (LL2, 3, 27),
    (LL2, 4, 405),
    (LL2, 5, 8505),
])
def test_basis_sizes(free, n, expected):
    assert free.dimension(n) == expected


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_basis_size_formulas(n):
    assert ASS.dimension(n) == factorial(2 * n - 2) // factorial(n - 1)
    assert LL2.dimension(n) == 3 ** (n - 1) * double_factorial(2 * n - 3)


@pytest.mark.parametrize("free", [COM, LIE, ASS, LL2, MIXED])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_basis_matches_brute_force(free, n):
    seen = set()
    ng = len(free.signature.generators)
    for t in all_raw_trees(ng, range(1, n + 1)):
        c, s = free.canonical_form(t)
        seen.add(c)
    assert seen == set(free.basis(n))


def test_arity_cap():
    with pytest.raises(ArityError):
        LIE.basis(6)
    with pytest.raises(ArityError):
        LIE.basis(0)


def test_compose_examples():
    leaf = 1
    for t in LIE.basis(3):
        assert LIE.compose(t, 2, leaf) == (t, 1)
    assert LIE.compose((0, 1, 2), 1, (0, 1, 2)) == ((0, (0, 1, 2), 3), 1)
    # [1,2] o_2 (1.2) in a bracket-and-product signature
    free = FreeOperad(Signature((COMM, ANTI)))
    assert free.compose((1, 1, 2), 2, (0, 1, 2)) == ((1, 1, (0, 2, 3)), 1)
    with pytest.raises(IndexError):
        LIE.compose((0, 1, 2), 3, (0, 1, 2))


def test_action_examples():
    v = {(0, (0, 1, 2), 3): 1}
    assert LIE.act((1, 2, 3), v) == v
    assert LIE.act((2, 1), {(0, 1, 2): 1}) == {(0, 1, 2): -1}
    rotated = LIE.act((2, 3, 1), v)
    assert rotated == {(0, 1, (0, 2, 3)): -1}
    three = LIE.act((2, 3, 1), LIE.act((2, 3, 1), rotated))
    assert three == v
    with pytest.raises(ArityError):
        LIE.act((2, 1), v)


def test_format_and_signed():
    assert LL2.format((1, 1, (0, 2, 3))) == "l(1,m(2,3))"
    assert LL2.format_signed((1, 1, 2), -1) == "-l(1,2)"


# property tests ----------------------------------------------------------------

FREES = [LIE, COM, ASS, LL2, MIXED]


@st.composite
def free_and_monomial(draw, n_min=1, n_max=5):
    free = draw(st.sampled_from(FREES))
    n = draw(st.integers(n_min, n_max))
    basis = free.basis(n)
    return free, n, basis[draw(st.integers(0, len(basis) - 1))]


@st.composite
def combination(draw):
    free, n, _ = draw(free_and_monomial(2, 5))
    basis = free.basis(n)
    idx = draw(st.lists(st.integers(0, len(basis) - 1), min_size=1, max_size=4))
    v = {basis[i]: draw(st.integers(-3, 3)) for i in idx}
    return free, n, {t: c for t, c in v.items() if c}


@given(free_and_monomial())
def test_canonical_idempotent(args):
    free, n, t = args
    assert free.canonical_form(t) == (t, 1)
    assert sorted(leaves(t)) == list(range(1, n + 1))


@given(combination(), st.data())
def test_group_action(args, data):
    free, n, v = args
    sigma = data.draw(st.permutations(range(1, n + 1)))
    tau = data.draw(st.permutations(range(1, n + 1)))
    st_ = tuple(sigma[tau[j] - 1] for j in range(n))
    assert free.act(st_, v) == free.act(sigma, free.act(tau, v))


@given(st.data())
def test_sequential_composition_axiom(data):
    free = data.draw(st.sampled_from(FREES))
    k, m, r = (data.draw(st.integers(1, 3)) for _ in range(3))
    x = data.draw(st.sampled_from(free.basis(k)))
    y = data.draw(st.sampled_from(free.basis(m)))
    z = data.draw(st.sampled_from(free.basis(r)))
    i = data.draw(st.integers(1, k))
    j = data.draw(st.integers(1, m))
    xy, s1 = free.compose(x, i, y)
    lhs, s2 = free.compose(xy, i + j - 1, z)
    yz, s3 = free.compose(y, j, z)
    rhs, s4 = free.compose(x, i, yz)
    assert (lhs, s1 * s2) == (rhs, s3 * s4)


@given(st.data())
def test_parallel_composition_axiom(data):
    free = data.draw(st.sampled_from(FREES))
    k = data.draw(st.integers(2, 3))
    m, r = data.draw(st.integers(1, 2)), data.draw(st.integers(1, 2))
    x = data.draw(st.sampled_from(free.basis(k)))
    y = data.draw(st.sampled_from(free.basis(m)))
    z = data.draw(st.sampled_from(free.basis(r)))
    i = data.draw(st.integers(1, k - 1))
    j = data.draw(st.integers(i + 1, k))
    xy, s1 = free.compose(x, i, y)
    lhs, s2 = free.compose(xy, j + m - 1, z)
    xz, s3 = free.compose(x, j, z)
    rhs, s4 = free.compose(xz, i, y)
    assert (lhs, s1 * s2) == (rhs, s3 * s4)


@given(combination(), st.data())
def test_action_is_linear_and_preserves_basis(args, data):
    free, n, v = args
    sigma = data.draw(st.permutations(range(1, n + 1)))
    out = free.act(sigma, v)
    assert set(out) <= set(free.basis(n))
    doubled = free.act(sigma, {t: 2 * c for t, c in v.items()})
    assert doubled == {t: 2 * c for t, c in out.items()}


def test_vector_round_trip():
    v = {(1, 2, 1): 3, (0, 1, 2): 1}
    vec = LL2.to_vector(v, 2)
    back = LL2.from_vector(vec, 2)
    assert back == {(1, 1, 2): -3, (0, 1, 2): 1}
