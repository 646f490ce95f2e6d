from __future__ import annotations

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from operadforge.koszul import egf, series_compose
from operadforge.presets import operad
from operadforge.species import (
    DimensionTable,
    block_sizes,
    restricted_growth_strings,
    species_compose_dims,
    xi_check,
)

BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140]
LIE2 = [1, 2, 9, 64]
COM = [1] * 8
LL2_SAMPLES = [(0, 0), (1, 0), (0, 1), (1, 1), (2, -3)]


def via_series(dimsA, dimsB, n) -> int:
    """Same count from the exponential formula (A∘B)(t) = A(B(t))."""
    out = series_compose(egf(dimsA, n), egf(dimsB, n), n)
    value = out[n] * factorial(n)
    assert value.denominator == 1
    return int(value)


@pytest.mark.parametrize("n", range(0, 9))
def test_rgs_count_is_bell(n):
    strings = list(restricted_growth_strings(n))
    assert len(strings) == BELL[n] == len(set(strings))
    for a in strings:
        assert all(a[i] <= max(a[:i], default=-1) + 1 for i in range(n))


def test_block_sizes():
    assert sorted(block_sizes((0, 1, 0, 2))) == [1, 1, 2]


def test_examples():
    assert species_compose_dims(COM, LIE2, 4) == 1 * 64 + 4 * 9 + 3 * 2 * 2 + 6 * 2 + 1 == 125
    assert species_compose_dims(COM, [1, 1, 2], 3) == 6
    assert species_compose_dims([5, 7, 11], [1, 0, 0], 3) == 11


def test_cap_and_missing_entries():
    with pytest.raises(ValueError):
        species_compose_dims([1] * 9, [1] * 9, 9)
    with pytest.raises(KeyError, match="arity 4"):
        species_compose_dims([1, 1, 1], [1, 1, 1, 1], 4)


def test_dimension_table():
    t = DimensionTable.from_list("lie2", LIE2)
    assert t[3] == 9 and t.to_json() == LIE2
    assert species_compose_dims(DimensionTable.from_list("com", COM), t, 4) == 125


@pytest.mark.parametrize("n,expected", [(2, 3), (3, 16), (4, 125), (5, 1296)])
def test_forest_count(n, expected):
    lie2 = [k ** (k - 1) for k in range(1, 6)]
    assert species_compose_dims(COM, lie2, n) == expected == (n + 1) ** (n - 1)


@given(st.integers(1, 6), st.lists(st.integers(0, 20), min_size=6, max_size=6),
       st.lists(st.integers(0, 20), min_size=6, max_size=6))
def test_matches_exponential_formula(n, a, b):
    assert species_compose_dims(a, b, n) == via_series(a, b, n)


@given(st.integers(1, 6), st.lists(st.integers(0, 20), min_size=6, max_size=6),
       st.lists(st.integers(0, 20), min_size=6, max_size=6))
def test_linear_in_first_argument(n, a, b):
    indicators = [[a[k] if k == j else 0 for k in range(6)] for j in range(6)]
    assert species_compose_dims(a, b, n) == sum(species_compose_dims(e, b, n) for e in indicators)


def test_xi_examples():
    hp = {"h1": Fraction(1), "h2": Fraction(1)}
    assert xi_check(operad("com"), operad("lie"), operad("poisson")).passed
    r = xi_check(operad("com"), operad("lie"), operad("lie"))
    assert (r.passed, r.composite_dim, r.target_dim) == (False, 24, 6)
    r = xi_check(operad("com"), operad("lie2"), operad("ll2"), hp)
    assert r.composite_dim == 125 and r.dims_b == LIE2
    assert r.to_json()["dim_AoB_4"] == 125


def test_xi_at_origin():
    assert xi_check(operad("com"), operad("lie2"), operad("ll2"), {"h1": 0, "h2": 0}).passed


def test_xi_with_ll2_at_one_one():
    r = xi_check(operad("com"), operad("lie2"), operad("ll2"), {"h1": 1, "h2": 1})
    assert r.passed, r.to_json()


def test_xi_invariant_across_samples():
    results = {s: xi_check(operad("com"), operad("lie2"), operad("ll2"), {"h1": s[0], "h2": s[1]}).passed
               for s in LL2_SAMPLES}
    assert len(set(results.values())) == 1, results
