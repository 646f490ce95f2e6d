from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from operadforge.cooperad import (
    CocompositionMap,
    Factor,
    LabelError,
    TensorPolynomial,
    build_gv2,
    coassociativity_check,
    dim_match_operad,
    gv2_basis,
    label_set,
    rho_image,
    rho_well_defined,
)
from operadforge.groebner import poly_mul

ONE = {"h1": Fraction(1), "h2": Fraction(1)}
ODD = {"h1": Fraction(2), "h2": Fraction(-3)}
SAMPLES = [{"h1": Fraction(a), "h2": Fraction(b)} for a, b in [(0, 0), (1, 0), (0, 1), (1, 1), (2, -3)]]


def splits(max_total: int):
    for total in range(2, max_total + 1):
        labels = tuple(range(1, total + 1))
        for a in range(1, total):
            for I in itertools.combinations(labels, a):
                J = tuple(x for x in labels if x not in I)
                yield I, J


def generator_image(rho, letter, i, j):
    k, letter, a, b = rho.target_generator(letter, i, j)
    return TensorPolynomial.in_factor(rho.targets, k, rho.targets[k].generator(letter, a, b, rho.params))


# examples --------------------------------------------------------------------


def test_label_sets():
    assert label_set([2, "*", 1]) == (1, 2, "*")
    with pytest.raises(LabelError):
        label_set([1, 1])
    with pytest.raises(LabelError):
        label_set([])


def test_essential_variables():
    assert len(Factor.of((1, 2)).essential()) == 2
    star = Factor.of((1, "*"))
    assert star.order.variables == ("x_1_star", "y_1_star")
    assert len(build_gv2((1, 2, 3)).variables) == 6


def test_gv2_basis_label_invariant():
    a = gv2_basis((1, 2), ONE)
    b = gv2_basis((1, "*"), ONE)
    assert a.dimension() == b.dimension()
    assert len(a) == len(b)


def test_rho_on_generators():
    rho = CocompositionMap((1,), (2,), ONE)
    assert rho.image_of_generator("x", 1, 2).format() == "(x_1_star ⊗ 1)"
    # y21 -> y*1 = h2 - y1*
    assert rho.image_of_generator("y", 2, 1).format() == "- (y_1_star ⊗ 1) + (1 ⊗ 1)"
    rho = CocompositionMap((1,), (2, 3), ONE)
    assert rho.image_of_generator("x", 2, 3).format() == "(1 ⊗ x23)"


def test_rho_sends_relation_to_zero():
    rho = CocompositionMap((1,), (2, 3), ONE)
    img = rho_image(rho, "x12*x23 + h1*x13 - x12*x13 - x23*x13")
    assert img.format() == "- (x_1_star^2 ⊗ 1) + (x_1_star ⊗ 1)"
    assert img.normal_form(rho.bases()).is_zero()


def test_symmetry_relation_maps_to_zero():
    rho = CocompositionMap((1,), (2, 3), ODD)
    t = rho.image_of_generator("x", 2, 3) + rho.image_of_generator("x", 3, 2)
    t = t - TensorPolynomial.one(rho.targets).scale(ODD["h1"])
    assert t.is_zero()


def test_rho_rejects_outside_variables():
    rho = CocompositionMap((1,), (2,), ONE)
    with pytest.raises(LabelError):
        rho_image(rho, "x12 + x34")


@pytest.mark.parametrize("I,J", [((), (1, 2)), ((1,), ()), ((1,), (1, 2)), (("*",), (1,))])
def test_bad_blocks(I, J):
    with pytest.raises(LabelError):
        CocompositionMap(I, J, ONE)


def test_missing_parameters():
    with pytest.raises(KeyError):
        CocompositionMap((1,), (2,), {"h1": 1})


@pytest.mark.parametrize("params", [ONE, ODD], ids=["p_1_1", "p_2_-3"])
@pytest.mark.parametrize("I,J", list(splits(4)))
def test_rho_well_defined(I, J, params):
    r = rho_well_defined(I, J, params)
    assert r.passed, r.failures
    assert r.checked > 0


@pytest.mark.parametrize("sizes", [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2)])
@pytest.mark.parametrize("params", [ONE, ODD], ids=["p_1_1", "p_2_-3"])
def test_coassociativity(sizes, params):
    r = coassociativity_check(sizes, params)
    assert r.passed, r.failures
    assert r.checked == 2 * 2 * len(list(itertools.combinations(range(sum(sizes)), 2)))


def test_coassociativity_preconditions():
    with pytest.raises(LabelError):
        coassociativity_check((1, 0, 1), ONE)
    with pytest.raises(LabelError):
        coassociativity_check((2, 2, 2), ONE)


class WrongMap(CocompositionMap):
    """Sends x_ij with i in I, j in J to x_{*i} instead of x_{i*}."""

    def target_generator(self, letter, i, j):
        if i in self.I and j not in self.I:
            return 0, letter, self.star, i
        return super().target_generator(letter, i, j)


def test_negative_control_detected():
    rho = WrongMap((1,), (2, 3), ONE)
    t = rho.image_of_generator("x", 1, 2) + rho.image_of_generator("x", 2, 1)
    t = t - TensorPolynomial.one(rho.targets).scale(1)
    assert not t.normal_form(rho.bases()).is_zero()


# dimension match -------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4])
def test_dim_match(n):
    r = dim_match_operad(n, ONE)
    assert r.passed, (r.algebra_dim, r.operad_dim)


def test_dim_match_at_origin():
    for n in (2, 3, 4):
        assert dim_match_operad(n, {"h1": 0, "h2": 0}).passed


def test_dim_match_cap():
    with pytest.raises(ValueError):
        dim_match_operad(5, ONE)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_gv2_flat(n):
    dims = {tuple(p.values()): gv2_basis(tuple(range(1, n + 1)), p).dimension() for p in SAMPLES}
    assert len(set(dims.values())) == 1, dims


# properties ------------------------------------------------------------------

RHO = CocompositionMap((1, 3), (2,), ODD)
NV = RHO.source.order.nvars


@st.composite
def source_poly(draw):
    return draw(st.dictionaries(
        st.tuples(*[st.integers(0, 2)] * NV),
        st.fractions(min_value=-3, max_value=3, max_denominator=2).filter(bool),
        max_size=3,
    ))


@settings(max_examples=40)
@given(source_poly(), source_poly())
def test_rho_is_multiplicative(p, q):
    bases = RHO.bases()
    lhs = RHO.apply(poly_mul(p, q)).normal_form(bases)
    rhs = (RHO.apply(p) * RHO.apply(q)).normal_form(bases)
    assert (lhs - rhs).normal_form(bases).is_zero()


@given(st.permutations((4, 7, 9)), st.integers(1, 2))
def test_label_equivariance(images, a):
    # relabel {1,2,3} by f and check rho_{f(I), f(J)} o f = (f ⊗ f) o rho_{I,J} on generators
    f = dict(zip((1, 2, 3), images))
    f["*"] = "*"
    I, J = (1, 2, 3)[:a], (1, 2, 3)[a:]
    rho = CocompositionMap(I, J, ODD)
    moved = CocompositionMap(tuple(f[i] for i in I), tuple(f[j] for j in J), ODD)
    for letter in ("x", "y"):
        for i, j in itertools.permutations((1, 2, 3), 2):
            k, _, u, v = rho.target_generator(letter, i, j)
            assert moved.target_generator(letter, f[i], f[j]) == (k, letter, f[u], f[v])
            assert moved.image_of_generator(letter, f[i], f[j]) == generator_image(moved, letter, f[i], f[j])
    assert rho_well_defined(moved.I, moved.J, ODD).passed
