from __future__ import annotations

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from operadforge.dsl import Symmetry
from operadforge.engine import compile_operad, dimensions
from operadforge.free import FreeOperad, Signature
from operadforge.koszul import (
    _perm_sign,
    koszulness_series_test,
    pairing_matrix,
    pairing_sign,
    quadratic_dual,
    relation_matrix,
    same_relations,
    series_compose,
    subspace_equal,
)
from operadforge.linalg import DimensionMismatch, SparseMatrix, rank
from operadforge.presets import OPERADS, operad

SAMPLE = {"h": Fraction(1), "h1": Fraction(1), "h2": Fraction(1)}


def params_for(name, values=SAMPLE):
    return {k: values[k] for k in operad(name).params}


def pair(free: FreeOperad, dual: FreeOperad, x: dict, y: dict) -> Fraction:
    """Bilinear pairing of an F_W(3) element with an F_{W∨}(3) element."""
    return sum((c * y.get(t, 0) * pairing_sign(t) for t, c in x.items()), Fraction(0))


# pairing ---------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(OPERADS))
def test_pairing_invertible(name):
    P, free, dual = pairing_matrix(Signature(operad(name).generators))
    assert P.nrows == P.ncols == free.dimension(3) == dual.dimension(3)
    assert rank(P) == P.ncols


def test_dual_signature_flips_symmetry():
    sig = Signature(operad("ass2").generators).dual()
    assert [g.symmetry for g in sig.generators] == [Symmetry.NONE, Symmetry.SYM]
    assert [g.name for g in sig.generators] == ["s_d", "l_d"]


@given(st.sampled_from(["ll2", "ass2", "poisson", "ass"]), st.data())
def test_pairing_is_twisted_invariant(name, data):
    _, free, dual = pairing_matrix(Signature(operad(name).generators))
    x = data.draw(st.sampled_from(free.basis(3)))
    y = data.draw(st.sampled_from(dual.basis(3)))
    sigma = data.draw(st.permutations((1, 2, 3)))
    lhs = pair(free, dual, free.act(sigma, {x: 1}), dual.act(sigma, {y: 1}))
    assert lhs == _perm_sign(sigma) * pair(free, dual, {x: 1}, {y: 1})


# classical anchors -------------------------------------------------------------


def test_com_dual_is_lie():
    dual = quadratic_dual(operad("com"))
    assert [g.symmetry for g in dual.generators] == [Symmetry.ANTI]
    assert same_relations(dual, {}, operad("lie"), {})


def test_lie_dual_is_com():
    assert same_relations(quadratic_dual(operad("lie")), {}, operad("com"), {})


def test_ass_dual_is_ass():
    assert same_relations(quadratic_dual(operad("ass")), {}, operad("ass"), {})


def test_poisson_self_dual_with_swap():
    dual = quadratic_dual(operad("poisson"))
    assert same_relations(dual, {}, operad("poisson"), {}, {"m_d": "l", "l_d": "m"})
    assert dimensions(dual, {}, 4) == [1, 2, 6, 24]


def test_ll2_dual_matches_stated_presentation():
    for h in [(1, 1), (1, 0), (2, -3)]:
        hp = {"h1": Fraction(h[0]), "h2": Fraction(h[1])}
        assert same_relations(quadratic_dual(operad("ll2"), hp), {}, operad("ll2dual"), hp)


def test_ll2_dual_at_origin():
    zero = {"h1": Fraction(0), "h2": Fraction(0)}
    assert same_relations(quadratic_dual(operad("ll2"), zero), {}, operad("ll2dual"), zero)


def test_same_relations_rejects_wrong_partner():
    assert not same_relations(quadratic_dual(operad("com")), {}, operad("com"), {})
    assert not same_relations(operad("lie"), {}, operad("poisson"), {})


# invariants --------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(OPERADS))
def test_complementarity(name):
    p = params_for(name)
    R = relation_matrix(operad(name), p)
    perp = relation_matrix(quadratic_dual(operad(name), p), {})
    assert rank(R) + rank(perp) == compile_operad(operad(name), p).free.dimension(3)


@pytest.mark.parametrize("name", sorted(OPERADS))
def test_dual_annihilates(name):
    p = params_for(name)
    op = compile_operad(operad(name), p)
    d = compile_operad(quadratic_dual(operad(name), p), {})
    basis, dbasis = op.free.basis(3), d.free.basis(3)
    for r in relation_matrix(operad(name), p).rows():
        x = {basis[j]: c for j, c in r.items()}
        for s in relation_matrix(quadratic_dual(operad(name), p), {}).rows():
            y = {dbasis[j]: c for j, c in s.items()}
            assert pair(op.free, d.free, x, y) == 0


@pytest.mark.parametrize("name", ["com", "lie", "ass", "poisson", "ll2"])
def test_involutive(name):
    p = params_for(name)
    twice = quadratic_dual(quadratic_dual(operad(name), p), {})
    assert same_relations(twice, {}, operad(name), p)


# subspace comparison -----------------------------------------------------------


def test_subspace_examples():
    A = SparseMatrix.from_dense([[1, 2, 0], [0, 1, 1]])
    assert subspace_equal(A, SparseMatrix.from_dense([[0, 1, 1], [1, 2, 0]]))
    assert not subspace_equal(A, SparseMatrix.from_dense([[1, 2, 0], [0, 1, 1], [0, 0, 1]]))
    with pytest.raises(DimensionMismatch):
        subspace_equal(A, SparseMatrix.identity(2))


def test_jacobi_rotation_same_span():
    op = compile_operad(operad("lie"))
    jac = op.relations[0]
    rotated = op.free.act((2, 3, 1), jac)
    A = SparseMatrix([op.vector(jac, 3)], 3)
    B = SparseMatrix([op.vector(rotated, 3)], 3)
    assert subspace_equal(A, B)


# series test -------------------------------------------------------------------


def test_series_com_lie():
    com = [1] * 5
    lie = [factorial(n - 1) for n in range(1, 6)]
    assert koszulness_series_test(com, lie, 5).passed
    assert koszulness_series_test(lie, com, 5).passed


def test_series_ass_self():
    ass = [factorial(n) for n in range(1, 6)]
    assert koszulness_series_test(ass, ass, 5).passed


def test_series_corrupted():
    r = koszulness_series_test([1] * 5, [1, 1, 3, 6, 24], 5)
    assert not r.passed and r.first_failure == 3
    assert r.to_json()["note"].startswith("necessary condition")


def test_series_list_too_short():
    with pytest.raises(ValueError):
        koszulness_series_test([1, 1], [1, 1, 2], 3)


def test_series_compose_exp_log():
    # log(1 + (e^t - 1)) = t
    N = 6
    expm1 = [Fraction(0)] + [Fraction(1, factorial(n)) for n in range(1, N + 1)]
    log1p = [Fraction(0)] + [Fraction((-1) ** (n + 1), n) for n in range(1, N + 1)]
    assert series_compose(log1p, expm1, N) == [0, 1] + [0] * (N - 1)


@given(st.lists(st.integers(1, 200), min_size=4, max_size=4))
def test_series_detects_any_change(tail):
    # the inverse partner of Com is unique: any other list fails
    com = [1] * 5
    lie = [factorial(n - 1) for n in range(1, 6)]
    other = [1] + tail
    assert koszulness_series_test(com, other, 5).passed == (other == lie)
