"""Deterministic spot checks of structural invariants, used by the suite report.

The hypothesis-driven versions live in the test suite; these run a fixed
seeded sample so a report can be produced without pytest.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .free import FreeOperad, Signature, leaves
from .groebner import buchberger
from .linalg import SparseMatrix, multimodular_rank, nullspace_basis, matvec, rank
from .presets import algebra, operad

SEED = 20240607


def _random_matrix(rng: random.Random, r: int, c: int) -> SparseMatrix:
    rows = []
    for _ in range(r):
        rows.append({j: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for j in range(c) if rng.random() < 0.4})
    return SparseMatrix(rows, c)


def linalg_invariants() -> bool:
    rng = random.Random(SEED)
    for _ in range(30):
        M = _random_matrix(rng, rng.randint(1, 7), rng.randint(1, 7))
        r = rank(M)
        if r != rank(M.transpose()):
            return False
        null = nullspace_basis(M)
        if len(null) != M.ncols - r:
            return False
        if any(any(matvec(M, v)) for v in null):
            return False
        if multimodular_rank(M).rank > r:
            return False
    return True


def _product(sigma, tau):
    return tuple(sigma[tau[j] - 1] for j in range(len(tau)))


def action_is_group_action() -> bool:
    free = FreeOperad(Signature(operad("ll2").generators))
    for t in free.basis(3):
        for sigma in itertools.permutations((1, 2, 3)):
            for tau in itertools.permutations((1, 2, 3)):
                st = free.act(sigma, free.act(tau, {t: 1}))
                direct = free.act(_product(sigma, tau), {t: 1})
                if st != direct:
                    return False
    return True


def composition_is_associative() -> bool:
    free = FreeOperad(Signature(operad("ll2").generators))
    b2 = free.basis(2)
    for x, y, z in itertools.product(b2, repeat=3):
        # sequential: (x o_i y) o_j z for j inside y equals x o_i (y o_{j-i+1} z)
        for i in (1, 2):
            xy, s1 = free.compose(x, i, y)
            for j in (i, i + 1):
                lhs, s2 = free.compose(xy, j, z)
                yz, s3 = free.compose(y, j - i + 1, z)
                rhs, s4 = free.compose(x, i, yz)
                if (lhs, s1 * s2) != (rhs, s3 * s4):
                    return False
    return True


def canonical_form_idempotent() -> bool:
    for name in ("ll2", "ass2", "poisson"):
        free = FreeOperad(Signature(operad(name).generators))
        for n in (3, 4):
            for t in free.basis(n):
                c, s = free.canonical_form(t)
                if c != t or s != 1 or len(leaves(t)) != n:
                    return False
    return True


def groebner_order_independent() -> bool:
    for n, p in ((3, {"h1": 1, "h2": 1}), (3, {"h1": 0, "h2": 0}), (3, {"h1": 2, "h2": -3})):
        pres = algebra("gv2", tuple(range(1, n + 1)))
        if buchberger(pres, p, "degrevlex").dimension() != buchberger(pres, p, "lex").dimension():
            return False
    return True


def groebner_s_pairs() -> bool:
    for n, p in ((3, {"h1": 1, "h2": 1}), (3, {"h1": 0, "h2": 0})):
        if not buchberger(algebra("gv2", tuple(range(1, n + 1))), p).s_pairs_reduce_to_zero():
            return False
    return True


CHECKS = (
    ("linalg", linalg_invariants),
    ("action", action_is_group_action),
    ("composition", composition_is_associative),
    ("canonical", canonical_form_idempotent),
    ("groebner.order", groebner_order_independent),
    ("groebner.spairs", groebner_s_pairs),
)


def run_all() -> list[tuple[str, bool]]:
    return [(name, fn()) for name, fn in CHECKS]
