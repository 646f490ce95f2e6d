"""Quadratic duals of binary quadratic operads and the generating-series test.

The pairing between ``F_W(3)`` and ``F_{W∨}(3)`` is fixed by two rules:
on trees of the form ``g(h(x_p, x_q), x_r)`` it is the product of the
generator pairings times the sign of the leaf reading ``p q r``, and it
is twisted-invariant, ``<σx, σy> = sgn(σ) <x, y>``.  On canonical monomials
this works out to ``sgn(reading) * (-1 if the inner subtree is the right
child)``, with distinct monomials orthogonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .dsl import Apply, Leaf, LETTERS, OperadPresentation, normalize_combination
from .engine import compile_operad
from .free import FreeOperad, Signature, leaves
from .linalg import DimensionMismatch, SparseMatrix, nullspace_basis, rank
from .poly import Poly


class DegeneratePairing(RuntimeError):
    pass


def _perm_sign(seq: Sequence[int]) -> int:
    seq = list(seq)
    s = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def pairing_sign(t) -> int:
    """Sign pairing the arity-3 monomial ``t`` with its dual-labelled twin."""
    inner_right = isinstance(t[1], int)
    return _perm_sign(leaves(t)) * (-1 if inner_right else 1)


def pairing_matrix(signature: Signature) -> tuple[SparseMatrix, FreeOperad, FreeOperad]:
    """Square matrix indexed by ``F_W(3)`` (rows) against ``F_{W∨}(3)`` (columns)."""
    free = FreeOperad(signature)
    dual = FreeOperad(signature.dual())
    didx = dual.index(3)
    rows = []
    for t in free.basis(3):
        if t not in didx:
            raise DegeneratePairing(f"monomial {free.format(t)} has no dual counterpart")
        rows.append({didx[t]: pairing_sign(t)})
    P = SparseMatrix(rows, dual.dimension(3))
    if rank(P) != P.ncols or P.nrows != P.ncols:
        raise DegeneratePairing("pairing matrix is not invertible")
    return P, free, dual


def _tree_to_expr(t, names: Sequence[str]):
    if isinstance(t, int):
        return Leaf(LETTERS[t - 1])
    return Apply(names[t[0]], _tree_to_expr(t[1], names), _tree_to_expr(t[2], names))


def quadratic_dual(pres: OperadPresentation, params: Mapping[str, object] | None = None,
                   name: str | None = None) -> OperadPresentation:
    """Dual presentation whose relations form a basis of the annihilator of R."""
    op = compile_operad(pres, params)
    P, free, dual = pairing_matrix(op.signature)
    R = op.ideal_matrix(3) if op.relations else SparseMatrix.zero(0, free.dimension(3))
    # R^perp = { y : R P y = 0 }; P is diagonal so R P just rescales columns
    diag = {i: r[i] for i, r in enumerate(P.rows()) for i in r}
    RP = SparseMatrix(
        ({c: v * diag[c] for c, v in row.items()} for row in R.rows()), P.ncols
    )
    perp = nullspace_basis(RP) if RP.nrows else [{j: 1} for j in range(P.ncols)]
    names = dual.signature.names
    dbasis = dual.basis(3)
    rels = []
    for vec in perp:
        terms = {_tree_to_expr(dbasis[j], names): Poly.const(c) for j, c in vec.items()}
        rels.append(normalize_combination(terms))
    return OperadPresentation(name or f"{pres.name}_dual", dual.signature.generators, tuple(rels), ())


def subspace_equal(A: SparseMatrix, B: SparseMatrix) -> bool:
    if A.ncols != B.ncols:
        raise DimensionMismatch(f"{A.ncols} vs {B.ncols} columns")
    ra, rb = rank(A), rank(B)
    return ra == rb and rank(A.vstack(B)) == ra


def relation_matrix(pres: OperadPresentation, params: Mapping[str, object] | None = None) -> SparseMatrix:
    op = compile_operad(pres, params)
    if not op.relations:
        return SparseMatrix.zero(0, op.free.dimension(3))
    return op.ideal_matrix(3)


def _rename_generators(t, perm):
    if isinstance(t, int):
        return t
    return (perm[t[0]], _rename_generators(t[1], perm), _rename_generators(t[2], perm))


def same_relations(presA: OperadPresentation, paramsA, presB: OperadPresentation, paramsB,
                   generator_map: Mapping[str, str] | None = None) -> bool:
    """Compare arity-3 relation spans.

    Generators of A are sent to generators of B by ``generator_map`` (names),
    or by position when no map is given.
    """
    if len(presA.generators) != len(presB.generators):
        return False
    if generator_map is None:
        perm = list(range(len(presA.generators)))
    else:
        bidx = {g.name: i for i, g in enumerate(presB.generators)}
        perm = [bidx[generator_map[g.name]] for g in presA.generators]
        if sorted(perm) != list(range(len(perm))):
            raise ValueError("generator map is not a bijection")
    if any(g.symmetry != presB.generators[perm[i]].symmetry for i, g in enumerate(presA.generators)):
        return False
    opA = compile_operad(presA, paramsA)
    opB = compile_operad(presB, paramsB)
    basisA = opA.free.basis(3)
    rows = []
    for row in relation_matrix(presA, paramsA).rows():
        lc = {}
        for j, c in row.items():
            t = _rename_generators(basisA[j], perm)
            lc[t] = lc.get(t, 0) + c
        rows.append(opB.free.to_vector(lc, 3))
    moved = SparseMatrix(rows, opB.free.dimension(3))
    return subspace_equal(moved, relation_matrix(presB, paramsB))


# truncated exponential generating series -------------------------------------


def egf(dims: Sequence[int], N: int) -> list[Fraction]:
    """Coefficients c_0..c_N of sum dims[n-1] t^n / n!."""
    out = [Fraction(0)] * (N + 1)
    for n in range(1, N + 1):
        out[n] = Fraction(dims[n - 1], factorial(n))
    return out


def series_mul(a: Sequence[Fraction], b: Sequence[Fraction], N: int) -> list[Fraction]:
    out = [Fraction(0)] * (N + 1)
    for i, x in enumerate(a[: N + 1]):
        if not x:
            continue
        for j in range(0, N + 1 - i):
            if b[j]:
                out[i + j] += x * b[j]
    return out


def series_compose(outer: Sequence[Fraction], inner: Sequence[Fraction], N: int) -> list[Fraction]:
    """outer(inner(t)) mod t^(N+1); ``inner`` must have zero constant term."""
    if inner[0]:
        raise ValueError("inner series must have zero constant term")
    out = [Fraction(0)] * (N + 1)
    out[0] = Fraction(outer[0])
    power = [Fraction(1)] + [Fraction(0)] * N
    for k in range(1, N + 1):
        power = series_mul(power, inner, N)
        if outer[k]:
            for i in range(N + 1):
                out[i] += outer[k] * power[i]
    return out


@dataclass
class SeriesTestResult:
    passed: bool
    degree: int
    first_failure: int | None
    coefficients: list

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "degree": self.degree,
            "first_failure": self.first_failure,
            "coefficients": [str(c) for c in self.coefficients],
            "note": "necessary condition for Koszulness only",
        }


def koszulness_series_test(dims_P: Sequence[int], dims_dual: Sequence[int], N: int = 5) -> SeriesTestResult:
    """Check g_dual(-g_P(-t)) = t modulo t^(N+1)."""
    if len(dims_P) < N or len(dims_dual) < N:
        raise ValueError(f"dimension lists must cover arities 1..{N}")
    gp = egf(dims_P, N)
    gd = egf(dims_dual, N)
    inner = [-c if n % 2 == 0 else c for n, c in enumerate(gp)]  # -g_P(-t)
    h = series_compose(gd, inner, N)
    target = [Fraction(0)] * (N + 1)
    if N >= 1:
        target[1] = Fraction(1)
    first = next((n for n in range(N + 1) if h[n] != target[n]), None)
    return SeriesTestResult(first is None, N, first, h)
