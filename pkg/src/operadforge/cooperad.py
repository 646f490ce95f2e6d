"""Cocomposition maps between double GV algebras on finite label sets.

Only essential generators (``i`` before ``j`` in label order) are variables;
``x_ji`` stands for ``h1 - x_ij`` and ``y_ji`` for ``h2 - y_ij``.  The slot
labels are strings starting with ``*`` and sort after integer labels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .dsl import AlgebraPresentation, PresentationError, parse_polynomial
from .engine import component_dimension
from .groebner import (
    CommPoly,
    GroebnerBasis,
    MonomialOrder,
    add_exp,
    buchberger,
    default_order,
    format_comm,
    to_comm,
)
from .poly import Poly
from .presets import _ordered, algebra, operad, var_name

STAR = "*"
LETTER_PARAM = {"x": "h1", "y": "h2"}


class LabelError(ValueError):
    pass


def label_set(labels: Sequence) -> tuple:
    labels = tuple(labels)
    if not labels:
        raise LabelError("empty label set")
    if len(set(labels)) != len(labels):
        raise LabelError(f"labels must be distinct: {labels}")
    return tuple(_ordered(labels))


def build_gv2(labels: Sequence, params: Mapping | None = None) -> AlgebraPresentation:
    """GV₂ on ``labels``; parameters stay symbolic in the presentation."""
    pres = algebra("gv2", label_set(labels))
    if params is not None:
        missing = [p for p in pres.params if p not in params]
        if missing:
            raise KeyError(f"missing parameter values: {', '.join(missing)}")
    return pres


def _params(params: Mapping | None) -> dict[str, Fraction]:
    params = dict(params or {})
    out = {}
    for k in ("h1", "h2"):
        if k not in params:
            raise KeyError(f"missing parameter value {k}")
        out[k] = Fraction(params[k])
    return out


@lru_cache(maxsize=256)
def _basis(labels: tuple, key: tuple) -> GroebnerBasis:
    return buchberger(build_gv2(labels), dict(key))


def gv2_basis(labels: Sequence, params: Mapping) -> GroebnerBasis:
    vals = _params(params)
    return _basis(label_set(labels), tuple(sorted(vals.items())))


@dataclass(frozen=True)
class Factor:
    labels: tuple
    order: MonomialOrder

    @classmethod
    def of(cls, labels: Sequence) -> Factor:
        labels = label_set(labels)
        return cls(labels, default_order(build_gv2(labels)))

    def generator(self, letter: str, i, j, vals: Mapping) -> CommPoly:
        """``letter_ij`` in essential variables, for any ordered pair of labels."""
        pos = {x: k for k, x in enumerate(self.labels)}
        if i == j or i not in pos or j not in pos:
            raise LabelError(f"no generator {letter}_{i}{j} over labels {self.labels}")
        if pos[i] < pos[j]:
            p = Poly.var(var_name(letter, i, j))
        else:
            p = Poly.const(vals[LETTER_PARAM[letter]]) - Poly.var(var_name(letter, j, i))
        return to_comm(p, self.order)

    def essential(self) -> list[tuple[str, object, object]]:
        return [
            (letter, i, j)
            for letter in ("x", "y")
            for i, j in itertools.combinations(self.labels, 2)
        ]


# tensor polynomials -------------------------------------------------------------


@dataclass
class TensorPolynomial:
    factors: tuple  # of Factor
    terms: dict = field(default_factory=dict)  # tuple of exps -> Fraction

    @classmethod
    def one(cls, factors: Sequence[Factor]) -> TensorPolynomial:
        return cls(tuple(factors), {tuple(tuple([0] * f.order.nvars) for f in factors): Fraction(1)})

    @classmethod
    def in_factor(cls, factors: Sequence[Factor], k: int, p: CommPoly) -> TensorPolynomial:
        factors = tuple(factors)
        ones = [tuple([0] * f.order.nvars) for f in factors]
        terms = {}
        for e, c in p.items():
            key = list(ones)
            key[k] = e
            terms[tuple(key)] = Fraction(c)
        return cls(factors, terms)

    def _check(self, other: TensorPolynomial) -> None:
        if [f.labels for f in self.factors] != [f.labels for f in other.factors]:
            raise ValueError("tensor factors differ")

    def __add__(self, other: TensorPolynomial) -> TensorPolynomial:
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return TensorPolynomial(self.factors, out)

    def scale(self, c) -> TensorPolynomial:
        c = Fraction(c)
        if not c:
            return TensorPolynomial(self.factors, {})
        return TensorPolynomial(self.factors, {m: c * v for m, v in self.terms.items()})

    def __sub__(self, other: TensorPolynomial) -> TensorPolynomial:
        return self + other.scale(-1)

    def __mul__(self, other: TensorPolynomial) -> TensorPolynomial:
        self._check(other)
        out: dict = {}
        for (a, x), (b, y) in itertools.product(self.terms.items(), other.terms.items()):
            m = tuple(add_exp(p, q) for p, q in zip(a, b))
            out[m] = out.get(m, 0) + x * y
        return TensorPolynomial(self.factors, {m: c for m, c in out.items() if c})

    def is_zero(self) -> bool:
        return not self.terms

    def permute(self, perm: Sequence[int]) -> TensorPolynomial:
        """Reorder tensor factors; new factor k is old factor ``perm[k]``."""
        factors = tuple(self.factors[p] for p in perm)
        return TensorPolynomial(factors, {tuple(m[p] for p in perm): c for m, c in self.terms.items()})

    def normal_form(self, bases: Sequence[GroebnerBasis]) -> TensorPolynomial:
        terms = dict(self.terms)
        for k, gb in enumerate(bases):
            groups: dict = {}
            for m, c in terms.items():
                rest = m[:k] + m[k + 1:]
                groups.setdefault(rest, {})[m[k]] = c
            terms = {}
            for rest, p in groups.items():
                for e, c in gb.reduce(p).items():
                    terms[rest[:k] + (e,) + rest[k:]] = c
        return TensorPolynomial(self.factors, terms)

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda t: t[0], reverse=True):
            pieces = []
            for f, e in zip(self.factors, m):
                pieces.append(format_comm({e: Fraction(1)}, f.order))
            sign = "-" if c < 0 else "+"
            coeff = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(f"{sign} {coeff}({' ⊗ '.join(pieces)})")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[1:]


# cocomposition --------------------------------------------------------------------


@dataclass
class CocompositionMap:
    """ρ_IJ : GV₂(I⊔J) -> GV₂(I⊔{*}) ⊗ GV₂(J)."""

    I: tuple
    J: tuple
    params: dict
    star: str = STAR

    def __post_init__(self):
        self.I = tuple(self.I)
        self.J = tuple(self.J)
        if not self.I or not self.J:
            raise LabelError("both blocks of a cocomposition must be nonempty")
        if set(self.I) & set(self.J):
            raise LabelError("blocks must be disjoint")
        if self.star in self.I or self.star in self.J:
            raise LabelError(f"slot label {self.star!r} already in use")
        self.params = _params(self.params)
        self.source = Factor.of(self.I + self.J)
        self.targets = (Factor.of(self.I + (self.star,)), Factor.of(self.J))
        self._table = {}
        for letter in ("x", "y"):
            for i, j in itertools.permutations(self.source.labels, 2):
                self._table[(letter, i, j)] = self._rule(letter, i, j)
        self._images = {}
        for k, (letter, i, j) in enumerate(self.source.essential()):
            self._images[k] = self._table[(letter, i, j)]

    def target_generator(self, letter: str, i, j) -> tuple[int, str, object, object]:
        """Which factor and which generator ``letter_ij`` is sent to."""
        inI, inJ = i in self.I, j in self.I
        if inI and inJ:
            return 0, letter, i, j
        if not inI and not inJ:
            return 1, letter, i, j
        if inI:
            return 0, letter, i, self.star
        return 0, letter, self.star, j

    def _rule(self, letter: str, i, j) -> TensorPolynomial:
        k, letter, a, b = self.target_generator(letter, i, j)
        return TensorPolynomial.in_factor(self.targets, k, self.targets[k].generator(letter, a, b, self.params))

    def image_of_generator(self, letter: str, i, j) -> TensorPolynomial:
        return self._table[(letter, i, j)]

    def image_of_exponent(self, e) -> TensorPolynomial:
        out = TensorPolynomial.one(self.targets)
        for k, power in enumerate(e):
            for _ in range(power):
                out = out * self._images[k]
        return out

    def apply(self, p: CommPoly) -> TensorPolynomial:
        out = TensorPolynomial(self.targets, {})
        for e, c in p.items():
            out = out + self.image_of_exponent(e).scale(c)
        return out

    def bases(self) -> tuple[GroebnerBasis, GroebnerBasis]:
        return tuple(gv2_basis(f.labels, self.params) for f in self.targets)


def rho_image(rho: CocompositionMap, p) -> TensorPolynomial:
    """Image of a polynomial over GV₂(I⊔J) variables, before any reduction."""
    if isinstance(p, str):
        try:
            p = parse_polynomial(p, rho.source.order.variables, ("h1", "h2"))
        except PresentationError as exc:
            raise LabelError(str(exc)) from exc
    if isinstance(p, Poly):
        extra = p.variables() - set(rho.source.order.variables) - {"h1", "h2"}
        if extra:
            raise LabelError(f"variables outside I⊔J: {', '.join(sorted(extra))}")
        p = to_comm(p, rho.source.order, rho.params)
    return rho.apply(p)


@dataclass
class CheckReport:
    passed: bool
    checked: int
    failures: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed


def rho_well_defined(I: Sequence, J: Sequence, params: Mapping) -> CheckReport:
    rho = CocompositionMap(tuple(I), tuple(J), dict(params))
    bases = rho.bases()
    src = build_gv2(rho.source.labels)
    failures = []
    checked = 0
    # symmetry relations, read through the generator table on ordered pairs
    for letter in ("x", "y"):
        h = rho.params[LETTER_PARAM[letter]]
        for i, j in itertools.combinations(rho.source.labels, 2):
            t = rho.image_of_generator(letter, i, j) + rho.image_of_generator(letter, j, i)
            t = t - TensorPolynomial.one(rho.targets).scale(h)
            checked += 1
            if not t.normal_form(bases).is_zero():
                failures.append(f"{letter}_{i}{j} + {letter}_{j}{i} - {LETTER_PARAM[letter]}")
    for r in src.relations:
        checked += 1
        img = rho_image(rho, r).normal_form(bases)
        if not img.is_zero():
            failures.append(f"{r} -> {img.format()}")
    return CheckReport(not failures, checked, failures)


def _apply_on_factor(T: TensorPolynomial, k: int, rho: CocompositionMap) -> TensorPolynomial:
    """Apply ρ to tensor factor ``k``; the result has ρ's two outputs in its place."""
    if T.factors[k].labels != rho.source.labels:
        raise LabelError(f"factor {k} has labels {T.factors[k].labels}, map expects {rho.source.labels}")
    factors = T.factors[:k] + rho.targets + T.factors[k + 1:]
    out = TensorPolynomial(factors, {})
    for m, c in T.terms.items():
        img = rho.image_of_exponent(m[k])
        terms = {}
        for im, ic in img.terms.items():
            terms[m[:k] + im + m[k + 1:]] = c * ic
        out = out + TensorPolynomial(factors, terms)
    return out


def coassociativity_check(sizes: Sequence[int], params: Mapping) -> CheckReport:
    """Both cocomposition axioms for the split of {1..n} into consecutive blocks I, J, K."""
    a, b, c = sizes
    if min(sizes) < 1:
        raise LabelError("each block must be nonempty")
    if a + b + c > 5:
        raise LabelError("total size is capped at 5")
    I = tuple(range(1, a + 1))
    J = tuple(range(a + 1, a + b + 1))
    K = tuple(range(a + b + 1, a + b + c + 1))
    s1, s2 = "*1", "*2"
    top = Factor.of(I + J + K)
    seq_first = CocompositionMap(I, J + K, params, s1)
    seq_second = CocompositionMap(J, K, params, s2)
    alt_first = CocompositionMap(I + J, K, params, s2)
    alt_second = CocompositionMap(I, J + (s2,), params, s1)
    par_first = CocompositionMap(I + K, J, params, s1)
    par_second = CocompositionMap(I + (s1,), K, params, s2)
    seq_bases = [gv2_basis(lbl, params) for lbl in (I + (s1,), J + (s2,), K)]
    par_bases = [gv2_basis(lbl, params) for lbl in (I + (s1, s2), J, K)]
    failures = []
    checked = 0
    for k, (letter, i, j) in enumerate(top.essential()):
        e = tuple(1 if t == k else 0 for t in range(top.order.nvars))
        gen = {e: Fraction(1)}
        # sequential: (id ⊗ ρ_JK) ρ_{I,J⊔K} = (ρ_{I,J⊔*} ⊗ id) ρ_{I⊔J,K}
        lhs = _apply_on_factor(seq_first.apply(gen), 1, seq_second)
        rhs = _apply_on_factor(alt_first.apply(gen), 0, alt_second)
        checked += 1
        if not (lhs - rhs).normal_form(seq_bases).is_zero():
            failures.append(f"sequential axiom fails on {letter}_{i}{j}")
        # parallel: grafting into two slots of I in either order
        lhs = _apply_on_factor(par_first.apply(gen), 0, par_second).permute((0, 2, 1))
        rhs = _apply_on_factor(alt_first.apply(gen), 0, CocompositionMap(I + (s2,), J, params, s1))
        checked += 1
        if not (lhs - rhs).normal_form(par_bases).is_zero():
            failures.append(f"parallel axiom fails on {letter}_{i}{j}")
    return CheckReport(not failures, checked, failures)


@dataclass
class DimMatch:
    passed: bool
    n: int
    algebra_dim: int | str
    operad_dim: int

    def __bool__(self) -> bool:
        return self.passed


def dim_match_operad(n: int, params: Mapping) -> DimMatch:
    if n > 4:
        raise ValueError("dimension match is only checked up to n = 4")
    alg = gv2_basis(tuple(range(1, n + 1)), params).dimension()
    op = component_dimension(operad("ll2"), {k: params[k] for k in ("h1", "h2")}, n).dim
    return DimMatch(alg == op, n, alg, op)
