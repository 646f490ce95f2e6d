"""Sparse multivariate polynomials over the rationals with named variables.

Used for parameter coefficients (h, h1, h2) in presentations and for the
relations of commutative algebra presentations before they are compiled
into exponent-vector form by :mod:`operadforge.groebner`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

# A monomial is a sorted tuple of (name, exponent) pairs with exponent > 0.
Monomial = tuple

Scalar = Union[int, Fraction]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for name, e in b:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items()))


class Poly:
    """Immutable polynomial ``{monomial: Fraction}``; zero coefficients are never stored."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def const(cls, c: Scalar) -> Poly:
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> Poly:
        return cls({((name, 1),): 1})

    # arithmetic -------------------------------------------------------------

    @staticmethod
    def coerce(x) -> Poly:
        if isinstance(x, Poly):
            return x
        return Poly.const(x)

    def __add__(self, other) -> Poly:
        other = Poly.coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> Poly:
        return self + (-Poly.coerce(other))

    def __rsub__(self, other) -> Poly:
        return Poly.coerce(other) - self

    def __mul__(self, other) -> Poly:
        other = Poly.coerce(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Poly:
        if isinstance(other, Poly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("can only divide by a nonzero constant")
            other = other.constant()
        if not other:
            raise ZeroDivisionError("division by zero")
        inv = 1 / Fraction(other)
        return Poly({m: c * inv for m, c in self.terms.items()})

    def __pow__(self, e: int) -> Poly:
        if e < 0:
            raise ValueError("negative exponent")
        out = Poly.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # queries ----------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"polynomial {self} is not constant")
        return self.terms.get((), Fraction(0))

    def variables(self) -> set[str]:
        return {name for m in self.terms for name, _ in m}

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def subs(self, values: Mapping[str, Scalar | Poly]) -> Poly:
        """Substitute variables by scalars or polynomials; others stay symbolic."""
        out = Poly()
        cache: dict = {}
        for m, c in self.terms.items():
            term = Poly.const(c)
            rest = []
            for name, e in m:
                if name in values:
                    key = (name, e)
                    if key not in cache:
                        cache[key] = Poly.coerce(values[name]) ** e
                    term = term * cache[key]
                else:
                    rest.append((name, e))
            if rest:
                term = term * Poly({tuple(rest): 1})
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        """Full evaluation; every variable must be assigned."""
        missing = self.variables() - set(values)
        if missing:
            raise KeyError(f"unassigned parameters: {', '.join(sorted(missing))}")
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for name, e in m:
                v *= Fraction(values[name]) ** e
            total += v
        return total

    # comparison / hashing ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly.const(other)
            else:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (-sum(e for _, e in t[0]), t[0]))

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def format_scalar(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_monomial(m: Monomial) -> str:
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in m)


def format_poly(p: Poly) -> str:
    """Render in the DSL's polynomial syntax, e.g. ``x12^2 - h*x12``."""
    if p.is_zero():
        return "0"
    parts = []
    for i, (m, c) in enumerate(p.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        if not m:
            body = format_scalar(a)
        elif a == 1:
            body = format_monomial(m)
        else:
            body = f"{format_scalar(a)}*{format_monomial(m)}"
        if i == 0:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f" - {body}" if neg else f" + {body}")
    return "".join(parts)


def poly_sum(items: Iterable[Poly]) -> Poly:
    out: dict = {}
    for p in items:
        for m, c in p.terms.items():
            out[m] = out.get(m, 0) + c
    return Poly(out)
