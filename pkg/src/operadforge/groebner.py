"""Buchberger's algorithm over Q for finitely presented commutative algebras.

Polynomials are dicts from exponent tuples to Fractions.  Exponent
position ``k`` refers to ``ring.variables[k]``, and variables are listed
from the smallest to the largest in the monomial order.
"""

from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .dsl import AlgebraPresentation, parse_polynomial
from .poly import Poly, format_poly

log = logging.getLogger(__name__)

Exp = tuple
CommPoly = dict  # Exp -> Fraction

ORDERS = ("degrevlex", "lex")


@dataclass(frozen=True)
class MonomialOrder:
    kind: str
    variables: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in ORDERS:
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("repeated variable in order")

    def key(self, e: Exp) -> tuple:
        """Sort key, larger means bigger in the order."""
        if self.kind == "degrevlex":
            return (sum(e),) + tuple(-x for x in e)
        return tuple(reversed(e))

    @property
    def nvars(self) -> int:
        return len(self.variables)


# exponent arithmetic ----------------------------------------------------------


def divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def quotient(b: Exp, a: Exp) -> Exp:
    return tuple(y - x for x, y in zip(a, b))


def add_exp(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


def coprime(a: Exp, b: Exp) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


# polynomial helpers -------------------------------------------------------------


def poly_add(p: CommPoly, q: CommPoly, scale: Fraction = Fraction(1)) -> CommPoly:
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def poly_mul(p: CommPoly, q: CommPoly) -> CommPoly:
    out: dict = {}
    for (a, x), (b, y) in itertools.product(p.items(), q.items()):
        m = add_exp(a, b)
        out[m] = out.get(m, 0) + x * y
    return {m: c for m, c in out.items() if c}


def monomial_times(p: CommPoly, e: Exp, c: Fraction) -> CommPoly:
    return {add_exp(m, e): c * v for m, v in p.items()}


def leading(p: CommPoly, order: MonomialOrder) -> Exp:
    return max(p, key=order.key)


def to_comm(p: Poly, order: MonomialOrder, params: Mapping[str, object] | None = None) -> CommPoly:
    """Convert a named polynomial, substituting parameter values first."""
    if params:
        p = p.subs({k: Poly.const(Fraction(v)) for k, v in params.items()})
    pos = {v: k for k, v in enumerate(order.variables)}
    out: dict = {}
    for mono, c in p.terms.items():
        e = [0] * order.nvars
        for name, k in mono:
            if name not in pos:
                raise KeyError(f"variable or parameter {name!r} has no value")
            e[pos[name]] = k
        e = tuple(e)
        out[e] = out.get(e, 0) + c
    return {m: Fraction(c) for m, c in out.items() if c}


def from_comm(p: CommPoly, order: MonomialOrder) -> Poly:
    out = Poly.const(0)
    for e, c in p.items():
        term = Poly.const(c)
        for name, k in zip(order.variables, e):
            if k:
                term = term * Poly.var(name) ** k
        out = out + term
    return out


def format_comm(p: CommPoly, order: MonomialOrder) -> str:
    return format_poly(from_comm(p, order))


# reduction ----------------------------------------------------------------------


def _reduce(p: CommPoly, basis: Sequence[tuple[Exp, CommPoly]], order: MonomialOrder) -> CommPoly:
    """Full reduction of ``p`` by monic polynomials given with their leading exponents."""
    p = dict(p)
    key = order.key
    heap = [(tuple(-x for x in key(m)), m) for m in p]
    heapq.heapify(heap)
    queued = set(p)
    rem: dict = {}
    while heap:
        _, m = heapq.heappop(heap)
        queued.discard(m)
        c = p.pop(m, 0)
        if not c:
            continue
        for lt, g in basis:
            if divides(lt, m):
                q = quotient(m, lt)
                for gm, gc in g.items():
                    if gm == lt:
                        continue
                    t = add_exp(gm, q)
                    v = p.get(t, 0) - c * gc
                    if v:
                        p[t] = v
                        if t not in queued:
                            queued.add(t)
                            heapq.heappush(heap, (tuple(-x for x in key(t)), t))
                    else:
                        p.pop(t, None)
                break
        else:
            rem[m] = c
    return rem


def _monic(p: CommPoly, order: MonomialOrder) -> tuple[Exp, CommPoly]:
    lt = leading(p, order)
    c = p[lt]
    return lt, {m: v / c for m, v in p.items()}


def s_polynomial(f: CommPoly, g: CommPoly, order: MonomialOrder) -> CommPoly:
    lf, lg = leading(f, order), leading(g, order)
    L = lcm(lf, lg)
    a = monomial_times(f, quotient(L, lf), 1 / f[lf])
    b = monomial_times(g, quotient(L, lg), 1 / g[lg])
    return poly_add(a, b, Fraction(-1))


@dataclass
class GroebnerBasis:
    order: MonomialOrder
    polys: list = field(default_factory=list)  # monic, sorted by leading monomial
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self._lead = [(leading(g, self.order), g) for g in self.polys]

    @property
    def leading_exponents(self) -> list[Exp]:
        return [lt for lt, _ in self._lead]

    def __len__(self) -> int:
        return len(self.polys)

    def reduce(self, p: CommPoly) -> CommPoly:
        return _reduce(p, self._lead, self.order)

    def normal_form(self, p) -> CommPoly:
        """Normal form of a CommPoly, a named ``Poly``, or DSL text."""
        if isinstance(p, str):
            p = parse_polynomial(p, self.order.variables, tuple(self.params))
        if isinstance(p, Poly):
            p = to_comm(p, self.order, self.params)
        return self.reduce(p)

    def contains(self, p) -> bool:
        return not self.normal_form(p)

    def is_unit_ideal(self) -> bool:
        zero = tuple([0] * self.order.nvars)
        return any(lt == zero for lt in self.leading_exponents)

    def standard_monomials(self) -> list[Exp] | None:
        """Monomials outside the leading ideal, or None if there are infinitely many."""
        n = self.order.nvars
        lts = self.leading_exponents
        if self.is_unit_ideal():
            return []
        for k in range(n):
            if not any(lt[k] and sum(lt) == lt[k] for lt in lts):
                return None
        zero = tuple([0] * n)
        seen = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for m in frontier:
                for k in range(n):
                    e = m[:k] + (m[k] + 1,) + m[k + 1:]
                    if e in seen or any(divides(lt, e) for lt in lts):
                        continue
                    seen.add(e)
                    nxt.append(e)
            frontier = nxt
        return sorted(seen, key=self.order.key)

    def dimension(self) -> int | str:
        sm = self.standard_monomials()
        return "infinite" if sm is None else len(sm)

    def to_text(self) -> list[str]:
        return [format_comm(g, self.order) for g in self.polys]

    def s_pairs_reduce_to_zero(self) -> bool:
        for f, g in itertools.combinations(self.polys, 2):
            if self.reduce(s_polynomial(f, g, self.order)):
                return False
        return True


def groebner(polys: Iterable[CommPoly], order: MonomialOrder, params: Mapping | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis via Buchberger with the normal selection strategy.

    Pairs are skipped by the coprime-leading-terms criterion and the chain
    criterion (some earlier basis element's leading term divides the lcm
    and both connecting pairs are already treated).
    """
    key = order.key
    G: list[tuple[Exp, CommPoly]] = []
    for p in polys:
        p = _reduce(p, G, order) if G else p
        if p:
            G.append(_monic(p, order))
    if not G:
        return GroebnerBasis(order, [], dict(params or {}))

    pairs: list = []
    done: set = set()

    def push_min(i: int, j: int):
        L = lcm(G[i][0], G[j][0])
        heapq.heappush(pairs, (key(L), i, j))

    for i, j in itertools.combinations(range(len(G)), 2):
        push_min(i, j)
    while pairs:
        _, i, j = heapq.heappop(pairs)
        done.add((i, j))
        li, lj = G[i][0], G[j][0]
        if coprime(li, lj):
            continue
        L = lcm(li, lj)
        chain = False
        for k in range(len(G)):
            if k in (i, j):
                continue
            if divides(G[k][0], L):
                a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
                if a in done and b in done:
                    chain = True
                    break
        if chain:
            continue
        s = s_polynomial(G[i][1], G[j][1], order)
        r = _reduce(s, G, order)
        if r:
            G.append(_monic(r, order))
            new = len(G) - 1
            for k in range(new):
                push_min(k, new)
    return _reduced(G, order, params)


def _reduced(G: Sequence[tuple[Exp, CommPoly]], order: MonomialOrder, params) -> GroebnerBasis:
    lts = [lt for lt, _ in G]
    keep = []
    for i, (lt, g) in enumerate(G):
        redundant = any(
            divides(lts[k], lt) and (lts[k] != lt or k < i) for k in range(len(G)) if k != i
        )
        if not redundant:
            keep.append((lt, g))
    out = []
    for i, (lt, g) in enumerate(keep):
        others = [h for k, h in enumerate(keep) if k != i]
        tail = {m: c for m, c in g.items() if m != lt}
        r = _reduce(tail, others, order)
        r[lt] = Fraction(1)
        out.append(r)
    out.sort(key=lambda p: order.key(leading(p, order)))
    return GroebnerBasis(order, out, dict(params or {}))


# presentation-level operations -----------------------------------------------------


def default_order(pres: AlgebraPresentation, kind: str = "degrevlex") -> MonomialOrder:
    return MonomialOrder(kind, tuple(pres.variables))


def _resolve_params(pres: AlgebraPresentation, params: Mapping | None) -> dict:
    params = {k: Fraction(v) for k, v in (params or {}).items() if k in pres.params}
    missing = [p for p in pres.params if p not in params]
    if missing:
        raise KeyError(f"missing parameter values: {', '.join(missing)}")
    return params


def relation_polys(pres: AlgebraPresentation, params: Mapping | None, order: MonomialOrder) -> list[CommPoly]:
    vals = _resolve_params(pres, params)
    return [p for p in (to_comm(r, order, vals) for r in pres.relations) if p]


def buchberger(pres: AlgebraPresentation, params: Mapping | None = None, order: str | MonomialOrder = "degrevlex") -> GroebnerBasis:
    if isinstance(order, str):
        order = default_order(pres, order)
    vals = _resolve_params(pres, params)
    gb = groebner(relation_polys(pres, vals, order), order, vals)
    log.info("groebner %s: %d elements", pres.name, len(gb))
    return gb


def normal_form(p, gb: GroebnerBasis) -> CommPoly:
    return gb.normal_form(p)


def algebra_dimension(gb_or_pres, params: Mapping | None = None, order: str = "degrevlex") -> int | str:
    """Dimension of the quotient algebra, or ``"infinite"``."""
    if isinstance(gb_or_pres, GroebnerBasis):
        return gb_or_pres.dimension()
    return buchberger(gb_or_pres, params, order).dimension()


class SubstitutionError(KeyError):
    pass


def _substitution(sub: Mapping[str, object], source: AlgebraPresentation, target: AlgebraPresentation,
                  order: MonomialOrder, vals: Mapping) -> dict[str, CommPoly]:
    missing = [v for v in source.variables if v not in sub]
    if missing:
        raise SubstitutionError(f"substitution undefined on {', '.join(missing)}")
    extra = [v for v in sub if v not in source.variables]
    if extra:
        raise SubstitutionError(f"substitution names unknown variables {', '.join(extra)}")
    out = {}
    for v, img in sub.items():
        if isinstance(img, str):
            img = parse_polynomial(img, target.variables, tuple(target.params))
        out[v] = to_comm(img, order, vals)
    return out


def substitute(p: Poly, images: Mapping[str, CommPoly], order: MonomialOrder, vals: Mapping) -> CommPoly:
    """Evaluate ``p`` with each variable replaced by its image (parameters by values)."""
    one = {tuple([0] * order.nvars): Fraction(1)}
    out: dict = {}
    for mono, c in p.terms.items():
        term = {m: Fraction(c) * v for m, v in one.items()}
        for name, k in mono:
            if name in images:
                base = images[name]
            elif name in vals:
                base = {tuple([0] * order.nvars): Fraction(vals[name])}
            else:
                raise SubstitutionError(f"no image for {name!r}")
            for _ in range(k):
                term = poly_mul(term, base)
        out = poly_add(out, term)
    return out


@dataclass
class IsoReport:
    passed: bool
    forward_ok: bool
    backward_ok: bool
    roundtrip_ok: bool
    failures: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed


def check_substitution_iso(presA: AlgebraPresentation, presB: AlgebraPresentation,
                           subAtoB: Mapping[str, object], subBtoA: Mapping[str, object],
                           params: Mapping | None = None) -> IsoReport:
    """Check that two substitutions define mutually inverse algebra maps."""
    valsA = _resolve_params(presA, params)
    valsB = _resolve_params(presB, params)
    ordA, ordB = default_order(presA), default_order(presB)
    gbA = buchberger(presA, valsA, ordA)
    gbB = buchberger(presB, valsB, ordB)
    fwd = _substitution(subAtoB, presA, presB, ordB, valsB)
    bwd = _substitution(subBtoA, presB, presA, ordA, valsA)
    failures = []
    forward_ok = True
    for r in presA.relations:
        if gbB.reduce(substitute(r, fwd, ordB, valsA)):
            forward_ok = False
            failures.append(f"A relation {format_poly(r)} does not vanish in B")
    backward_ok = True
    for r in presB.relations:
        if gbA.reduce(substitute(r, bwd, ordA, valsB)):
            backward_ok = False
            failures.append(f"B relation {format_poly(r)} does not vanish in A")
    roundtrip_ok = True
    for v in presA.variables:
        back = substitute(from_comm(fwd[v], ordB), bwd, ordA, valsB)
        if gbA.reduce(poly_add(back, to_comm(Poly.var(v), ordA), Fraction(-1))):
            roundtrip_ok = False
            failures.append(f"round trip moves {v}")
    for v in presB.variables:
        back = substitute(from_comm(bwd[v], ordA), fwd, ordB, valsA)
        if gbB.reduce(poly_add(back, to_comm(Poly.var(v), ordB), Fraction(-1))):
            roundtrip_ok = False
            failures.append(f"round trip moves {v}")
    ok = forward_ok and backward_ok and roundtrip_ok
    return IsoReport(ok, forward_ok, backward_ok, roundtrip_ok, failures)


def identity_substitution(pres: AlgebraPresentation) -> dict[str, Poly]:
    return {v: Poly.var(v) for v in pres.variables}
