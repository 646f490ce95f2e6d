"""Components of quadratic operads given by generators and relations.

The arity-n component of the operadic ideal is produced from arity 3
upwards: at each step every spanning vector ``v`` of ``I(m)`` is grafted
with one generator, either as ``g(v, leaf)`` or as ``v`` with a generator
cherry in one slot, over all ways of distributing the new labels.  Since
``I(m)`` is S_m-stable this yields an S_{m+1}-stable spanning set of
``I(m+1)``.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .dsl import (
    Apply,
    Combination,
    ExprNode,
    LETTERS,
    Leaf,
    OperadPresentation,
    Symmetry,
    parse_element,
)
from .free import ArityError, FreeOperad, Signature, add_into, leaves, relabel
from .linalg import (
    DEFAULT_PRIMES,
    Echelon,
    IncrementalEchelon,
    SparseMatrix,
    echelon,
    multimodular_rank,
    rank,
    row_reduce,
)
from .poly import Poly

log = logging.getLogger(__name__)

EXACT_CAP = 4


class SymmetryViolation(ValueError):
    pass


def params_key(params: Mapping[str, object] | None) -> tuple:
    return tuple(sorted((k, Fraction(v)) for k, v in (params or {}).items()))


def format_params(params: Mapping[str, object] | None) -> str:
    items = params_key(params)
    return ",".join(f"{k}={v}" for k, v in items)


def _substitute(t, mapping):
    """Replace leaves by subtrees according to ``mapping``."""
    if isinstance(t, int):
        return mapping[t]
    return (t[0], _substitute(t[1], mapping), _substitute(t[2], mapping))


@lru_cache(maxsize=None)
def _free_for(signature: Signature, cap: int) -> FreeOperad:
    return FreeOperad(signature, cap)


@lru_cache(maxsize=None)
def _graft_plans(m: int) -> tuple:
    """Label maps used to lift arity-m vectors to arity m+1.

    Cherry plans ``(slot, (p, q), mapping)`` send ``slot`` to a cherry on
    ``{p, q}`` and the other leaves, in order, to the remaining labels.
    Leaf plans ``(leaf, mapping)`` send the leaves of ``v`` to all labels
    except ``leaf``.
    """
    labels = range(1, m + 2)
    cherry = []
    for slot in range(1, m + 1):
        for p, q in itertools.combinations(labels, 2):
            rest = [x for x in labels if x not in (p, q)]
            others = [j for j in range(1, m + 1) if j != slot]
            mapping = dict(zip(others, rest))
            cherry.append((slot, (p, q), mapping))
    leafp = []
    for leaf in labels:
        rest = [x for x in labels if x != leaf]
        leafp.append((leaf, dict(zip(range(1, m + 1), rest))))
    return tuple(cherry), tuple(leafp)


class CompiledOperad:
    """A presentation specialized at parameter values, bound to its free operad."""

    def __init__(self, pres: OperadPresentation, params: Mapping[str, object] | None = None,
                 arity_cap: int = 5):
        self.pres = pres
        self.params = dict(params_key(params))
        missing = pres.parameters_used() - set(self.params)
        if missing:
            raise KeyError(f"unassigned parameters: {', '.join(sorted(missing))}")
        self.signature = Signature(pres.generators)
        self.free = _free_for(self.signature, arity_cap)
        self._gen_index = {g.name: i for i, g in enumerate(pres.generators)}
        self.relations = [self.combination_to_lc(r, 3) for r in pres.relations]
        self._ideals: dict[int, list[dict]] = {}
        self._echelons: dict[tuple, Echelon] = {}
        self._ranks: dict[tuple, object] = {}

    # conversion of parsed expressions -----------------------------------------

    def expr_to_tree(self, e: ExprNode):
        if isinstance(e, Leaf):
            return LETTERS.index(e.letter) + 1
        return (self._gen_index[e.gen], self.expr_to_tree(e.left), self.expr_to_tree(e.right))

    def coefficient(self, c: Poly) -> Fraction:
        return c.evaluate(self.params)

    def combination_to_lc(self, comb: Combination, n: int | None = None) -> dict:
        out: dict = {}
        for e, c in comb:
            ct, s = self.free.canonical_form(self.expr_to_tree(e))
            add_into(out, {ct: s * self.coefficient(c)})
        return out

    def element(self, text: str, n: int) -> dict:
        return self.combination_to_lc(parse_element(text, self.pres, n), n)

    def vector(self, lc: Mapping, n: int) -> dict:
        return self.free.to_vector(lc, n)

    # ideal generation -------------------------------------------------------

    def _seed(self) -> list[dict]:
        rows = []
        for rel in self.relations:
            for sigma in itertools.permutations((1, 2, 3)):
                w = self.free.act(sigma, rel)
                if w:
                    rows.append(w)
        return rows

    def _lift(self, rows: Sequence[dict], m: int) -> list[dict]:
        cherry_plans, leaf_plans = _graft_plans(m)
        canon = self.free.canonical_form
        kinds = self.free._kind
        out = []
        seen = set()
        for v in rows:
            items = list(v.items())
            for slot, (p, q), mapping in cherry_plans:
                for g, k in enumerate(kinds):
                    shapes = [(g, p, q)] if k else [(g, p, q), (g, q, p)]
                    for cherry in shapes:
                        mp = dict(mapping)
                        mp[slot] = cherry
                        w: dict = {}
                        for t, c in items:
                            ct, s = canon(_substitute(t, mp))
                            x = w.get(ct, 0) + s * c
                            if x:
                                w[ct] = x
                            else:
                                w.pop(ct, None)
                        _keep(w, out, seen)
            for leaf, mapping in leaf_plans:
                for g, k in enumerate(kinds):
                    sides = (0,) if k else (0, 1)
                    for side in sides:
                        w = {}
                        for t, c in items:
                            rt = relabel(t, mapping)
                            tree = (g, rt, leaf) if side == 0 else (g, leaf, rt)
                            ct, s = canon(tree)
                            x = w.get(ct, 0) + s * c
                            if x:
                                w[ct] = x
                            else:
                                w.pop(ct, None)
                        _keep(w, out, seen)
        return out

    def ideal_spanning_rows(self, n: int) -> list[dict]:
        """Independent (over Q) spanning vectors of I(n) as tree combinations, n <= EXACT_CAP.

        For larger n the raw lifted rows are returned without selection.
        """
        if n < 3:
            raise ArityError("ideal components start at arity 3")
        self.free._check_arity(n)
        if n in self._ideals:
            return self._ideals[n]
        raw = self._seed() if n == 3 else self._lift(self.ideal_spanning_rows(n - 1), n - 1)
        if n > EXACT_CAP:
            self._ideals[n] = raw
            return raw
        inc = IncrementalEchelon(self.free.dimension(n))
        chosen = [w for w in raw if inc.add(self.vector(w, n))]
        self._ideals[n] = chosen
        return chosen

    def ideal_matrix(self, n: int) -> SparseMatrix:
        return SparseMatrix((self.vector(w, n) for w in self.ideal_spanning_rows(n)),
                            self.free.dimension(n))

    def ideal_echelon(self, n: int, p: int | None = None) -> Echelon:
        key = (n, p)
        if key not in self._echelons:
            M = self.ideal_matrix(n)
            self._echelons[key] = echelon(M if p is None else M.mod(p))
        return self._echelons[key]

    def ideal_rank(self, n: int, mode: str = "auto", primes: Sequence[int] = DEFAULT_PRIMES):
        """``(rank, field description, stable)`` for the arity-n ideal component."""
        if n < 3 or not self.relations:
            return 0, "QQ", True
        if mode == "auto":
            mode = "exact" if n <= EXACT_CAP else "modular"
        key = (n, mode, tuple(primes))
        if key not in self._ranks:
            M = self.ideal_matrix(n)
            if mode == "exact":
                r = (self.ideal_echelon(n).rank if n <= EXACT_CAP else rank(M), "QQ", True)
            else:
                mr = multimodular_rank(M, primes)
                r = (mr.rank, "GF(" + ",".join(str(q) for q in sorted(mr.ranks)) + ")", mr.stable)
            self._ranks[key] = r
        return self._ranks[key]

    def in_ideal(self, lc: Mapping, n: int, p: int | None = None) -> bool:
        vec = self.vector(lc, n)
        if not vec:
            return True
        if n < 3 or not self.relations:
            return False
        return self.ideal_echelon(n, p).contains(vec)


@lru_cache(maxsize=64)
def _compiled(pres: OperadPresentation, key: tuple) -> CompiledOperad:
    return CompiledOperad(pres, dict(key))


def compile_operad(pres: OperadPresentation, params: Mapping[str, object] | None = None) -> CompiledOperad:
    return _compiled(pres, params_key(params))


# public operations -------------------------------------------------------------


@dataclass(frozen=True)
class IdealBasis:
    n: int
    matrix: SparseMatrix
    basis: tuple = field(repr=False)

    @property
    def rank(self) -> int:
        return self.matrix.nrows


def expand_ideal(pres: OperadPresentation, params: Mapping[str, object] | None, n: int) -> IdealBasis:
    op = compile_operad(pres, params)
    if n < 3:
        raise ArityError("ideal components start at arity 3")
    if n > EXACT_CAP:
        raise ArityError(f"independent ideal bases are only built up to arity {EXACT_CAP}")
    if not op.relations:
        return IdealBasis(n, SparseMatrix.zero(0, op.free.dimension(n)), tuple(op.free.basis(n)))
    return IdealBasis(n, op.ideal_matrix(n), tuple(op.free.basis(n)))


@dataclass
class ComponentReport:
    preset: str
    params: dict
    n: int
    dim_free: int
    rank_ideal: int
    dim: int
    field: str
    stable: bool = True
    elapsed_ms: float = 0.0

    def to_json(self) -> dict:
        return {
            "preset": self.preset,
            "params": {k: str(v) for k, v in self.params.items()},
            "n": self.n,
            "dim_free": self.dim_free,
            "rank_ideal": self.rank_ideal,
            "dim": self.dim,
            "field": self.field,
            "elapsed_ms": round(self.elapsed_ms, 1),
        }


def component_dimension(pres: OperadPresentation, params: Mapping[str, object] | None, n: int,
                        mode: str = "auto", primes: Sequence[int] = DEFAULT_PRIMES) -> ComponentReport:
    t0 = time.perf_counter()
    op = compile_operad(pres, params)
    if n == 1:
        dim_free, r, fld, stable = 1, 0, "QQ", True
    elif n == 2:
        dim_free, r, fld, stable = op.signature.binary_dimension(), 0, "QQ", True
    else:
        dim_free = op.free.dimension(n)
        r, fld, stable = op.ideal_rank(n, mode, primes)
    elapsed = (time.perf_counter() - t0) * 1000
    log.info("dim %s(%d) at %s = %d", pres.name, n, format_params(params), dim_free - r)
    return ComponentReport(pres.name, dict(op.params), n, dim_free, r, dim_free - r, fld, stable, elapsed)


def dimensions(pres: OperadPresentation, params: Mapping[str, object] | None, up_to: int,
               mode: str = "auto") -> list[int]:
    """Component dimensions for arities 1..up_to."""
    return [component_dimension(pres, params, n, mode).dim for n in range(1, up_to + 1)]


def in_ideal(pres: OperadPresentation, params: Mapping[str, object] | None, element) -> bool:
    """Membership of an element (text, parsed combination, or tree dict) in the ideal."""
    op = compile_operad(pres, params)
    if isinstance(element, str):
        n = _arity_of_text(element, pres)
        lc = op.element(element, n)
    elif isinstance(element, tuple):
        n = len({letter for e, _ in element for letter in _letters(e)})
        lc = op.combination_to_lc(element, n)
    else:
        lc = dict(element)
        if not lc:
            return True
        n = len(leaves(next(iter(lc))))
    if not lc:
        return True
    return op.in_ideal(lc, n)


def _letters(e: ExprNode) -> list[str]:
    if isinstance(e, Leaf):
        return [e.letter]
    return _letters(e.left) + _letters(e.right)


def _arity_of_text(text: str, pres: OperadPresentation) -> int:
    import re
    names = {g.name for g in pres.generators} | set(pres.params)
    letters = {w for w in re.findall(r"\b[a-j]\b", text) if w not in names}
    return max((LETTERS.index(x) + 1 for x in letters), default=1)


def character(pres: OperadPresentation, params: Mapping[str, object] | None, n: int,
              sigma: Sequence[int]) -> Fraction:
    """Trace of ``sigma`` on the quotient component O(n) (exact, n <= 4)."""
    if n > EXACT_CAP:
        raise ArityError(f"characters are computed exactly only up to arity {EXACT_CAP}")
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{n}")
    op = compile_operad(pres, params)
    free = op.free
    chi_free = 0
    for t in free.basis(n):
        ct, s = free.act_monomial(sigma, t)
        if ct == t:
            chi_free += s
    if n < 3 or not op.relations:
        return Fraction(chi_free)
    R, pivots = row_reduce(op.ideal_matrix(n))
    basis = free.basis(n)
    chi_ideal = Fraction(0)
    for r, j in zip(R.rows(), pivots):
        image = free.act(sigma, {basis[c]: x for c, x in r.items()})
        chi_ideal += image.get(basis[j], 0)
    return chi_free - chi_ideal


def check_morphism(source: OperadPresentation, target: OperadPresentation,
                   assignment: Mapping[str, object], params: Mapping[str, object] | None = None,
                   max_arity: int = 3) -> bool:
    """Do the source relations map into the target ideal under ``assignment``?

    ``assignment`` sends each source generator name to an arity-2 element of
    the target (text in letters a, b, or a parsed combination).
    """
    op = compile_operad(target, params)
    free = op.free
    images = {}
    swap = (2, 1)
    for g in source.generators:
        if g.name not in assignment:
            raise KeyError(f"no image for generator {g.name!r}")
        val = assignment[g.name]
        comb = parse_element(val, target, 2) if isinstance(val, str) else val
        img = op.combination_to_lc(comb, 2)
        flipped = free.act(swap, img)
        if g.symmetry is Symmetry.SYM and flipped != img:
            raise SymmetryViolation(f"{g.name} is symmetric but its image is not")
        if g.symmetry is Symmetry.ANTI and flipped != {t: -c for t, c in img.items()}:
            raise SymmetryViolation(f"{g.name} is antisymmetric but its image is not")
        images[g.name] = img
    src = CompiledOperad(source, {}, free.arity_cap) if not source.parameters_used() else compile_operad(source, params)
    names = [g.name for g in source.generators]

    def image_of(t) -> dict:
        if isinstance(t, int):
            return {t: 1}
        left = image_of(t[1])
        right = image_of(t[2])
        out: dict = {}
        for e, c in images[names[t[0]]].items():
            for tl, cl in left.items():
                for tr, cr in right.items():
                    ct, s = free.canonical_form(_substitute(e, {1: tl, 2: tr}))
                    add_into(out, {ct: s * c * cl * cr})
        return out

    for n in range(3, max_arity + 1):
        rows = src.relations if n == 3 else src.ideal_spanning_rows(n)
        for rel in rows:
            total: dict = {}
            for t, c in rel.items():
                add_into(total, image_of(t), c)
            if total and not op.in_ideal(total, n):
                return False
    return True


def _keep(w: dict, out: list, seen: set) -> None:
    if not w:
        return
    lead = min(w, key=repr)
    scale = w[lead]
    key = frozenset((t, c / scale) for t, c in w.items())
    if key in seen:
        return
    seen.add(key)
    out.append(w)
