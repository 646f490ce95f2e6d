"""Tree monomials of the free symmetric operad on binary generators.

A tree is either a leaf label (a positive int) or a triple
``(generator_index, left, right)``.  Canonical trees order the two children
of a symmetric or antisymmetric vertex so that the subtree holding the
smaller leaf label comes first; each swap at an antisymmetric vertex
contributes a sign.  Linear combinations are plain dicts ``{tree: coeff}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .dsl import GeneratorSymbol, Symmetry

DEFAULT_ARITY_CAP = 5


class ArityError(ValueError):
    pass


def leaves(t) -> list[int]:
    if isinstance(t, int):
        return [t]
    return leaves(t[1]) + leaves(t[2])


def min_leaf(t) -> int:
    if isinstance(t, int):
        return t
    return min(min_leaf(t[1]), min_leaf(t[2]))


def preorder_key(t) -> tuple:
    """Serialization used as the total order on monomials."""
    out = []
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, int):
            out.append(x)
        else:
            out.append(-1 - x[0])
            stack.append(x[2])
            stack.append(x[1])
    return tuple(out)


def relabel(t, mapping):
    if isinstance(t, int):
        return mapping[t]
    return (t[0], relabel(t[1], mapping), relabel(t[2], mapping))


@dataclass(frozen=True)
class Signature:
    generators: tuple[GeneratorSymbol, ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("signature needs at least one generator")
        if any(g.arity != 2 for g in self.generators):
            raise ValueError("only binary generators are supported")

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise KeyError(name)

    def symmetry(self, i: int) -> Symmetry:
        return self.generators[i].symmetry

    def dual(self) -> Signature:
        flip = {Symmetry.SYM: Symmetry.ANTI, Symmetry.ANTI: Symmetry.SYM, Symmetry.NONE: Symmetry.NONE}
        return Signature(tuple(
            GeneratorSymbol(g.name + "_d", 2, flip[g.symmetry]) for g in self.generators
        ))

    def binary_dimension(self) -> int:
        return sum(2 if g.symmetry is Symmetry.NONE else 1 for g in self.generators)


class FreeOperad:
    """Canonical forms, bases, compositions and the S_n action for one signature."""

    def __init__(self, signature: Signature, arity_cap: int = DEFAULT_ARITY_CAP):
        self.signature = signature
        self.arity_cap = arity_cap
        # per-generator: 0 nonsymmetric, +1 symmetric, -1 antisymmetric
        self._kind = tuple(
            0 if g.symmetry is Symmetry.NONE else (1 if g.symmetry is Symmetry.SYM else -1)
            for g in signature.generators
        )
        self._basis: dict[int, list] = {}
        self._index: dict[int, dict] = {}

    # canonical form ---------------------------------------------------------

    def _canon(self, t):
        if isinstance(t, int):
            return t, 1, t
        g, l, r = t
        cl, sl, ml = self._canon(l)
        cr, sr, mr = self._canon(r)
        s = sl * sr
        k = self._kind[g]
        if k == 0:
            return (g, cl, cr), s, min(ml, mr)
        if mr < ml:
            if k == -1:
                s = -s
            return (g, cr, cl), s, mr
        return (g, cl, cr), s, ml

    def canonical_form(self, t) -> tuple[object, int]:
        """Return ``(canonical tree, sign)`` with ``t == sign * canonical``."""
        c, s, _ = self._canon(t)
        return c, s

    def is_canonical(self, t) -> bool:
        c, s = self.canonical_form(t)
        return c == t and s == 1

    # enumeration ------------------------------------------------------------

    def _trees_on(self, labels: tuple[int, ...]) -> list:
        if len(labels) == 1:
            return [labels[0]]
        out = []
        first, rest = labels[0], labels[1:]
        subsets = []
        for k in range(0, len(rest)):
            for comb in itertools.combinations(rest, k):
                left = (first,) + comb
                right = tuple(x for x in rest if x not in comb)
                if right:
                    subsets.append((left, right))
        cache: dict = {}

        def trees(ls):
            if ls not in cache:
                cache[ls] = self._trees_on(ls)
            return cache[ls]

        for g, k in enumerate(self._kind):
            for left, right in subsets:
                for tl in trees(left):
                    for tr in trees(right):
                        out.append((g, tl, tr))
                        if k == 0:
                            out.append((g, tr, tl))
        return out

    def _check_arity(self, n: int) -> None:
        if n < 1:
            raise ArityError(f"arity {n} < 1")
        if n > self.arity_cap:
            raise ArityError(f"arity {n} exceeds cap {self.arity_cap}")

    def basis(self, n: int) -> list:
        """All canonical monomials of arity ``n`` in the fixed total order."""
        self._check_arity(n)
        if n not in self._basis:
            b = sorted(self._trees_on(tuple(range(1, n + 1))), key=preorder_key)
            self._basis[n] = b
            self._index[n] = {t: i for i, t in enumerate(b)}
        return self._basis[n]

    def index(self, n: int) -> dict:
        self.basis(n)
        return self._index[n]

    def dimension(self, n: int) -> int:
        return len(self.basis(n))

    # composition and action -------------------------------------------------

    def compose(self, m1, i: int, m2) -> tuple[object, int]:
        """Partial composition ``m1 ∘_i m2`` with the standard relabeling."""
        k = len(leaves(m1))
        m = len(leaves(m2))
        if not 1 <= i <= k:
            raise IndexError(f"slot {i} out of range 1..{k}")
        inner = relabel(m2, {j: j + i - 1 for j in range(1, m + 1)})

        def graft(t):
            if isinstance(t, int):
                if t == i:
                    return inner
                return t if t < i else t + m - 1
            return (t[0], graft(t[1]), graft(t[2]))

        return self.canonical_form(graft(m1))

    def act_monomial(self, sigma: Sequence[int], t) -> tuple[object, int]:
        """Relabel leaf ``j`` as ``sigma[j-1]`` and canonicalize."""
        return self.canonical_form(relabel(t, {j: sigma[j - 1] for j in range(1, len(sigma) + 1)}))

    def act(self, sigma: Sequence[int], v: Mapping) -> dict:
        n = len(sigma)
        if sorted(sigma) != list(range(1, n + 1)):
            raise ValueError(f"{sigma} is not a permutation of 1..{n}")
        out: dict = {}
        mapping = {j: sigma[j - 1] for j in range(1, n + 1)}
        for t, c in v.items():
            if len(leaves(t)) != n:
                raise ArityError("permutation size does not match arity")
            ct, s = self.canonical_form(relabel(t, mapping))
            out[ct] = out.get(ct, 0) + s * c
        return {t: c for t, c in out.items() if c}

    # conversions ------------------------------------------------------------

    def to_vector(self, v: Mapping, n: int) -> dict[int, object]:
        idx = self.index(n)
        out: dict = {}
        for t, c in v.items():
            ct, s = self.canonical_form(t)
            j = idx[ct]
            out[j] = out.get(j, 0) + s * c
        return {j: c for j, c in out.items() if c}

    def from_vector(self, vec: Mapping[int, object], n: int) -> dict:
        b = self.basis(n)
        return {b[j]: c for j, c in vec.items() if c}

    def format(self, t) -> str:
        if isinstance(t, int):
            return str(t)
        return f"{self.signature.generators[t[0]].name}({self.format(t[1])},{self.format(t[2])})"

    def format_signed(self, t, sign: int = 1) -> str:
        return ("-" if sign < 0 else "+") + self.format(t)

    def format_combination(self, v: Mapping) -> str:
        if not v:
            return "0"
        parts = []
        for t in sorted(v, key=preorder_key):
            c = Fraction(v[t])
            mag = -c if c < 0 else c
            coeff = "" if mag == 1 else f"{mag}*"
            parts.append(("- " if c < 0 else "+ ") + coeff + self.format(t))
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def add_into(acc: dict, v: Mapping, scale=1) -> dict:
    for t, c in v.items():
        x = acc.get(t, 0) + scale * c
        if x:
            acc[t] = x
        else:
            acc.pop(t, None)
    return acc


def all_raw_trees(n_generators: int, labels: Sequence[int]) -> Iterable:
    """Every planar binary tree on ``labels`` (all orders) with all generator labelings.

    Brute-force source for checking enumeration counts.
    """
    labels = tuple(labels)
    if len(labels) == 1:
        yield labels[0]
        return
    for perm in set(itertools.permutations(labels)):
        for split in range(1, len(perm)):
            for tl in _planar(n_generators, perm[:split]):
                for tr in _planar(n_generators, perm[split:]):
                    for g in range(n_generators):
                        yield (g, tl, tr)


def _planar(ng, seq):
    if len(seq) == 1:
        yield seq[0]
        return
    for split in range(1, len(seq)):
        for tl in _planar(ng, seq[:split]):
            for tr in _planar(ng, seq[split:]):
                for g in range(ng):
                    yield (g, tl, tr)
