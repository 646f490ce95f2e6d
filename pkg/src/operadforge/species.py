"""Dimensions of composition products of S-modules and the arity-4 ξ check."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import prod
from typing import Iterator, Mapping, Sequence

from .dsl import OperadPresentation
from .engine import component_dimension

MAX_PARTITION_SIZE = 8


@dataclass
class DimensionTable:
    name: str
    dims: dict[int, int] = field(default_factory=dict)

    @classmethod
    def from_list(cls, name: str, values: Sequence[int]) -> DimensionTable:
        return cls(name, {n: v for n, v in enumerate(values, start=1)})

    def __getitem__(self, n: int) -> int:
        try:
            return self.dims[n]
        except KeyError:
            raise KeyError(f"{self.name}: no dimension recorded for arity {n}") from None

    def to_json(self) -> list[int]:
        return [self.dims[n] for n in sorted(self.dims)]


def _as_table(t, name: str) -> DimensionTable:
    if isinstance(t, DimensionTable):
        return t
    if isinstance(t, Mapping):
        return DimensionTable(name, dict(t))
    return DimensionTable.from_list(name, t)


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """Set partitions of {1..n} as restricted growth strings a_1..a_n."""
    if n == 0:
        yield ()
        return
    a = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(a)
            return
        for v in range(top + 2):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    a[0] = 0
    yield from rec(1, 0)


def block_sizes(rgs: Sequence[int]) -> list[int]:
    return list(Counter(rgs).values())


def species_compose_dims(dimsA, dimsB, n: int) -> int:
    """dim (A∘B)(n) = sum over set partitions of dimA(#blocks) * prod dimB(|block|)."""
    if n > MAX_PARTITION_SIZE:
        raise ValueError(f"set-partition enumeration is capped at n={MAX_PARTITION_SIZE}")
    A = _as_table(dimsA, "A")
    B = _as_table(dimsB, "B")
    total = 0
    for rgs in restricted_growth_strings(n):
        sizes = block_sizes(rgs)
        total += A[len(sizes)] * prod(B[s] for s in sizes)
    return total


@dataclass
class XiResult:
    passed: bool
    composite_dim: int
    target_dim: int
    dims_a: list[int]
    dims_b: list[int]

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "dim_AoB_4": self.composite_dim,
            "dim_C_4": self.target_dim,
            "dims_A": self.dims_a,
            "dims_B": self.dims_b,
        }


def xi_check(presA: OperadPresentation, presB: OperadPresentation, presC: OperadPresentation,
             params: Mapping[str, object] | None = None, arity: int = 4) -> XiResult:
    """Compare dim (A∘B)(4) with dim C(4).

    Equality is the dimensional form of ξ being an isomorphism, which also
    rules out nontrivial degree-3 relations in the associated graded operad.
    """
    pa = {k: v for k, v in (params or {}).items() if k in presA.params}
    pb = {k: v for k, v in (params or {}).items() if k in presB.params}
    dims_a = [component_dimension(presA, pa, k).dim for k in range(1, arity + 1)]
    dims_b = [component_dimension(presB, pb, k).dim for k in range(1, arity + 1)]
    comp = species_compose_dims(dims_a, dims_b, arity)
    target = component_dimension(presC, params, arity).dim
    return XiResult(comp == target, comp, target, dims_a, dims_b)
