"""Exact sparse linear algebra over the rationals and over prime fields.

Rows are stored as ``{column: value}`` dictionaries.  Over ``Q`` the values
are :class:`fractions.Fraction`; over ``F_p`` they are ints in ``[0, p)``.
A :class:`SparseMatrix` never changes after construction; every routine
returns fresh objects.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from sympy import isprime

log = logging.getLogger(__name__)

# Two primes above 2**31; multimodular checks default to these.
DEFAULT_PRIMES = (2147483659, 2147483693)


class DimensionMismatch(ValueError):
    pass


def _bits(x) -> int:
    if isinstance(x, Fraction):
        return x.numerator.bit_length() + x.denominator.bit_length()
    return int(x).bit_length()


class SparseMatrix:
    """Row-major sparse matrix over ``Q`` (``p is None``) or ``F_p``."""

    __slots__ = ("nrows", "ncols", "p", "_rows")

    def __init__(self, rows: Iterable[Mapping[int, object]], ncols: int, p: int | None = None):
        self.ncols = ncols
        self.p = p
        out = []
        for r in rows:
            clean = {}
            for c, v in r.items():
                if not 0 <= c < ncols:
                    raise IndexError(f"column {c} out of range for {ncols} columns")
                v = v % p if p is not None else Fraction(v)
                if v:
                    clean[c] = v
            out.append(tuple(sorted(clean.items())))
        self._rows = tuple(out)
        self.nrows = len(self._rows)

    # construction -----------------------------------------------------------

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]], p: int | None = None) -> SparseMatrix:
        ncols = len(data[0]) if data else 0
        return cls(({j: v for j, v in enumerate(row) if v} for row in data), ncols, p)

    @classmethod
    def identity(cls, n: int, p: int | None = None) -> SparseMatrix:
        return cls(({i: 1} for i in range(n)), n, p)

    @classmethod
    def zero(cls, nrows: int, ncols: int, p: int | None = None) -> SparseMatrix:
        return cls(({} for _ in range(nrows)), ncols, p)

    # access -----------------------------------------------------------------

    @property
    def field(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"

    def row(self, i: int) -> dict:
        return dict(self._rows[i])

    def rows(self) -> list[dict]:
        return [dict(r) for r in self._rows]

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    def to_dense(self) -> list[list]:
        zero = Fraction(0) if self.p is None else 0
        out = [[zero] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self._rows):
            for c, v in r:
                out[i][c] = v
        return out

    def transpose(self) -> SparseMatrix:
        cols: list[dict] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self._rows):
            for c, v in r:
                cols[c][i] = v
        return SparseMatrix(cols, self.nrows, self.p)

    def vstack(self, other: SparseMatrix) -> SparseMatrix:
        if other.ncols != self.ncols:
            raise DimensionMismatch(f"{self.ncols} vs {other.ncols} columns")
        return SparseMatrix(self.rows() + other.rows(), self.ncols, self.p)

    def mod(self, p: int) -> SparseMatrix:
        """Reduce a rational matrix modulo ``p``; raises ZeroDivisionError on a bad prime."""
        if self.p is not None:
            raise ValueError("matrix is already over a prime field")
        rows = []
        for r in self._rows:
            new = {}
            for c, v in r:
                if v.denominator % p == 0:
                    raise ZeroDivisionError(f"prime {p} divides a denominator")
                new[c] = v.numerator * pow(v.denominator, -1, p) % p
            rows.append(new)
        return SparseMatrix(rows, self.ncols, p)

    def denominators_lcm(self) -> int:
        d = 1
        for r in self._rows:
            for _, v in r:
                d = lcm(d, v.denominator)
        return d

    def to_matrix_market(self) -> str:
        """MatrixMarket coordinate text; rational rows are scaled to integers first."""
        lines = []
        entries = []
        for i, r in enumerate(self._rows):
            if self.p is None:
                d = 1
                for _, v in r:
                    d = lcm(d, v.denominator)
                for c, v in r:
                    entries.append((i + 1, c + 1, int(v * d)))
            else:
                for c, v in r:
                    entries.append((i + 1, c + 1, v))
        lines.append("%%MatrixMarket matrix coordinate integer general")
        if self.p is None:
            lines.append("% rows scaled to clear denominators; row space unchanged")
        else:
            lines.append(f"% entries modulo {self.p}")
        lines.append(f"{self.nrows} {self.ncols} {len(entries)}")
        lines.extend(f"{i} {j} {v}" for i, j, v in entries)
        return "\n".join(lines) + "\n"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.ncols, self.p, self._rows) == (other.ncols, other.p, other._rows)

    def __hash__(self) -> int:
        return hash((self.ncols, self.p, self._rows))

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols} over {self.field}, nnz={self.nnz()})"


# elimination kernels ---------------------------------------------------------


def _echelon(rows: list[dict], p: int | None) -> list[tuple[int, dict]]:
    """Right-looking elimination in column order.

    Returns ``(pivot_column, row)`` pairs sorted by pivot column, each row
    normalized to 1 at its pivot and zero at all earlier pivot columns.
    Among the candidate rows for a column the sparsest one with the
    smallest pivot entry is used.
    """
    active: dict[int, dict] = {i: dict(r) for i, r in enumerate(rows) if r}
    by_col: dict[int, set] = {}
    for i, r in active.items():
        for c in r:
            by_col.setdefault(c, set()).add(i)
    pivots = []
    for col in sorted(by_col):
        cand = [i for i in by_col[col] if i in active]
        if not cand:
            continue
        piv = min(cand, key=lambda i: (len(active[i]), _bits(active[i][col]), i))
        prow = active.pop(piv)
        if p is None:
            inv = 1 / prow[col]
            prow = {c: v * inv for c, v in prow.items()}
        else:
            inv = pow(prow[col], -1, p)
            prow = {c: v * inv % p for c, v in prow.items()}
        for i in cand:
            if i == piv:
                continue
            r = active[i]
            f = r[col]
            for c, v in prow.items():
                if c in r:
                    nv = r[c] - f * v
                    if p is not None:
                        nv %= p
                    if nv:
                        r[c] = nv
                    else:
                        del r[c]
                        by_col[c].discard(i)
                else:
                    r[c] = -f * v if p is None else (-f * v) % p
                    by_col.setdefault(c, set()).add(i)
            if not r:
                del active[i]
        pivots.append((col, prow))
    return pivots


def _rank_markowitz(rows: list[dict], p: int) -> int:
    """Rank over F_p with dynamic column choice (fewest live entries first)."""
    active: dict[int, dict] = {i: r for i, r in enumerate(rows) if r}
    by_col: dict[int, set] = {}
    for i, r in active.items():
        for c in r:
            by_col.setdefault(c, set()).add(i)
    heap = [(len(s), c) for c, s in by_col.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        cnt, col = heapq.heappop(heap)
        live = by_col.get(col)
        if not live:
            continue
        if len(live) != cnt:
            heapq.heappush(heap, (len(live), col))
            continue
        piv = min(live, key=lambda i: (len(active[i]), i))
        prow = active.pop(piv)
        for c in prow:
            by_col[c].discard(piv)
        inv = pow(prow[col], -1, p)
        others = list(live)
        touched = set()
        for i in others:
            r = active[i]
            f = r[col] * inv % p
            for c, v in prow.items():
                if c in r:
                    nv = (r[c] - f * v) % p
                    if nv:
                        r[c] = nv
                    else:
                        del r[c]
                        by_col[c].discard(i)
                else:
                    r[c] = (-f * v) % p
                    by_col[c].add(i)
                touched.add(c)
            if not r:
                del active[i]
        del by_col[col]
        rank += 1
        for c in touched:
            s = by_col.get(c)
            if s:
                heapq.heappush(heap, (len(s), c))
    return rank


def _reduce(v: dict, pivots: list[tuple[int, dict]], p: int | None) -> dict:
    v = dict(v)
    for col, prow in pivots:
        f = v.get(col)
        if not f:
            continue
        for c, x in prow.items():
            nv = v.get(c, 0) - f * x
            if p is not None:
                nv %= p
            if nv:
                v[c] = nv
            else:
                v.pop(c, None)
    return v


@dataclass(frozen=True)
class Echelon:
    """Cached echelon form of a matrix's row space."""

    ncols: int
    p: int | None
    pivots: tuple = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def pivot_columns(self) -> list[int]:
        return [c for c, _ in self.pivots]

    def reduce(self, v: Mapping[int, object]) -> dict:
        return _reduce(self._coerce(v), list(self.pivots), self.p)

    def contains(self, v: Mapping[int, object]) -> bool:
        return not self.reduce(v)

    def _coerce(self, v: Mapping[int, object]) -> dict:
        out = {}
        for c, x in v.items():
            if not 0 <= c < self.ncols:
                raise DimensionMismatch(f"column {c} outside {self.ncols}")
            x = Fraction(x) if self.p is None else _to_field(x, self.p)
            if x:
                out[c] = x
        return out


def _to_field(x, p: int) -> int:
    if isinstance(x, Fraction):
        if x.denominator % p == 0:
            raise ZeroDivisionError(f"prime {p} divides a denominator")
        return x.numerator * pow(x.denominator, -1, p) % p
    return int(x) % p


def echelon(M: SparseMatrix) -> Echelon:
    return Echelon(M.ncols, M.p, tuple(_echelon(M.rows(), M.p)))


# public operations -------------------------------------------------------------


def rank(M: SparseMatrix) -> int:
    """Rank over the matrix's own field."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    if M.p is not None:
        return _rank_markowitz(M.rows(), M.p)
    return len(_echelon(M.rows(), None))


def row_reduce(M: SparseMatrix) -> tuple[SparseMatrix, list[int]]:
    """Reduced row-echelon form (zero rows dropped) and its pivot columns."""
    piv = _echelon(M.rows(), M.p)
    p = M.p
    # back substitution, last pivot first
    for k in range(len(piv) - 1, -1, -1):
        col, prow = piv[k]
        for j in range(k):
            r = piv[j][1]
            f = r.get(col)
            if not f:
                continue
            for c, v in prow.items():
                nv = r.get(c, 0) - f * v
                if p is not None:
                    nv %= p
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
    return SparseMatrix([r for _, r in piv], M.ncols, p), [c for c, _ in piv]


def in_row_space(M: SparseMatrix, v: Mapping[int, object] | Sequence[object]) -> bool:
    if not isinstance(v, Mapping):
        if len(v) != M.ncols:
            raise DimensionMismatch(f"vector of length {len(v)} vs {M.ncols} columns")
        v = {i: x for i, x in enumerate(v) if x}
    return echelon(M).contains(v)


def nullspace_basis(M: SparseMatrix) -> list[dict]:
    """Basis of ``{v : M v = 0}`` as sparse column-indexed vectors."""
    R, pivots = row_reduce(M)
    pivset = set(pivots)
    one = Fraction(1) if M.p is None else 1
    basis = []
    rows = R.rows()
    for f in range(M.ncols):
        if f in pivset:
            continue
        v = {f: one}
        for r, pc in zip(rows, pivots):
            x = r.get(f)
            if x:
                v[pc] = -x if M.p is None else (-x) % M.p
        basis.append(v)
    return basis


def matvec(M: SparseMatrix, v: Mapping[int, object]) -> list:
    out = []
    for r in M.rows():
        s = sum((x * v.get(c, 0) for c, x in r.items()), Fraction(0) if M.p is None else 0)
        out.append(s if M.p is None else s % M.p)
    return out


@dataclass
class ModularRank:
    rank: int
    stable: bool
    ranks: dict = field(default_factory=dict)
    skipped: list = field(default_factory=list)


def multimodular_rank(M: SparseMatrix, primes: Sequence[int] = DEFAULT_PRIMES) -> ModularRank:
    """Rank of a rational matrix from its reductions modulo several primes.

    Reduction mod p can only lose rank, so the maximum over primes is
    reported; ``stable`` means the two largest usable primes agree.
    """
    if M.p is not None:
        raise ValueError("multimodular_rank expects a rational matrix")
    if len(primes) < 2:
        raise ValueError("need at least two primes")
    for q in primes:
        if q <= 2**20 or not isprime(q):
            raise ValueError(f"{q} is not a prime above 2^20")
    ranks = {}
    skipped = []
    for q in primes:
        try:
            Mq = M.mod(q)
        except ZeroDivisionError:
            log.warning("skipping prime %d: divides a denominator", q)
            skipped.append(q)
            continue
        ranks[q] = rank(Mq)
        log.debug("rank mod %d = %d", q, ranks[q])
    if not ranks:
        raise ValueError("every prime divides a denominator")
    used = sorted(ranks)
    stable = len(used) >= 2 and ranks[used[-1]] == ranks[used[-2]]
    return ModularRank(max(ranks.values()), stable, ranks, skipped)


class IncrementalEchelon:
    """Grow a row space one vector at a time, remembering which inputs were new."""

    def __init__(self, ncols: int, p: int | None = None):
        self.ncols = ncols
        self.p = p
        self._piv: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self._piv)

    def reduce(self, v: Mapping[int, object]) -> dict:
        p = self.p
        v = {c: (Fraction(x) if p is None else _to_field(x, p)) for c, x in v.items()}
        v = {c: x for c, x in v.items() if x}
        while v:
            hit = None
            for c in sorted(v):
                if c in self._piv:
                    hit = c
                    break
            if hit is None:
                return v
            f = v[hit]
            for c, x in self._piv[hit].items():
                nv = v.get(c, 0) - f * x
                if p is not None:
                    nv %= p
                if nv:
                    v[c] = nv
                else:
                    v.pop(c, None)
        return v

    def add(self, v: Mapping[int, object]) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        lead = min(r)
        inv = 1 / r[lead] if self.p is None else pow(r[lead], -1, self.p)
        self._piv[lead] = {c: (x * inv if self.p is None else x * inv % self.p) for c, x in r.items()}
        return True

    def contains(self, v: Mapping[int, object]) -> bool:
        return not self.reduce(v)
