"""Boundary-matrix reduction and the incremental partially reduced matrix used by the search."""
from __future__ import annotations

import copy
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .barcode import INF, Barcode, Interval
from .complex import CellComplex, ComplexError, FilterLike, filter_violation
from .field import GF2, Field, rank

ZERO = -1
BLOCKED = -2


class Status(NamedTuple):
    kind: str  # "zero" | "pivot" | "blocked"
    partner: Optional[int] = None


def _status(code: int) -> Status:
    if code == ZERO:
        return Status("zero")
    if code == BLOCKED:
        return Status("blocked")
    return Status("pivot", code)


@dataclass
class Reduction:
    order: Tuple[int, ...]
    pairs: List[Tuple[int, int]]
    essential: List[int]
    barcode: Barcode


def reduce_standard(C: CellComplex, order: Sequence[int], field: Field = GF2) -> Reduction:
    """Left-to-right column reduction of the boundary matrix in the given cell order.

    The barcode is expressed in 1-based positions of ``order``.
    """
    order = tuple(order)
    if sorted(order) != list(range(len(C))):
        raise ValueError("order must be a permutation of the cells")
    pos = {c: k for k, c in enumerate(order)}
    pivots: Dict[int, Tuple[int, dict]] = {}
    pairs = []
    births = []
    for k, c in enumerate(order):
        col = {}
        for r, coef in C.boundary[c]:
            v = field(coef)
            if v == 0:
                continue
            if pos[r] >= k:
                raise ValueError(f"order not boundary-closed: {C.names[c]} before its face {C.names[r]}")
            col[pos[r]] = v
        while col:
            low = max(col)
            if low not in pivots:
                break
            _, pcol = pivots[low]
            field.axpy(col, field.neg(field.div(col[low], pcol[low])), pcol)
        if col:
            low = max(col)
            pivots[low] = (k, col)
            pairs.append((order[low], c))
        else:
            births.append(c)
    dead = {b for b, _ in pairs}
    essential = [c for c in births if c not in dead]
    ivs = [Interval(C.dims[b], pos[b] + 1, pos[d] + 1) for b, d in pairs]
    ivs += [Interval(C.dims[b], pos[b] + 1, INF) for b in essential]
    return Reduction(order, pairs, essential, Barcode(ivs))


def filter_order(C: CellComplex, vals: Sequence) -> List[int]:
    """Cells sorted by value; ties broken by dimension, which is boundary-consistent."""
    return sorted(range(len(C)), key=lambda i: (vals[i], C.dims[i], i))


def compute_barcode(C: CellComplex, f: FilterLike, field: Field = GF2) -> Barcode:
    """Barcode of the sublevel-set filtration of ``f`` in filter values; zero-length bars dropped."""
    vals = C.values(f)
    bad = filter_violation(C, vals, "chain", check_range=False, field=field)
    if bad is not None:
        raise ComplexError(f"invalid filter: {bad[0]} enters before its face {bad[1]}")
    red = reduce_standard(C, filter_order(C, vals), field)
    ivs = []
    for b, d in red.pairs:
        if vals[b] != vals[d]:
            ivs.append(Interval(C.dims[b], vals[b], vals[d]))
    ivs += [Interval(C.dims[b], vals[b], INF) for b in red.essential]
    return Barcode(ivs)


def rank_boundary(C: CellComplex, p: int, field: Field = GF2) -> int:
    """Rank of the boundary map restricted to p-cells."""
    cols = [dict(C.boundary[i]) for i in C.cells_of_dim(p)]
    return rank(cols, field)


def betti_numbers(C: CellComplex, field: Field = GF2) -> List[int]:
    ranks = [rank_boundary(C, p, field) for p in range(C.dim + 2)]
    counts = C.cell_counts()
    return [counts[p] - ranks[p] - ranks[p + 1] for p in range(C.dim + 1)]


class _Mark:
    __slots__ = ("log_len", "cache")

    def __init__(self, log_len: int, cache: dict):
        self.log_len = log_len
        self.cache = cache


class DeltaState:
    """Partially reduced matrix ``delta = boundary * V`` for a committed prefix order.

    Rows of committed cells come first, in commit order; rows of uncommitted
    cells come after all of them. Changes are recorded in an undo log so a
    depth-first search can ``snapshot``/``restore`` instead of copying.
    With ``track_v`` the matrix ``V`` is kept explicitly, for testing.
    """

    def __init__(self, C: CellComplex, field: Field = GF2, track_v: bool = False):
        self.C = C
        self.field = field
        n = len(C)
        self.n = n
        self.cols: List[Dict[int, object]] = []
        for i in range(n):
            col = {}
            for r, c in C.boundary[i]:
                v = field(c)
                if v != 0:
                    col[r] = v
            self.cols.append(col)
        self.pos: List[Optional[int]] = [None] * n
        self.order: List[int] = []
        self.pivot_of_row: Dict[int, int] = {}
        self.pairs: List[Tuple[int, int]] = []
        self.V: Optional[List[Dict[int, object]]] = (
            [{i: field.one} for i in range(n)] if track_v else None
        )
        self._log: List[tuple] = []
        self._marks: List[_Mark] = []
        self._cache: Dict[int, int] = {}
        self._nnz = sum(len(c) for c in self.cols)
        self._payload = 0
        self.peak_entries = self._nnz

    # -- queries ---------------------------------------------------------

    def committed(self, i: int) -> bool:
        return self.pos[i] is not None

    def _rank(self, r: int) -> int:
        p = self.pos[r]
        return p if p is not None else self.n + r

    def _reduce(self, i: int, want_col: bool):
        """Reduce column ``i`` against committed pivot columns on a scratch copy."""
        field = self.field
        col = dict(self.cols[i])
        v = dict(self.V[i]) if (want_col and self.V is not None) else None
        pos = self.pos
        piv = self.pivot_of_row
        while col:
            low = max(col, key=self._rank)
            if pos[low] is None:
                return BLOCKED, col, v
            owner = piv.get(low)
            if owner is None:
                return low, col, v
            ocol = self.cols[owner]
            c = field.neg(field.div(col[low], ocol[low]))
            field.axpy(col, c, ocol)
            if v is not None:
                field.axpy(v, c, self.V[owner])  # type: ignore[index]
        return ZERO, col, v

    def status(self, i: int) -> int:
        """``ZERO``, ``BLOCKED`` or the row index of the (unpaired, committed) low."""
        code = self._cache.get(i)
        if code is None:
            if self.pos[i] is not None:
                raise ValueError(f"cell {self.C.names[i]} already committed")
            code = self._reduce(i, False)[0]
            self._cache[i] = code
        return code

    def candidate_status(self, i: int) -> Status:
        return _status(self.status(i))

    def low(self, i: int) -> Optional[int]:
        col = self.cols[i]
        return max(col, key=self._rank) if col else None

    # -- mutation --------------------------------------------------------

    def _set_col(self, i: int, col: dict, v: Optional[dict]) -> None:
        old = self.cols[i]
        self._log.append(("col", i, old, None if self.V is None else self.V[i]))
        self._nnz += len(col) - len(old)
        self._payload += 1 + len(old)
        self.cols[i] = col
        if self.V is not None and v is not None:
            self.V[i] = v

    def _append(self, i: int) -> None:
        self._log.append(("commit", i))
        self._payload += 1
        self.pos[i] = len(self.order)
        self.order.append(i)
        self._cache = {}

    def commit_birth(self, i: int) -> None:
        code, col, v = self._reduce(i, True)
        if code != ZERO:
            raise ValueError(f"commit_birth({self.C.names[i]}): column is {_status(code).kind}")
        self._set_col(i, col, v)
        self._append(i)
        self._touch()

    def commit_death(self, i: int, partner: int) -> None:
        code, col, v = self._reduce(i, True)
        if code != partner:
            raise ValueError(
                f"commit_death({self.C.names[i]}, {self.C.names[partner]}): status is {_status(code)}"
            )
        self._set_col(i, col, v)
        self._append(i)
        self._log.append(("pivot", partner))
        self._payload += 1
        self.pivot_of_row[partner] = i
        self.pairs.append((partner, i))
        field = self.field
        piv = col[partner]
        for c in range(self.n):
            if self.pos[c] is None and partner in self.cols[c]:
                new = dict(self.cols[c])
                k = field.neg(field.div(new[partner], piv))
                field.axpy(new, k, col)
                nv = None
                if self.V is not None:
                    nv = dict(self.V[c])
                    field.axpy(nv, k, self.V[i])
                self._set_col(c, new, nv)
        self._touch()

    def _touch(self) -> None:
        live = self._nnz + self._payload
        if live > self.peak_entries:
            self.peak_entries = live

    def snapshot(self) -> _Mark:
        m = _Mark(len(self._log), self._cache)
        self._marks.append(m)
        return m

    def restore(self, token: _Mark) -> None:
        if not self._marks or self._marks[-1] is not token:
            raise RuntimeError("restore out of snapshot stack order")
        self._marks.pop()
        log = self._log
        while len(log) > token.log_len:
            entry = log.pop()
            kind = entry[0]
            if kind == "col":
                _, i, col, v = entry
                self._nnz += len(col) - len(self.cols[i])
                self._payload -= 1 + len(col)
                self.cols[i] = col
                if self.V is not None:
                    self.V[i] = v
            elif kind == "commit":
                self._payload -= 1
                i = entry[1]
                self.pos[i] = None
                self.order.pop()
            else:
                self._payload -= 1
                del self.pivot_of_row[entry[1]]
                self.pairs.pop()
        self._cache = token.cache

    def fork(self) -> "DeltaState":
        """Independent deep copy with an empty undo log, for exploring a branch elsewhere."""
        other = copy.copy(self)
        other.cols = [dict(c) for c in self.cols]
        other.pos = list(self.pos)
        other.order = list(self.order)
        other.pivot_of_row = dict(self.pivot_of_row)
        other.pairs = list(self.pairs)
        other.V = None if self.V is None else [dict(v) for v in self.V]
        other._log = []
        other._marks = []
        other._cache = {}
        other._payload = 0
        return other

    def live_entries(self) -> int:
        """Stored scalars: matrix entries plus undo-log payload (memory proxy)."""
        return self._nnz + self._payload

    def fingerprint(self) -> tuple:
        return (
            tuple(tuple(sorted(c.items())) for c in self.cols),
            tuple(self.pos),
            tuple(sorted(self.pivot_of_row.items())),
            tuple(self.pairs),
        )


def delta_init(C: CellComplex, field: Field = GF2, track_v: bool = False) -> DeltaState:
    return DeltaState(C, field, track_v)
