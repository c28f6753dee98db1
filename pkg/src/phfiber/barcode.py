"""Barcodes: normalization, truncation, monotone push-forward and special families."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

INF = math.inf


class Interval(NamedTuple):
    degree: int
    birth: object
    death: object

    @property
    def finite(self) -> bool:
        return self.death != INF


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, Mapping):
        d = x["death"]
        death = INF if d in ("inf", "Infinity", None) or d == INF else _num(d)
        b = x["birth"]
        birth = -INF if b in ("-inf",) or b == -INF else _num(b)
        return Interval(int(x.get("dim", x.get("degree", 0))), birth, death)
    deg, b, d = x
    return Interval(int(deg), b, d)


def _num(v):
    if isinstance(v, str):
        if v in ("inf", "+inf"):
            return INF
        if v == "-inf":
            return -INF
        return Fraction(v)
    if isinstance(v, float) and math.isinf(v):
        return v
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10**12) if v != int(v) else int(v)
    return v


@dataclass(frozen=True)
class Barcode:
    """Multiset of intervals, stored sorted; an interval's position is its identity."""

    intervals: Tuple[Interval, ...] = ()

    def __init__(self, intervals: Iterable = ()):
        ivs = tuple(sorted((_as_interval(x) for x in intervals), key=_sort_key))
        for iv in ivs:
            if iv.degree < 0:
                raise ValueError(f"negative degree in {iv}")
            if not iv.birth < iv.death:
                raise ValueError(f"interval with birth >= death: {iv}")
        object.__setattr__(self, "intervals", ivs)

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __getitem__(self, k: int) -> Interval:
        return self.intervals[k]

    @property
    def endpoints(self) -> List:
        """Sorted distinct finite endpoints."""
        pts = set()
        for iv in self.intervals:
            pts.add(iv.birth)
            if iv.finite:
                pts.add(iv.death)
        pts.discard(-INF)
        return sorted(pts)

    @property
    def dim(self) -> int:
        return len(self.endpoints)

    @property
    def max_degree(self) -> int:
        return max((iv.degree for iv in self.intervals), default=-1)

    def is_normalized(self) -> bool:
        return self.endpoints == list(range(1, self.dim + 1))

    def degree(self, p: int) -> List[Interval]:
        return [iv for iv in self.intervals if iv.degree == p]

    def finite_count(self, p: int) -> int:
        return sum(1 for iv in self.intervals if iv.degree == p and iv.finite)

    def __str__(self) -> str:
        def fmt(v):
            return "inf" if v == INF else ("-inf" if v == -INF else str(v))

        return "{" + ", ".join(f"({fmt(b)},{fmt(d)})_{p}" for p, b, d in self.intervals) + "}"

    def to_json(self) -> dict:
        return {"intervals": [_interval_json(iv) for iv in self.intervals]}


def _json_value(v):
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return v


def _interval_json(iv: Interval) -> dict:
    return {"dim": iv.degree, "birth": _json_value(iv.birth), "death": _json_value(iv.death)}


def _sort_key(iv: Interval):
    return (iv.degree, iv.birth, iv.death)


def normalize(raw: Union[Barcode, Iterable]) -> Tuple[Barcode, Tuple]:
    """Relabel finite endpoints by rank to ``1..dim D``.

    Returns the normalized barcode and the record ``r`` with ``r[k-1]`` the
    original value of normalized endpoint ``k``.
    """
    B = raw if isinstance(raw, Barcode) else Barcode(raw)
    record = tuple(B.endpoints)
    rank = {v: k + 1 for k, v in enumerate(record)}
    out = Barcode(
        Interval(iv.degree, rank.get(iv.birth, iv.birth), rank.get(iv.death, iv.death)) for iv in B
    )
    return out, record


def denormalize(D: Barcode, record: Sequence) -> Barcode:
    return Barcode(
        Interval(
            iv.degree,
            record[iv.birth - 1] if iv.birth not in (INF, -INF) else iv.birth,
            record[iv.death - 1] if iv.death not in (INF, -INF) else iv.death,
        )
        for iv in D
    )


def truncate(D: Barcode, j: int) -> Barcode:
    """Bars ending before ``j`` kept; bars alive at ``j`` made infinite; the rest dropped."""
    out = []
    for p, b, d in D:
        if d < j:
            out.append(Interval(p, b, d))
        elif b < j:
            out.append(Interval(p, b, INF))
    return Barcode(out)


def push_forward(psi: Union[Callable, Mapping], D: Barcode) -> Barcode:
    """Image of ``D`` under a non-decreasing map; collapsed intervals vanish."""
    f = psi.__getitem__ if isinstance(psi, Mapping) else psi

    def ap(v):
        return v if v in (INF, -INF) else f(v)

    out = []
    for p, b, d in D:
        nb, nd = ap(b), ap(d)
        if nb != nd:
            out.append(Interval(p, nb, nd))
    return Barcode(out)


def canonical_barcode_DK(C, field) -> Barcode:
    """One (1, inf) bar in degree 0 and beta_p copies of (2, inf) in each degree p >= 1."""
    from .persistence import betti_numbers

    beta = betti_numbers(C, field)
    if not beta or beta[0] != 1:
        raise ValueError("complex is not connected")
    out = [Interval(0, 1, INF)]
    for p, b in enumerate(beta):
        if p >= 1:
            out.extend(Interval(p, 2, INF) for _ in range(b))
    return Barcode(out)


def _multiset_perms(counts: Dict[int, int], n: int) -> Iterator[Tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for k in sorted(counts):
        if counts[k]:
            counts[k] -= 1
            for rest in _multiset_perms(counts, n - 1):
                yield (k,) + rest
            counts[k] += 1


def elementary_degree_counts(C) -> Optional[List[int]]:
    """Number of finite bars per degree forced by the cell counts, or None if infeasible."""
    n = len(C)
    if n % 2 == 0:
        return None
    c = C.cell_counts()
    m = []
    prev = 0
    for q, cq in enumerate(c):
        mq = cq - (1 if q == 0 else 0) - prev
        if mq < 0:
            return None
        m.append(mq)
        prev = mq
    if m[-1] != 0:
        return None
    return m


def elementary_barcodes(C) -> Iterator[Barcode]:
    """Lazily enumerate the elementary barcodes compatible with the cell counts of ``C``."""
    m = elementary_degree_counts(C)
    if m is None:
        return
    n = (len(C) - 1) // 2
    counts = {q: k for q, k in enumerate(m) if k}
    for seq in _multiset_perms(counts, n):
        ivs = [Interval(0, 1, INF)]
        ivs += [Interval(p, 2 * i, 2 * i + 1) for i, p in enumerate(seq, start=1)]
        yield Barcode(ivs)


SOURCES = ("homology", "cohomology", "relative_homology", "relative_cohomology")


def convert_barcode(B: Barcode, source: str) -> Barcode:
    """Homology barcode determined by a (relative) (co)homology barcode."""
    if source not in SOURCES:
        raise ValueError(f"unknown barcode source {source!r}")
    if source in ("homology", "cohomology"):
        return B
    out = []
    for p, b, d in B:
        if b == -INF:
            out.append(Interval(p, d, INF))
        elif d == INF:
            raise ValueError(f"relative barcode cannot contain a bar ({b}, inf)")
        else:
            if p == 0:
                raise ValueError(f"relative finite bar ({b},{d}) in degree 0")
            out.append(Interval(p - 1, b, d))
    return Barcode(out)
