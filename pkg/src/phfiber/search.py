"""Depth-first enumeration of the classifications compatible with a barcode."""
from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Tuple, Union

from .barcode import INF, Barcode
from .complex import CellComplex
from .field import GF2, Field
from .persistence import BLOCKED, ZERO, DeltaState, rank_boundary


@dataclass(frozen=True)
class Classification:
    """Consecutive classes of a total cell order plus the endpoint assignment.

    ``endpoints[j - 1]`` is the index of the class carrying endpoint ``j``;
    every other class is free. ``pairing`` maps each interval of the barcode
    (by position) to its critical cells and is informational only.
    """

    classes: Tuple[Tuple[int, ...], ...]
    endpoints: Tuple[int, ...]
    pairing: Tuple[Tuple[Optional[int], Optional[int]], ...] = dc_field(default=(), compare=False)

    @property
    def order(self) -> Tuple[int, ...]:
        return tuple(c for cls in self.classes for c in cls)

    def is_endpoint_class(self, k: int) -> bool:
        return k in self.endpoints

    def key(self) -> tuple:
        """Polyhedron identity: class cell-sets and endpoint positions."""
        return (tuple(frozenset(c) for c in self.classes), self.endpoints)

    def named(self, C: CellComplex) -> List[List[str]]:
        return [[C.names[c] for c in cls] for cls in self.classes]


@dataclass
class Limits:
    max_results: Optional[int] = None
    max_nodes: Optional[int] = None

    def __post_init__(self) -> None:
        for name in ("max_results", "max_nodes"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_env(cls, max_results: Optional[int] = None, max_nodes: Optional[int] = None) -> "Limits":
        """Explicit values win; then PHFIBER_MAX_RESULTS / PHFIBER_MAX_NODES; then the defaults."""
        if max_results is None:
            max_results = int(os.environ.get("PHFIBER_MAX_RESULTS", DEFAULT_MAX_RESULTS))
        if max_nodes is None:
            max_nodes = int(os.environ.get("PHFIBER_MAX_NODES", DEFAULT_MAX_NODES))
        return cls(max_results, max_nodes)


DEFAULT_MAX_RESULTS = 100_000_000
DEFAULT_MAX_NODES = 2_000_000_000


@dataclass
class SearchResult:
    classifications: List[Classification]
    truncated: bool = False
    reason: Optional[str] = None
    nodes: int = 0
    emitted: int = 0
    peak_entries: int = 0

    @property
    def empty(self) -> bool:
        return self.emitted == 0

    def __len__(self) -> int:
        return len(self.classifications)

    def __iter__(self):
        return iter(self.classifications)


Mode = Tuple[str, Optional[int]]


def parse_mode(mode: Union[str, Mode]) -> Mode:
    """``all``/``chain``, ``cell`` or ``lower:<p>``; returns ``(kind, p)``."""
    if isinstance(mode, tuple):
        kind, p = mode
    else:
        s = mode.strip().lower()
        if s in ("all", "chain"):
            kind, p = "all", None
        elif s == "cell":
            kind, p = "cell", None
        elif s.startswith("lower"):
            try:
                kind, p = "lower", int(s.split(":", 1)[1])
            except (IndexError, ValueError):
                raise ValueError(f"bad mode {mode!r}; expected lower:<p>") from None
        else:
            raise ValueError(f"unknown mode {mode!r}")
    if kind not in ("all", "cell", "lower"):
        raise ValueError(f"unknown mode {mode!r}")
    if kind == "lower" and (p is None or p < 0):
        raise ValueError("lower mode needs p >= 0")
    return kind, p


def initial_budget(C: CellComplex, D: Barcode, field: Field) -> Dict[int, int]:
    """Non-critical births allowed per degree: rank of the next boundary minus finite bars."""
    top = max(C.dim, D.max_degree)
    return {p: rank_boundary(C, p + 1, field) - D.finite_count(p) for p in range(top + 1)}


class _Search:
    def __init__(self, C, D, field, mode, limits, sink, on_node):
        self.C = C
        self.D = D
        self.field = field
        self.kind, self.p = mode
        self.limits = limits
        self.sink = sink
        self.on_node = on_node
        self.n = len(C)
        self.dimD = D.dim
        self.state = DeltaState(C, field)
        self.dims = C.dims
        cell_mode = self.kind in ("cell", "lower")
        self.faces = [tuple(C.proper_faces(i)) for i in range(self.n)] if cell_mode else None
        if self.kind == "lower":
            p = self.p
            self.low_faces = [
                tuple(r for r in self.faces[i] if C.dims[r] <= p) for i in range(self.n)
            ]
        self.by_endpoint: Dict[int, List[int]] = {}
        for x, iv in enumerate(D):
            self.by_endpoint.setdefault(iv.birth, []).append(x)
            if iv.finite:
                self.by_endpoint.setdefault(iv.death, []).append(x)
        self.classes: List[Tuple[int, ...]] = []
        self.endpoints: List[int] = []
        self.cur: List[int] = []
        self.j = 1
        self.endpoint_class = True
        self.owed: List[int] = [x for x, iv in enumerate(D) if iv.birth == 1]
        self.nc: List[int] = []
        self.pi_birth: List[Optional[int]] = [None] * len(D)
        self.pi_death: List[Optional[int]] = [None] * len(D)
        self.M = initial_budget(C, D, field)
        self.nodes = 0
        self.emitted = 0
        self.stop = False
        self.truncated = False
        self.reason: Optional[str] = None

    # -- helpers -----------------------------------------------------------

    def pending(self) -> bool:
        """Lower-p mode: some uncommitted cell above degree p has all its low faces placed."""
        pos = self.state.pos
        p = self.p
        for i in range(self.n):
            if pos[i] is None and self.dims[i] > p:
                if all(pos[r] is not None for r in self.low_faces[i]):
                    return True
        return False

    def candidates(self) -> List[int]:
        pos = self.state.pos
        if self.faces is None:
            return [i for i in range(self.n) if pos[i] is None]
        out = []
        for i in range(self.n):
            if pos[i] is None and all(pos[r] is not None for r in self.faces[i]):
                out.append(i)
        return out

    def _emit(self) -> None:
        cl = Classification(
            tuple(self.classes),
            tuple(self.endpoints),
            tuple(zip(self.pi_birth, self.pi_death)),
        )
        self.emitted += 1
        self.sink(cl)
        mr = self.limits.max_results
        if mr is not None and self.emitted >= mr:
            self.stop = True
            self.truncated = True
            self.reason = "max_results reached"

    # -- recursion ---------------------------------------------------------

    def extend(self) -> None:
        if self.stop:
            return
        self.nodes += 1
        mn = self.limits.max_nodes
        if mn is not None and self.nodes > mn:
            self.stop = True
            self.truncated = True
            self.reason = "max_nodes reached"
            return
        if self.on_node is not None:
            self.on_node(self)
        placed = len(self.state.order)
        if placed == self.n and self.j > self.dimD and not self.cur:
            self._emit()
            return
        if self.cur and not self.owed and not self.nc:
            if self.kind != "lower" or not self.pending():
                self._close()
        if placed == self.n or self.stop:
            return
        cands = self.candidates()
        zeros: List[int] = []
        by_low: Dict[int, List[int]] = {}
        for s in cands:
            code = self.state.status(s)
            if code == ZERO:
                zeros.append(s)
            elif code != BLOCKED:
                by_low.setdefault(code, []).append(s)
        j = self.j
        seen = set()
        for x in list(self.owed):
            iv = self.D[x]
            if iv.birth == j:
                # identical intervals are interchangeable: fill the first one only
                if iv in seen:
                    continue
                seen.add(iv)
                for s in zeros:
                    if self.dims[s] == iv.degree:
                        self._critical_birth(x, s)
            elif iv.death == j:
                # the low of a killing cell singles out its interval, so no symmetry here
                b = self.pi_birth[x]
                assert b is not None
                for s in by_low.get(b, ()):
                    if self.dims[s] == iv.degree + 1:
                        self._critical_death(x, s, b)
        for t in list(self.nc):
            for s in by_low.get(t, ()):
                if self.dims[s] == self.dims[t] + 1:
                    self._noncritical_death(t, s)
        for s in zeros:
            if self.M.get(self.dims[s], 0) > 0:
                self._noncritical_birth(s)

    def _close(self) -> None:
        saved = (self.cur, self.owed, self.nc, self.j, self.endpoint_class)
        self.classes.append(tuple(self.cur))
        was_endpoint = self.endpoint_class
        if was_endpoint:
            self.endpoints.append(len(self.classes) - 1)
            j2 = self.j + 1
        else:
            j2 = self.j
        placed = len(self.state.order)
        self.cur, self.nc, self.j = [], [], j2
        # an endpoint class for j2 exists only while truncate(D, j2) != D
        if placed < self.n and j2 <= self.dimD:
            self.owed = list(self.by_endpoint.get(j2, ()))
            self.endpoint_class = True
            self.extend()
        if placed == self.n or any(v > 0 for v in self.M.values()):
            self.owed = []
            self.endpoint_class = False
            self.extend()
        self.cur, self.owed, self.nc, self.j, self.endpoint_class = saved
        self.classes.pop()
        if was_endpoint:
            self.endpoints.pop()

    def _critical_birth(self, x: int, s: int) -> None:
        tok = self.state.snapshot()
        self.state.commit_birth(s)
        k = self.owed.index(x)
        self.owed.pop(k)
        self.pi_birth[x] = s
        if self.D[x].death == INF:
            self.pi_death[x] = None
        self.cur.append(s)
        self.extend()
        self.cur.pop()
        self.pi_birth[x] = None
        self.owed.insert(k, x)
        self.state.restore(tok)

    def _critical_death(self, x: int, s: int, b: int) -> None:
        tok = self.state.snapshot()
        self.state.commit_death(s, b)
        k = self.owed.index(x)
        self.owed.pop(k)
        self.pi_death[x] = s
        self.cur.append(s)
        self.extend()
        self.cur.pop()
        self.pi_death[x] = None
        self.owed.insert(k, x)
        self.state.restore(tok)

    def _noncritical_death(self, t: int, s: int) -> None:
        tok = self.state.snapshot()
        self.state.commit_death(s, t)
        k = self.nc.index(t)
        self.nc.pop(k)
        self.cur.append(s)
        self.extend()
        self.cur.pop()
        self.nc.insert(k, t)
        self.state.restore(tok)

    def _noncritical_birth(self, s: int) -> None:
        tok = self.state.snapshot()
        self.state.commit_birth(s)
        d = self.dims[s]
        self.M[d] -= 1
        self.nc.append(s)
        self.cur.append(s)
        self.extend()
        self.cur.pop()
        self.nc.pop()
        self.M[d] += 1
        self.state.restore(tok)


def compute_filtrations(
    C: CellComplex,
    D: Barcode,
    field: Field = GF2,
    mode: Union[str, Mode] = "all",
    limits: Optional[Limits] = None,
    sink: Optional[Callable[[Classification], None]] = None,
    on_node: Optional[Callable] = None,
) -> SearchResult:
    """All classifications of the cells of ``C`` compatible with the normalized barcode ``D``.

    With a ``sink`` the classifications are handed over one by one and not
    stored in the result. ``on_node`` is called with the search object at
    every visited node (for instrumentation).
    """
    kind, p = parse_mode(mode)
    if kind != "all" and not C.has_closure:
        raise ValueError(f"mode {kind!r} needs a closure relation on the complex")
    if not isinstance(D, Barcode):
        D = Barcode(D)
    if len(D) and not D.is_normalized():
        raise ValueError(f"barcode {D} is not normalized")
    if D.dim > len(C):
        raise ValueError("barcode has more endpoints than the complex has cells")
    limits = limits or Limits()
    stored: List[Classification] = []
    result = SearchResult(stored)
    if len(D) == 0 or len(C) == 0:
        result.reason = "empty barcode or complex"
        return result
    search = _Search(C, D, field, (kind, p), limits, sink or stored.append, on_node)
    negative = {q: m for q, m in search.M.items() if m < 0}
    if negative:
        result.reason = "infeasible barcode: more finite bars than boundary rank in degree(s) " + ", ".join(
            str(q) for q in sorted(negative)
        )
        return result
    search.extend()
    result.truncated = search.truncated
    result.reason = search.reason
    result.nodes = search.nodes
    result.emitted = search.emitted
    result.peak_entries = search.state.peak_entries
    return result


def dedup_polyhedra(classifications: Iterable[Classification]) -> Dict["Polyhedron", int]:
    """Distinct polyhedra with the number of classifications inducing each."""
    from .geometry import Polyhedron

    counts: Counter = Counter()
    for cl in classifications:
        counts[Polyhedron.from_classification(cl)] += 1
    return dict(counts)


def representative_filter(cl: Classification, n_cells: Optional[int] = None) -> Dict[int, Fraction]:
    """A filter in the relative interior of the polyhedron of ``cl``, keyed by cell index."""
    n = n_cells if n_cells is not None else sum(len(c) for c in cl.classes)
    values: Dict[int, Fraction] = {}
    ends = list(cl.endpoints)
    dimD = len(ends)
    for g, start in enumerate(ends, start=1):
        stop = ends[g] if g < dimD else len(cl.classes)
        lo = Fraction(g)
        hi = Fraction(g + 1 if g < dimD else n)
        free = list(range(start + 1, stop))
        for c in cl.classes[start]:
            values[c] = lo
        for k, idx in enumerate(free, start=1):
            v = lo + k * (hi - lo) / (len(free) + 1)
            for c in cl.classes[idx]:
                values[c] = v
    return values
