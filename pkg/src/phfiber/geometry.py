"""Polyhedra of a fiber: vertices, faces, facets, and the homology of the facet nerve."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .barcode import Barcode
from .complex import CellComplex
from .field import GF2, Field

Vertex = Tuple[int, ...]


@dataclass(frozen=True)
class Polyhedron:
    """Class cell-sets in order, with the positions of the endpoint classes."""

    classes: Tuple[FrozenSet[int], ...]
    endpoints: Tuple[int, ...]

    @classmethod
    def from_classification(cls, cl) -> "Polyhedron":
        return cls(tuple(frozenset(c) for c in cl.classes), tuple(cl.endpoints))

    @property
    def n_cells(self) -> int:
        return sum(len(c) for c in self.classes)

    @property
    def dim_D(self) -> int:
        return len(self.endpoints)

    @property
    def dimension(self) -> int:
        return len(self.classes) - len(self.endpoints)

    @cached_property
    def gaps(self) -> Tuple[Tuple[int, ...], ...]:
        """Free class indices following each endpoint class (the last gap is trailing)."""
        ends = self.endpoints
        out = []
        for g, start in enumerate(ends):
            stop = ends[g + 1] if g + 1 < len(ends) else len(self.classes)
            out.append(tuple(range(start + 1, stop)))
        return tuple(out)

    @cached_property
    def vertices(self) -> FrozenSet[Vertex]:
        return vertex_set(self)

    def sort_key(self) -> tuple:
        return (
            -self.dimension,
            tuple(tuple(sorted(c)) for c in self.classes),
            self.endpoints,
        )

    def named(self, C: CellComplex) -> List[List[str]]:
        return [[C.names[c] for c in sorted(cls)] for cls in self.classes]


def dimension(P: Polyhedron) -> int:
    return P.dimension


def vertex_set(P: Polyhedron, n_cells: Optional[int] = None) -> FrozenSet[Vertex]:
    """Vertices as value tuples indexed by cell; one per choice of split point in every gap."""
    n = n_cells if n_cells is not None else P.n_cells
    dimD = P.dim_D
    base = [0] * n
    for j, k in enumerate(P.endpoints, start=1):
        for c in P.classes[k]:
            base[c] = j
    gaps = P.gaps
    bounds = [(g, g + 1 if g < dimD else n) for g in range(1, dimD + 1)]
    out = set()
    for splits in itertools.product(*(range(len(fr) + 1) for fr in gaps)):
        v = list(base)
        for fr, s, (lo, hi) in zip(gaps, splits, bounds):
            for pos, k in enumerate(fr):
                val = lo if pos < s else hi
                for c in P.classes[k]:
                    v[c] = val
        out.add(tuple(v))
    return frozenset(out)


def _merge(P: Polyhedron, k: int) -> Polyhedron:
    """Merge class ``k + 1`` into class ``k``; endpoint status survives the merge."""
    classes = list(P.classes)
    classes[k : k + 2] = [classes[k] | classes[k + 1]]
    ends = []
    for e in P.endpoints:
        ends.append(e if e <= k else e - 1)
    return Polyhedron(tuple(classes), tuple(ends))


def faces(P: Polyhedron) -> List[Polyhedron]:
    """Codimension-one faces obtained by merging a free class with a neighbour.

    Merging into the next class is allowed when it is free or is the next
    endpoint class; a trailing free class never snaps to the top value.
    """
    out = []
    for fr in P.gaps:
        for k in fr:
            out.append(_merge(P, k - 1))
            if k + 1 < len(P.classes):
                out.append(_merge(P, k))
    seen = set()
    uniq = []
    for Q in out:
        if Q not in seen:
            seen.add(Q)
            uniq.append(Q)
    return uniq


def is_face(Q: Polyhedron, P: Polyhedron) -> bool:
    return Q.vertices <= P.vertices


def facets(polys: Iterable[Polyhedron]) -> List[Polyhedron]:
    """Polyhedra not contained in a higher-dimensional one, in canonical order."""
    ordered = sorted(set(polys), key=Polyhedron.sort_key)
    index: Dict[Vertex, List[int]] = {}
    out = []
    for k, P in enumerate(ordered):
        verts = P.vertices
        lists = [index.get(v, ()) for v in verts]
        contained = False
        if all(lists):
            shortest = min(lists, key=len)
            d = P.dimension
            for q in shortest:
                Q = ordered[q]
                if Q.dimension > d and verts <= Q.vertices:
                    contained = True
                    break
        if not contained:
            out.append(P)
        for v in verts:
            index.setdefault(v, []).append(k)
    return out


@dataclass
class NerveComplex:
    n_vertices: int
    maximal: List[Tuple[int, ...]]

    @property
    def dim(self) -> int:
        return max((len(s) for s in self.maximal), default=0) - 1


def nerve(facet_list: Sequence[Polyhedron]) -> NerveComplex:
    """Facets as vertices; simplices are facet sets sharing a fiber vertex."""
    groups: Dict[Vertex, List[int]] = {}
    for k, P in enumerate(facet_list):
        for v in P.vertices:
            groups.setdefault(v, []).append(k)
    cands = {tuple(g) for g in groups.values()}
    cands |= {(k,) for k in range(len(facet_list))}
    sets = sorted(cands, key=len, reverse=True)
    maximal: List[Tuple[int, ...]] = []
    by_vertex: Dict[int, List[FrozenSet[int]]] = {}
    for s in sets:
        fs = frozenset(s)
        pool = by_vertex.get(s[0], [])
        if any(fs <= m for m in pool):
            continue
        maximal.append(s)
        for x in s:
            by_vertex.setdefault(x, []).append(fs)
    maximal.sort()
    return NerveComplex(len(facet_list), maximal)


def _maximal_sets(sets: Iterable[FrozenSet[int]]) -> List[FrozenSet[int]]:
    out: List[FrozenSet[int]] = []
    for s in sorted(set(sets), key=len, reverse=True):
        if not any(s <= m for m in out):
            out.append(s)
    return out


def strong_core(N: NerveComplex) -> NerveComplex:
    """Remove dominated vertices until none is left; the homotopy type is unchanged.

    A vertex ``a`` is dominated by ``b`` when every maximal simplex containing
    ``a`` also contains ``b``.
    """
    groups = _maximal_sets(frozenset(m) for m in N.maximal)
    while True:
        member: Dict[int, set] = {}
        for gi, g in enumerate(groups):
            for x in g:
                member.setdefault(x, set()).add(gi)
        victim = None
        for a in sorted(member):
            ma = member[a]
            # any dominating vertex lies in every group containing a, in particular the first
            first = groups[min(ma)]
            for b in sorted(first):
                if b != a and ma <= member[b]:
                    victim = a
                    break
            if victim is not None:
                break
        if victim is None:
            break
        groups = _maximal_sets(g - {victim} for g in groups)
    kept = sorted({x for g in groups for x in g})
    relabel = {x: k for k, x in enumerate(kept)}
    maximal = sorted(tuple(sorted(relabel[x] for x in g)) for g in groups)
    return NerveComplex(len(kept), maximal)


def dowker_dual(N: NerveComplex) -> NerveComplex:
    """Complex on the maximal simplices of ``N``: a set of them spans a simplex iff they share a vertex.

    It has the homotopy type of ``N``.
    """
    member: Dict[int, set] = {}
    for gi, m in enumerate(N.maximal):
        for x in m:
            member.setdefault(x, set()).add(gi)
    groups = _maximal_sets(frozenset(v) for v in member.values())
    return NerveComplex(len(N.maximal), sorted(tuple(sorted(g)) for g in groups))


def _face_estimate(N: NerveComplex, top: int) -> int:
    return sum(sum(math.comb(len(m), r) for r in range(1, top + 2)) for m in N.maximal)


def small_model(N: NerveComplex, top: int) -> NerveComplex:
    """A small complex homotopy equivalent to ``N``: cores of ``N`` and of its dual, whichever is cheaper."""
    core = strong_core(N)
    alt = strong_core(dowker_dual(core))
    return min((core, alt), key=lambda M: _face_estimate(M, top))


def nerve_faces(N: NerveComplex, max_dim: Optional[int] = None, max_faces: int = 5_000_000) -> List[List[Tuple[int, ...]]]:
    """Simplices of the nerve up to ``max_dim``, grouped by dimension."""
    top = N.dim if max_dim is None else min(N.dim, max_dim)
    by_dim: List[set] = [set() for _ in range(top + 1)]
    total = 0
    for m in N.maximal:
        for r in range(1, min(len(m), top + 1) + 1):
            for s in itertools.combinations(m, r):
                if s not in by_dim[r - 1]:
                    by_dim[r - 1].add(s)
                    total += 1
                    if total > max_faces:
                        raise ValueError(f"nerve has more than {max_faces} simplices")
    return [sorted(lst) for lst in by_dim]


def nerve_complex(N: NerveComplex) -> CellComplex:
    """The nerve as a simplicial cell complex (for cross-checks with the generic reduction)."""
    from .complex import build_simplicial

    return build_simplicial([[str(x) for x in m] for m in N.maximal])


def betti(N: NerveComplex, field: Field = GF2, max_degree: Optional[int] = None) -> List[int]:
    """Betti numbers of the nerve in degrees ``0..dim`` (capped at ``max_degree``).

    Homology is computed on a homotopy equivalent model (strong-collapse core
    of the nerve or of its dual), which is usually far smaller.
    """
    if N.n_vertices == 0:
        return []
    length = N.dim + 1 if max_degree is None else min(N.dim, max_degree) + 1
    model = small_model(N, length)
    by_dim = nerve_faces(model, max_dim=length)
    ranks = [0] * (len(by_dim) + 1)
    index = [{s: k for k, s in enumerate(lst)} for lst in by_dim]
    for d in range(1, len(by_dim)):
        ranks[d] = _boundary_rank(by_dim[d], index[d - 1], field)
    out = [len(by_dim[d]) - ranks[d] - ranks[d + 1] for d in range(min(len(by_dim), length))]
    return out + [0] * (length - len(out))


def _boundary_rank(simplices, face_index, field: Field) -> int:
    if field.char == 2:
        pivots: Dict[int, int] = {}
        r = 0
        for s in simplices:
            col = 0
            for k in range(len(s)):
                col ^= 1 << face_index[s[:k] + s[k + 1 :]]
            while col:
                low = col.bit_length() - 1
                if low not in pivots:
                    pivots[low] = col
                    r += 1
                    break
                col ^= pivots[low]
        return r
    from .field import rank

    cols = []
    for s in simplices:
        cols.append({face_index[s[:k] + s[k + 1 :]]: (-1) ** k for k in range(len(s))})
    return rank(cols, field)


def euler(N: NerveComplex) -> int:
    """Euler characteristic, counted on a homotopy equivalent small model."""
    model = small_model(N, N.dim)
    return sum((-1) ** d * len(lst) for d, lst in enumerate(nerve_faces(model)))


@dataclass
class Report:
    counts_by_dim: Dict[int, int]
    facet_dims: Dict[int, int]
    non_top_dimensional_facets: bool
    betti: List[int]
    euler: int
    truncated: bool
    empty: bool
    reason: Optional[str] = None
    classifications: int = 0
    nodes: int = 0
    polyhedra: Optional[List[Polyhedron]] = dc_field(default=None, repr=False)

    def to_json(self, C: Optional[CellComplex] = None) -> dict:
        out = {
            "counts_by_dim": {str(k): v for k, v in sorted(self.counts_by_dim.items())},
            "facet_dims": {str(k): v for k, v in sorted(self.facet_dims.items())},
            "non_top_dimensional_facets": self.non_top_dimensional_facets,
            "betti": list(self.betti),
            "euler": self.euler,
            "truncated": self.truncated,
            "empty": self.empty,
            "reason": self.reason,
            "classifications": self.classifications,
            "nodes": self.nodes,
        }
        if self.polyhedra is not None:
            dump = []
            for P in self.polyhedra:
                classes = P.named(C) if C is not None else [sorted(c) for c in P.classes]
                dump.append({"dimension": P.dimension, "classes": classes, "endpoints": list(P.endpoints)})
            out["polyhedra"] = dump
        return out


def summarize(polys: Iterable[Polyhedron], field: Field = GF2) -> Tuple[Dict[int, int], List[Polyhedron], NerveComplex, List[int], int]:
    polys = sorted(set(polys), key=Polyhedron.sort_key)
    counts = Counter(P.dimension for P in polys)
    fs = facets(polys)
    N = nerve(fs)
    # the fiber is a polyhedral complex, so nothing lives above its top dimension
    top = max(counts, default=0)
    return dict(counts), fs, N, betti(N, field, max_degree=top), euler(N) if fs else 0


def fiber_report(
    C: CellComplex,
    D: Barcode,
    field: Field = GF2,
    mode="all",
    limits=None,
    dump: bool = False,
    betti_field: Field = GF2,
) -> Report:
    """Search, deduplicate, bin by dimension, find facets and compute the nerve homology."""
    from .search import compute_filtrations

    seen: Dict[Polyhedron, int] = {}

    def sink(cl) -> None:
        P = Polyhedron.from_classification(cl)
        seen[P] = seen.get(P, 0) + 1

    res = compute_filtrations(C, D, field, mode, limits, sink=sink)
    counts, fs, N, b, chi = summarize(seen, betti_field)
    top = max(counts, default=0)
    return Report(
        counts_by_dim=counts,
        facet_dims=dict(Counter(P.dimension for P in fs)),
        non_top_dimensional_facets=any(P.dimension < top for P in fs),
        betti=b,
        euler=chi,
        truncated=res.truncated,
        empty=not seen,
        reason=res.reason,
        classifications=res.emitted,
        nodes=res.nodes,
        polyhedra=sorted(seen, key=Polyhedron.sort_key) if dump else None,
    )
