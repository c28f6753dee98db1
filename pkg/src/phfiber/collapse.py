"""Collapsibility: via fibers of elementary barcodes, and by direct search for collapses."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .barcode import Barcode, elementary_barcodes
from .complex import CellComplex, ComplexError
from .field import GF2, Field
from .persistence import betti_numbers
from .search import Classification, Limits, compute_filtrations

Step = Tuple[int, int]  # (free face, coface)


@dataclass
class CollapseResult:
    collapsible: bool
    witness: Optional[Classification] = None
    barcode: Optional[Barcode] = None
    # True when no closure relation was available and the answer only concerns the chain complex
    chain_level: bool = False
    reason: str = ""
    # set for non-simplicial input, where fiber nonemptiness is not known to match collapsibility
    caveat: Optional[str] = None

    def __bool__(self) -> bool:
        return self.collapsible


def is_collapsible(C: CellComplex, field: Field = GF2) -> CollapseResult:
    """Collapsible iff some elementary barcode has a nonempty fiber."""
    chain_level = not C.has_closure
    caveat = None if C.kind == "simplicial" else f"{C.kind} complex: verdict is about filters, not proven for collapses"
    if len(C) % 2 == 0:
        return CollapseResult(False, chain_level=chain_level, reason="even number of cells", caveat=caveat)
    if betti_numbers(C, field)[0] != 1:
        return CollapseResult(False, chain_level=chain_level, reason="not connected", caveat=caveat)
    mode = "all" if chain_level else "cell"
    tried = 0
    for D in elementary_barcodes(C):
        tried += 1
        res = compute_filtrations(C, D, field, mode, Limits(max_results=1))
        if res.classifications:
            return CollapseResult(True, res.classifications[0], D, chain_level, "elementary fiber nonempty", caveat)
    return CollapseResult(False, chain_level=chain_level, reason=f"all {tried} elementary fibers empty", caveat=caveat)


class _Collapser:
    def __init__(self, C: CellComplex):
        if not C.has_closure:
            raise ComplexError("direct collapses need a closure relation")
        self.C = C
        n = len(C)
        self.cofaces: List[FrozenSet[int]] = []
        co: List[set] = [set() for _ in range(n)]
        for i in range(n):
            for r in C.proper_faces(i):
                co[r].add(i)
        self.cofaces = [frozenset(s) for s in co]
        self.coef = [dict(C.boundary[i]) for i in range(n)]
        self.dead: set = set()

    def free_pairs(self, S: FrozenSet[int]) -> List[Step]:
        C = self.C
        out = []
        for s in sorted(S):
            if self.cofaces[s] & S:
                continue
            for t in sorted(C.proper_faces(s)):
                if C.dims[t] != C.dims[s] - 1 or t not in S:
                    continue
                if abs(self.coef[s].get(t, 0)) != 1:
                    continue
                if (self.cofaces[t] & S) == {s}:
                    out.append((t, s))
        return out

    def search(self, S: FrozenSet[int]) -> Optional[List[Step]]:
        if len(S) == 1:
            (v,) = S
            return [] if self.C.dims[v] == 0 else None
        if S in self.dead:
            return None
        for t, s in self.free_pairs(S):
            rest = self.search(S - {t, s})
            if rest is not None:
                return [(t, s)] + rest
        self.dead.add(S)
        return None


def find_collapse(C: CellComplex) -> Optional[List[Step]]:
    """A sequence of elementary collapses down to one vertex, or None."""
    return _Collapser(C).search(frozenset(range(len(C))))


def collapse_oracle(C: CellComplex) -> bool:
    return find_collapse(C) is not None


def collapse_to_filter(C: CellComplex, steps: Sequence[Tuple], v) -> Dict[str, int]:
    """Filter built from a full collapse to the vertex ``v``: cells re-enter in reverse order.

    The vertex gets 1; the k-th pair from the end gets ``2k`` on the free face
    and ``2k + 1`` on the coface.
    """
    col = _Collapser(C)
    vi = C.cell_id(v)
    pairs = [(C.cell_id(t), C.cell_id(s)) for t, s in steps]
    S = frozenset(range(len(C)))
    for t, s in pairs:
        if (t, s) not in col.free_pairs(S):
            raise ValueError(f"({C.names[t]}, {C.names[s]}) is not an elementary collapse here")
        S = S - {t, s}
    if S != {vi}:
        raise ValueError(f"steps do not collapse the complex onto {C.names[vi]}")
    out = {C.names[vi]: 1}
    for k, (t, s) in enumerate(reversed(pairs), start=1):
        out[C.names[t]] = 2 * k
        out[C.names[s]] = 2 * k + 1
    return out
