"""Finite based chain complexes built from simplicial, delta, cubical and CW data."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .field import QQ, Field

Chain = Tuple[Tuple[int, int], ...]
FilterLike = Union[Mapping, Sequence]

KINDS = ("simplicial", "delta", "cubical", "cw-chain", "cw-with-closure")


class ComplexError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CellComplex:
    """Cells indexed ``0..n-1``; ``boundary[i]`` holds (face index, integer coefficient) pairs.

    ``closure[i]``, when present, is the set of cells in the closure of cell ``i``
    (reflexive and transitive).
    """

    names: Tuple[str, ...]
    dims: Tuple[int, ...]
    boundary: Tuple[Chain, ...]
    closure: Optional[Tuple[FrozenSet[int], ...]]
    kind: str
    index: Dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", {n: i for i, n in enumerate(self.names)})

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CellComplex):
            return NotImplemented
        return (
            self.names == other.names
            and self.dims == other.dims
            and self.boundary == other.boundary
            and self.closure == other.closure
            and self.kind == other.kind
        )

    def __hash__(self) -> int:
        return hash((self.names, self.dims, self.boundary))

    @property
    def dim(self) -> int:
        return max(self.dims, default=-1)

    @property
    def has_closure(self) -> bool:
        return self.closure is not None

    def cells_of_dim(self, p: int) -> List[int]:
        return [i for i, d in enumerate(self.dims) if d == p]

    def cell_counts(self) -> List[int]:
        counts = [0] * (self.dim + 1)
        for d in self.dims:
            counts[d] += 1
        return counts

    def support(self, i: int, field: Field = QQ) -> List[int]:
        return [r for r, c in self.boundary[i] if field(c) != 0]

    def proper_faces(self, i: int) -> FrozenSet[int]:
        if self.closure is None:
            raise ComplexError("complex has no closure relation")
        return self.closure[i] - {i}

    def cell_id(self, key) -> int:
        if isinstance(key, int) and not isinstance(key, bool):
            if not 0 <= key < len(self):
                raise KeyError(key)
            return key
        return self.index[str(key)]

    def values(self, f: FilterLike) -> List[Fraction]:
        """Filter values as a list indexed by cell; accepts name- or index-keyed mappings."""
        if isinstance(f, Mapping):
            out: List[Optional[Fraction]] = [None] * len(self)
            for k, v in f.items():
                out[self.cell_id(k)] = Fraction(v)
            missing = [self.names[i] for i, v in enumerate(out) if v is None]
            if missing:
                raise ComplexError(f"filter undefined on cells {missing}")
            return out  # type: ignore[return-value]
        vals = [Fraction(v) for v in f]
        if len(vals) != len(self):
            raise ComplexError(f"filter has {len(vals)} values for {len(self)} cells")
        return vals

    def named(self, values: Sequence) -> Dict[str, Fraction]:
        return {self.names[i]: v for i, v in enumerate(values)}


def _label(vertices: Tuple) -> str:
    parts = [str(v) for v in vertices]
    if all(len(p) == 1 for p in parts):
        return "".join(parts)
    return ",".join(parts)


def check_boundary_squared(C: CellComplex, field: Field = QQ) -> None:
    for i in range(len(C)):
        acc: Dict[int, object] = {}
        for r, c in C.boundary[i]:
            field.axpy(acc, field(c), {k: field(v) for k, v in C.boundary[r]})
        if acc:
            raise ComplexError(f"boundary of boundary of {C.names[i]} is nonzero: {acc}")


def _transitive(direct: List[set]) -> Tuple[FrozenSet[int], ...]:
    n = len(direct)
    memo: List[Optional[FrozenSet[int]]] = [None] * n

    def visit(i: int, stack: Tuple[int, ...] = ()) -> FrozenSet[int]:
        if memo[i] is not None:
            return memo[i]  # type: ignore[return-value]
        if i in stack:
            raise ComplexError("closure relation has a cycle")
        acc = {i}
        for j in direct[i]:
            acc |= visit(j, stack + (i,))
        memo[i] = frozenset(acc)
        return memo[i]  # type: ignore[return-value]

    return tuple(visit(i) for i in range(n))


def build_simplicial(facets: Iterable[Iterable[Hashable]]) -> CellComplex:
    """Simplicial complex generated by ``facets``; orientation from sorted vertex order."""
    seen = set()
    tops = []
    for fct in facets:
        s = tuple(sorted(set(fct)))
        if not s:
            raise ComplexError("empty facet")
        if s in seen:
            warnings.warn(f"duplicate facet {s} ignored")
            continue
        seen.add(s)
        tops.append(s)
    if not tops:
        raise ComplexError("no facets")
    simplices = set()
    for s in tops:
        for k in range(1, len(s) + 1):
            simplices.update(itertools.combinations(s, k))
    ordered = sorted(simplices, key=lambda s: (len(s), s))
    idx = {s: i for i, s in enumerate(ordered)}
    boundary = []
    closure = []
    for s in ordered:
        if len(s) == 1:
            boundary.append(())
        else:
            boundary.append(tuple(sorted((idx[s[:k] + s[k + 1:]], (-1) ** k) for k in range(len(s)))))
        closure.append(frozenset(idx[t] for k in range(1, len(s) + 1) for t in itertools.combinations(s, k)))
    C = CellComplex(
        names=tuple(_label(s) for s in ordered),
        dims=tuple(len(s) - 1 for s in ordered),
        boundary=tuple(boundary),
        closure=tuple(closure),
        kind="simplicial",
    )
    if len(set(C.names)) != len(C):
        raise ComplexError("vertex labels produce ambiguous simplex names")
    return C


def build_cw(
    cells: Sequence[Tuple[str, int, Sequence[Tuple[str, int]]]],
    closure: Optional[Iterable[Tuple[str, str]]] = None,
    field: Field = QQ,
    kind: Optional[str] = None,
) -> CellComplex:
    """Build a CW (or abstract based chain) complex.

    ``cells`` lists ``(id, dim, boundary)`` where boundary is a list of
    ``(face id, integer coefficient)``. ``closure`` lists ``(face, coface)``
    incidences; it is closed reflexively and transitively and must contain the
    support of every boundary.
    """
    names = [str(c[0]) for c in cells]
    if len(set(names)) != len(names):
        raise ComplexError("duplicate cell ids")
    idx = {n: i for i, n in enumerate(names)}
    dims = []
    boundary = []
    for name, dim, chain in cells:
        dim = int(dim)
        if dim < 0:
            raise ComplexError(f"cell {name}: negative dimension")
        acc: Dict[int, object] = {}
        for face, coef in chain:
            if str(face) not in idx:
                raise ComplexError(f"cell {name}: boundary references unknown cell {face!r}")
            r = idx[str(face)]
            if int(cells[r][1]) != dim - 1:
                raise ComplexError(f"cell {name}: boundary face {face} is not of dimension {dim - 1}")
            acc[r] = acc.get(r, 0) + coef
        dims.append(dim)
        boundary.append(tuple(sorted((r, c) for r, c in acc.items() if c != 0)))
    clos = None
    if closure is not None:
        direct: List[set] = [set() for _ in names]
        for face, coface in closure:
            if str(face) not in idx or str(coface) not in idx:
                raise ComplexError(f"closure pair ({face}, {coface}) references unknown cell")
            f, c = idx[str(face)], idx[str(coface)]
            if f == c:
                continue
            if dims[f] >= dims[c]:
                raise ComplexError(f"closure pair ({face}, {coface}) is not dimension-decreasing")
            direct[c].add(f)
        clos = _transitive(direct)
        for i in range(len(names)):
            for r in (r for r, c in boundary[i] if field(c) != 0):
                if r not in clos[i]:
                    raise ComplexError(
                        f"closure of {names[i]} misses boundary face {names[r]}"
                    )
    if kind is None:
        kind = "cw-with-closure" if clos is not None else "cw-chain"
    C = CellComplex(tuple(names), tuple(dims), tuple(boundary), clos, kind)
    check_boundary_squared(C, field)
    return C


def build_delta(cells: Sequence[Tuple[str, Sequence[str]]]) -> CellComplex:
    """Delta complex: each cell lists its ordered faces (d_0, ..., d_n); vertices list none."""
    rows = []
    closure = []
    dims: Dict[str, int] = {}
    for name, faces in cells:
        dims[str(name)] = 0 if not faces else len(faces) - 1
    for name, faces in cells:
        d = dims[str(name)]
        for f in faces:
            if str(f) not in dims:
                raise ComplexError(f"delta cell {name}: unknown face {f!r}")
            if dims[str(f)] != d - 1:
                raise ComplexError(f"delta cell {name}: face {f} has wrong dimension")
            closure.append((str(f), str(name)))
        rows.append((str(name), d, [(str(f), (-1) ** k) for k, f in enumerate(faces)] if d > 0 else []))
    return build_cw(rows, closure=closure, kind="delta")


def build_cubical(cubes: Iterable[Sequence[Tuple[int, int]]]) -> CellComplex:
    """Cubical complex generated by elementary cubes given as per-axis ``(lo, hi)``, ``hi - lo`` in {0, 1}."""
    tops = set()
    for q in cubes:
        q = tuple((int(a), int(b)) for a, b in q)
        if any(b - a not in (0, 1) for a, b in q):
            raise ComplexError(f"not an elementary cube: {q}")
        tops.add(q)
    if not tops:
        raise ComplexError("no cubes")

    def faces(q):
        out = []
        for k, (a, b) in enumerate(q):
            if b != a:
                out.append(q[:k] + ((a, a),) + q[k + 1:])
                out.append(q[:k] + ((b, b),) + q[k + 1:])
        return out

    def cdim(q):
        return sum(b - a for a, b in q)

    allq = set()
    todo = list(tops)
    while todo:
        q = todo.pop()
        if q in allq:
            continue
        allq.add(q)
        todo.extend(faces(q))

    def bd(q):
        # d(I1 x Q') = dI1 x Q' + (-1)^{dim I1} I1 x dQ'
        chain: Dict[tuple, int] = {}
        sign = 1
        for k, (a, b) in enumerate(q):
            if b != a:
                lo = q[:k] + ((a, a),) + q[k + 1:]
                hi = q[:k] + ((b, b),) + q[k + 1:]
                chain[hi] = chain.get(hi, 0) + sign
                chain[lo] = chain.get(lo, 0) - sign
                sign = -sign
        return chain

    def name(q):
        return "x".join(f"[{a}]" if a == b else f"[{a},{b}]" for a, b in q)

    ordered = sorted(allq, key=lambda q: (cdim(q), q))
    rows = [(name(q), cdim(q), [(name(r), c) for r, c in bd(q).items() if c]) for q in ordered]
    closure = [(name(r), name(q)) for q in ordered for r in faces(q)]
    return build_cw(rows, closure=closure, kind="cubical")


def validate_filter(
    C: CellComplex, f: FilterLike, mode: str = "chain", check_range: bool = True, field: Field = QQ
) -> bool:
    """True iff every sublevel set of ``f`` is boundary-closed (and closure-closed in cell mode)."""
    return filter_violation(C, f, mode, check_range, field) is None


def filter_violation(
    C: CellComplex, f: FilterLike, mode: str = "chain", check_range: bool = True, field: Field = QQ
) -> Optional[Tuple[str, str]]:
    """First offending (cell, face) pair, ``(cell, "range")`` for out-of-range values, or None.

    Chain mode looks at the boundary support over ``field``.
    """
    if mode not in ("chain", "cell"):
        raise ValueError(f"unknown filter mode {mode!r}")
    if mode == "cell" and C.closure is None:
        raise ComplexError("cell-mode validation needs a closure relation")
    vals = C.values(f)
    if check_range:
        for i, v in enumerate(vals):
            if not 1 <= v <= len(C):
                return (C.names[i], "range")
    for i in range(len(C)):
        faces = C.support(i, field) if mode == "chain" else C.proper_faces(i)
        for r in faces:
            if vals[r] > vals[i]:
                return (C.names[i], C.names[r])
    return None


def sublevel(C: CellComplex, f: FilterLike, t) -> set:
    vals = C.values(f)
    return {C.names[i] for i, v in enumerate(vals) if v <= t}


def lower_p_extend(C: CellComplex, p: int, g: Mapping) -> Dict[str, Fraction]:
    """Extend values on cells of dimension <= p to the lower-p filter ``max`` rule."""
    if C.closure is None:
        raise ComplexError("lower-p filters need a closure relation")
    low: Dict[int, Fraction] = {}
    for k, v in g.items():
        i = C.cell_id(k)
        if C.dims[i] > p:
            raise ComplexError(f"value given on {C.names[i]} of dimension > {p}")
        low[i] = Fraction(v)
    for i, d in enumerate(C.dims):
        if d <= p and i not in low:
            raise ComplexError(f"missing value for {C.names[i]}")
    for i in low:
        for r in C.proper_faces(i):
            if low[r] > low[i]:
                raise ComplexError(f"values not monotone: {C.names[r]} > {C.names[i]}")
    out = {}
    for i in range(len(C)):
        faces = [r for r in C.closure[i] if C.dims[r] <= p]
        if not faces:
            raise ComplexError(f"cell {C.names[i]} has no faces of dimension <= {p}")
        out[C.names[i]] = max(low[r] for r in faces)
    return out
