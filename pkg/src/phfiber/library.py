"""Small named complexes used in tests, examples and the bundled corpus."""
from __future__ import annotations

from typing import Callable, Dict, List

from .complex import CellComplex, build_cw, build_simplicial


def _cw(cells, closure) -> CellComplex:
    return build_cw(cells, closure=closure)


def edge() -> CellComplex:
    return build_simplicial([["a", "b"]])


def path(n: int) -> CellComplex:
    """Path graph on ``n`` vertices labelled a, b, c, ..."""
    labels = [chr(ord("a") + k) for k in range(n)]
    if n == 1:
        return build_simplicial([["a"]])
    return build_simplicial([[labels[k], labels[k + 1]] for k in range(n - 1)])


def star(leaves: int = 3) -> CellComplex:
    return build_simplicial([["o", chr(ord("a") + k)] for k in range(leaves)])


def hollow_triangle() -> CellComplex:
    return build_simplicial([["a", "b"], ["b", "c"], ["a", "c"]])


def full_triangle() -> CellComplex:
    return build_simplicial([["a", "b", "c"]])


def triangle_with_tail() -> CellComplex:
    return build_simplicial([["a", "b"], ["b", "c"], ["a", "c"], ["c", "d"]])


def two_triangles() -> CellComplex:
    """Two filled triangles sharing the edge bc."""
    return build_simplicial([["a", "b", "c"], ["b", "c", "d"]])


def circle_cw() -> CellComplex:
    return _cw([("v", 0, []), ("e", 1, [])], [("v", "e")])


def rp2_cw() -> CellComplex:
    return _cw(
        [("v", 0, []), ("e", 1, []), ("f", 2, [("e", 2)])],
        [("v", "e"), ("e", "f")],
    )


def torus_cw() -> CellComplex:
    return _cw(
        [("v", 0, []), ("a", 1, []), ("b", 1, []), ("f", 2, [])],
        [("v", "a"), ("v", "b"), ("a", "f"), ("b", "f")],
    )


def klein_cw() -> CellComplex:
    # attaching word a b a^-1 b
    return _cw(
        [("v", 0, []), ("a", 1, []), ("b", 1, []), ("f", 2, [("b", 2)])],
        [("v", "a"), ("v", "b"), ("a", "f"), ("b", "f")],
    )


def dunce_cw() -> CellComplex:
    # attaching word a a a^-1
    return _cw(
        [("v", 0, []), ("e", 1, []), ("f", 2, [("e", 1)])],
        [("v", "e"), ("e", "f")],
    )


def torus12_cw() -> CellComplex:
    """Torus with both generating loops subdivided into three edges (12 cells)."""
    cells = [("v", 0, []), ("p1", 0, []), ("p2", 0, []), ("q1", 0, []), ("q2", 0, [])]
    closure = []
    for name, (s, t) in {
        "a1": ("v", "p1"),
        "a2": ("p1", "p2"),
        "a3": ("p2", "v"),
        "b1": ("v", "q1"),
        "b2": ("q1", "q2"),
        "b3": ("q2", "v"),
    }.items():
        cells.append((name, 1, [(t, 1), (s, -1)]))
        closure += [(s, name), (t, name)]
    cells.append(("f", 2, []))
    closure += [(e, "f") for e in ("a1", "a2", "a3", "b1", "b2", "b3")]
    return _cw(cells, closure)


def path_cw(n_edges: int) -> CellComplex:
    """Subdivided interval as a CW complex with closure (for scaling measurements)."""
    cells = [(f"v{k}", 0, []) for k in range(n_edges + 1)]
    closure = []
    for k in range(n_edges):
        cells.append((f"e{k}", 1, [(f"v{k + 1}", 1), (f"v{k}", -1)]))
        closure += [(f"v{k}", f"e{k}"), (f"v{k + 1}", f"e{k}")]
    return _cw(cells, closure)


BUILTINS: Dict[str, Callable[[], CellComplex]] = {
    "EDGE": edge,
    "PATH3": lambda: path(3),
    "PATH4": lambda: path(4),
    "STAR3": star,
    "HOLLOWTRI": hollow_triangle,
    "FULLTRI": full_triangle,
    "TRI_TAIL": triangle_with_tail,
    "TWO_TRIANGLES": two_triangles,
    "CIRC_CW": circle_cw,
    "RP2_CW": rp2_cw,
    "TORUS_CW": torus_cw,
    "KLEIN_CW": klein_cw,
    "DUNCE_CW": dunce_cw,
    "TORUS12_CW": torus12_cw,
}


def get(name: str) -> CellComplex:
    try:
        return BUILTINS[name.upper()]()
    except KeyError:
        raise KeyError(f"unknown builtin complex {name!r}; known: {', '.join(BUILTINS)}") from None


def names() -> List[str]:
    return list(BUILTINS)
