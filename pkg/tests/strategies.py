"""Random valid filters and monotone maps for property tests."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List

from hypothesis import strategies as st

from phfiber.complex import CellComplex


def closed_filter(C: CellComplex, raw: List[int], mode: str = "chain") -> List[int]:
    """Push raw values up so that every cell is at least as late as its faces."""
    vals = list(raw)
    for i in sorted(range(len(C)), key=lambda i: C.dims[i]):
        faces = C.support(i) if mode == "chain" else C.proper_faces(i)
        for r in faces:
            vals[i] = max(vals[i], vals[r])
    return vals


@st.composite
def filters(draw, C: CellComplex, top: int = 6, mode: str = "chain"):
    raw = draw(st.lists(st.integers(1, top), min_size=len(C), max_size=len(C)))
    return closed_filter(C, raw, mode)


@st.composite
def monotone_maps(draw, values):
    """A non-decreasing map on the given finite values, as a dict."""
    pts = sorted(set(values))
    imgs = sorted(draw(st.lists(st.integers(1, 12), min_size=len(pts), max_size=len(pts))))
    return {p: Fraction(v) for p, v in zip(pts, imgs)}
