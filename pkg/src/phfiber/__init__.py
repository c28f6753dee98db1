"""Enumerating the fiber of the persistence map over a finite cell complex."""
from . import library
from .barcode import INF, Barcode, Interval, canonical_barcode_DK, elementary_barcodes, normalize, push_forward, truncate
from .collapse import is_collapsible
from .complex import CellComplex, ComplexError, build_cubical, build_cw, build_delta, build_simplicial
from .field import GF2, QQ, Field
from .geometry import Polyhedron, fiber_report
from .persistence import DeltaState, compute_barcode, reduce_standard
from .search import Classification, Limits, compute_filtrations, dedup_polyhedra, representative_filter

__version__ = "0.1.0"
