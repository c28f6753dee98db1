"""JSON reading and writing for complexes, barcodes and filters."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Union

from . import library
from .barcode import INF, Barcode, Interval, _json_value
from .complex import CellComplex, ComplexError, build_cubical, build_cw, build_delta, build_simplicial
from .field import QQ, Field


class FormatError(ValueError):
    """Malformed input, with the file and the offending location."""

    def __init__(self, source: str, where: str, message: str):
        self.source = source
        self.where = where
        super().__init__(f"{source}: {where}: {message}" if where else f"{source}: {message}")


def load_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(str(path), "", e.strerror or str(e)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(str(path), f"line {e.lineno} column {e.colno}", e.msg) from None


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def write_json(obj: Any, path: Union[str, Path, None]) -> None:
    text = dump_json(obj)
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text, encoding="utf-8")


def _need(obj: dict, key: str, source: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(source, where, f"missing field {key!r}")
    return obj[key]


# -- complexes ---------------------------------------------------------------


def complex_from_json(data: Any, source: str = "<complex>", field: Field = QQ) -> CellComplex:
    """Accepted shapes: ``facets``, ``cells`` (+ ``closure``), delta ``cells`` with ``faces``, ``cubes``, ``builtin``."""
    if not isinstance(data, dict):
        raise FormatError(source, "", "expected a JSON object")
    try:
        if "builtin" in data:
            return library.get(str(data["builtin"]))
        if "facets" in data:
            facets = data["facets"]
            if not isinstance(facets, list):
                raise FormatError(source, "facets", "expected a list of vertex lists")
            for k, f in enumerate(facets):
                if not isinstance(f, list):
                    raise FormatError(source, f"facets[{k}]", "expected a list of vertices")
            return build_simplicial(facets)
        if "cubes" in data:
            return build_cubical(data["cubes"])
        cells = _need(data, "cells", source, "")
        if not isinstance(cells, list):
            raise FormatError(source, "cells", "expected a list")
        kind = data.get("type", data.get("kind"))
        if kind == "delta" or (cells and isinstance(cells[0], dict) and "faces" in cells[0]):
            rows = []
            for k, c in enumerate(cells):
                rows.append((str(_need(c, "id", source, f"cells[{k}]")), list(c.get("faces", []))))
            return build_delta(rows)
        rows = []
        for k, c in enumerate(cells):
            where = f"cells[{k}]"
            cid = _need(c, "id", source, where)
            dim = _need(c, "dim", source, where)
            if not isinstance(dim, int):
                raise FormatError(source, f"{where}.dim", "expected an integer")
            chain = []
            for m, term in enumerate(c.get("boundary", [])):
                if not (isinstance(term, list) and len(term) == 2 and isinstance(term[1], int)):
                    raise FormatError(source, f"{where}.boundary[{m}]", "expected [face id, integer]")
                chain.append((str(term[0]), term[1]))
            rows.append((str(cid), dim, chain))
        closure = data.get("closure")
        if closure is not None:
            pairs = []
            for m, pr in enumerate(closure):
                if not (isinstance(pr, list) and len(pr) == 2):
                    raise FormatError(source, f"closure[{m}]", "expected [face, coface]")
                pairs.append((str(pr[0]), str(pr[1])))
            closure = pairs
        kind_arg = kind if kind in ("cw-chain", "cw-with-closure", "simplicial", "delta", "cubical") else None
        return build_cw(rows, closure=closure, field=field, kind=kind_arg)
    except (ComplexError, KeyError, TypeError) as e:
        if isinstance(e, FormatError):
            raise
        raise FormatError(source, "", str(e).strip("'\"")) from None


def complex_to_json(C: CellComplex) -> dict:
    """Generic cell form; reading it back gives an equal complex."""
    out: Dict[str, Any] = {"type": C.kind, "cells": []}
    for i in range(len(C)):
        out["cells"].append(
            {
                "id": C.names[i],
                "dim": C.dims[i],
                "boundary": [[C.names[r], c] for r, c in C.boundary[i]],
            }
        )
    if C.closure is not None:
        out["closure"] = [
            [C.names[r], C.names[i]] for i in range(len(C)) for r in sorted(C.closure[i]) if r != i
        ]
    return out


def read_complex(ref: str, field: Field = QQ) -> CellComplex:
    """A path to a JSON file, or ``builtin:NAME``."""
    if ref.lower().startswith("builtin:"):
        try:
            return library.get(ref.split(":", 1)[1])
        except KeyError as e:
            raise FormatError(ref, "", str(e).strip("'\"")) from None
    return complex_from_json(load_json(ref), ref, field)


# -- barcodes and filters ----------------------------------------------------


def _value(v: Any, source: str, where: str):
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "+inf", "infinity"):
            return INF
        if s == "-inf":
            return -INF
        try:
            return Fraction(v)
        except ValueError:
            raise FormatError(source, where, f"not a number: {v!r}") from None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise FormatError(source, where, f"not a number: {v!r}")
    if isinstance(v, float):
        return Fraction(v) if v == v and abs(v) != INF else v
    return v


def barcode_from_json(data: Any, source: str = "<barcode>") -> Barcode:
    items = data.get("intervals") if isinstance(data, dict) else data
    if not isinstance(items, list):
        raise FormatError(source, "", "expected a list of intervals or {'intervals': [...]}")
    ivs = []
    for k, it in enumerate(items):
        where = f"intervals[{k}]"
        if isinstance(it, dict):
            deg = it.get("dim", it.get("degree"))
            if not isinstance(deg, int):
                raise FormatError(source, f"{where}.dim", "expected an integer degree")
            b = _value(_need(it, "birth", source, where), source, f"{where}.birth")
            d = _value(_need(it, "death", source, where), source, f"{where}.death")
        elif isinstance(it, list) and len(it) == 3:
            deg = it[0]
            if not isinstance(deg, int):
                raise FormatError(source, f"{where}[0]", "expected an integer degree")
            b = _value(it[1], source, f"{where}[1]")
            d = _value(it[2], source, f"{where}[2]")
        else:
            raise FormatError(source, where, "expected {dim, birth, death} or [dim, birth, death]")
        if not b < d:
            raise FormatError(source, where, "birth must be smaller than death")
        ivs.append(Interval(deg, _int_if_whole(b), _int_if_whole(d)))
    return Barcode(ivs)


def _int_if_whole(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    return v


def barcode_to_json(B: Barcode) -> dict:
    return B.to_json()


def filter_from_json(data: Any, source: str = "<filter>") -> Dict[str, Fraction]:
    vals = data.get("values", data) if isinstance(data, dict) else None
    if not isinstance(vals, dict):
        raise FormatError(source, "", "expected {'values': {cell: value}}")
    out = {}
    for k, v in vals.items():
        x = _value(v, source, f"values.{k}")
        if x in (INF, -INF):
            raise FormatError(source, f"values.{k}", "filter values must be finite")
        out[str(k)] = Fraction(x)
    return out


def filter_to_json(values: Dict[str, Any]) -> dict:
    return {"values": {k: _json_value(Fraction(v)) for k, v in values.items()}}


def fraction_json(v) -> Union[int, str]:
    return _json_value(Fraction(v))


def classification_to_json(C: CellComplex, cl) -> dict:
    return {"classes": cl.named(C), "endpoints": list(cl.endpoints)}


def rows_to_table(rows: List[dict], columns: List[str]) -> str:
    """Fixed-width text table."""
    cells = [[str(r.get(c, "")) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[k]) for row in cells]) for k, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)))
    return "\n".join(lines)
