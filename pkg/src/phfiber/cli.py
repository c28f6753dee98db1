"""Command-line interface: ``phfiber fiber|barcode|collapsible|convert-barcode|corpus``."""
from __future__ import annotations

import argparse
import sys
import time
from importlib import resources
from pathlib import Path
from typing import List, Optional

from .barcode import SOURCES, Barcode, canonical_barcode_DK, convert_barcode, elementary_barcodes, normalize
from .collapse import find_collapse, is_collapsible
from .complex import ComplexError, filter_violation
from .field import Field
from .geometry import fiber_report
from .io import (
    FormatError,
    barcode_from_json,
    classification_to_json,
    filter_from_json,
    fraction_json,
    load_json,
    read_complex,
    rows_to_table,
    write_json,
)
from .persistence import compute_barcode
from .search import Limits, parse_mode

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_TRUNCATED = 2


def resolve_barcode(ref: str, C, field: Field) -> Barcode:
    """A JSON file, ``dk`` or ``elementary:<i>`` (0-based index into the elementary barcodes)."""
    low = ref.lower()
    if low == "dk":
        return canonical_barcode_DK(C, field)
    if low.startswith("elementary:"):
        try:
            i = int(low.split(":", 1)[1])
        except ValueError:
            raise FormatError(ref, "", "expected elementary:<index>") from None
        for k, D in enumerate(elementary_barcodes(C)):
            if k == i:
                return D
        raise FormatError(ref, "", f"complex has fewer than {i + 1} elementary barcodes")
    return barcode_from_json(load_json(ref), ref)


def run_fiber(complex_ref: str, barcode_ref: str, field: Field, mode: str, limits: Limits, dump: bool) -> dict:
    C = read_complex(complex_ref, field)
    raw = resolve_barcode(barcode_ref, C, field)
    D, record = normalize(raw)
    started = time.perf_counter()
    rep = fiber_report(C, D, field, parse_mode(mode), limits, dump=dump)
    out = rep.to_json(C)
    out["barcode"] = D.to_json()["intervals"]
    out["normalization"] = [fraction_json(v) for v in record]
    out["field"] = field.name
    out["mode"] = mode
    out["seconds"] = round(time.perf_counter() - started, 3)
    return out


def cmd_fiber(args) -> int:
    field = Field.parse(args.field)
    limits = Limits.from_env(args.max_results, args.max_nodes)
    out = run_fiber(args.complex, args.barcode, field, args.mode, limits, args.dump_polyhedra)
    write_json(out, args.output)
    return EXIT_TRUNCATED if out["truncated"] else EXIT_OK


def cmd_barcode(args) -> int:
    field = Field.parse(args.field)
    C = read_complex(args.complex, field)
    values = filter_from_json(load_json(args.filter), args.filter)
    if args.mode == "cell":
        bad = filter_violation(C, values, "cell", check_range=False)
        if bad is not None:
            raise ComplexError(f"invalid filter: {bad[0]} enters before its face {bad[1]}")
    B = compute_barcode(C, values, field)
    D, record = normalize(B)
    write_json(
        {
            "barcode": D.to_json()["intervals"],
            "normalization": [fraction_json(v) for v in record],
            "raw": B.to_json()["intervals"],
        },
        args.output,
    )
    return EXIT_OK


def cmd_collapsible(args) -> int:
    field = Field.parse(args.field)
    C = read_complex(args.complex, field)
    res = is_collapsible(C, field)
    out = {
        "collapsible": res.collapsible,
        "chain_level": res.chain_level,
        "reason": res.reason,
        "caveat": res.caveat,
        "witness": classification_to_json(C, res.witness) if res.witness else None,
        "barcode": res.barcode.to_json()["intervals"] if res.barcode else None,
    }
    if C.has_closure and args.direct:
        steps = find_collapse(C)
        out["direct"] = None if steps is None else [[C.names[t], C.names[s]] for t, s in steps]
    write_json(out, args.output)
    return EXIT_OK


def cmd_convert(args) -> int:
    B = barcode_from_json(load_json(args.barcode), args.barcode)
    write_json(convert_barcode(B, args.source).to_json(), args.output)
    return EXIT_OK


def default_manifest() -> Path:
    return Path(str(resources.files("phfiber") / "data" / "corpus.json"))


def run_corpus(manifest: Path, limits: Limits) -> List[dict]:
    """One row per job; a failing row records its error and the batch goes on."""
    data = load_json(manifest)
    jobs = data.get("jobs", []) if isinstance(data, dict) else data
    base = manifest.parent
    rows = []
    for k, job in enumerate(jobs):
        name = job.get("name", f"job{k}")
        row = {"name": name, "field": job.get("field", "gf2"), "mode": job.get("mode", "all")}
        try:
            cref = job["complex"]
            if not cref.lower().startswith("builtin:"):
                cref = str(base / cref)
            bref = job.get("barcode", "dk")
            if bref.lower() != "dk" and not bref.lower().startswith("elementary:"):
                bref = str(base / bref)
            rep = run_fiber(cref, bref, Field.parse(row["field"]), row["mode"], limits, False)
            row.update(
                status="truncated" if rep["truncated"] else "ok",
                counts=_bins(rep["counts_by_dim"]),
                facets=_bins(rep["facet_dims"]),
                betti=tuple(rep["betti"]),
                non_top=rep["non_top_dimensional_facets"],
                seconds=rep["seconds"],
            )
        except Exception as e:  # per-row isolation
            row.update(status="error", error=str(e))
        rows.append(row)
    return rows


def _bins(d: dict) -> List[int]:
    """Counts binned by dimension as an array indexed by dimension."""
    if not d:
        return []
    top = max(int(k) for k in d)
    return [d.get(str(k), 0) for k in range(top + 1)]


def cmd_corpus(args) -> int:
    manifest = Path(args.manifest) if args.manifest else default_manifest()
    limits = Limits.from_env(args.max_results, args.max_nodes)
    rows = run_corpus(manifest, limits)
    if args.output:
        write_json({"rows": rows}, args.output)
    cols = ["name", "field", "mode", "status", "counts", "facets", "betti", "non_top", "seconds"]
    print(rows_to_table(rows, cols))
    for r in rows:
        if r["status"] == "error":
            print(f"{r['name']}: {r['error']}", file=sys.stderr)
    if any(r["status"] == "error" for r in rows):
        return EXIT_ERROR
    return EXIT_TRUNCATED if any(r["status"] == "truncated" for r in rows) else EXIT_OK


def _positive(s: str) -> int:
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phfiber", description="Fibers of the persistence map on cell complexes.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_field(q):
        q.add_argument("--field", default="gf2", help="gf2, gfp:<p> or q (default gf2)")

    def add_limits(q):
        q.add_argument("--max-results", type=_positive, default=None)
        q.add_argument("--max-nodes", type=_positive, default=None)

    q = sub.add_parser("fiber", help="enumerate the fiber of a barcode and report its statistics")
    q.add_argument("--complex", required=True, help="complex JSON file or builtin:NAME")
    q.add_argument("--barcode", required=True, help="barcode JSON file, dk or elementary:<i>")
    add_field(q)
    q.add_argument("--mode", default="all", help="all, cell or lower:<p>")
    add_limits(q)
    q.add_argument("--dump-polyhedra", action="store_true")
    q.add_argument("--output", "-o", default=None)
    q.set_defaults(func=cmd_fiber)

    q = sub.add_parser("barcode", help="barcode of a filter")
    q.add_argument("--complex", required=True)
    q.add_argument("--filter", required=True)
    add_field(q)
    q.add_argument("--mode", choices=("chain", "cell"), default="chain")
    q.add_argument("--output", "-o", default=None)
    q.set_defaults(func=cmd_barcode)

    q = sub.add_parser("collapsible", help="decide collapsibility through elementary barcodes")
    q.add_argument("--complex", required=True)
    add_field(q)
    q.add_argument("--direct", action="store_true", help="also search for explicit collapses")
    q.add_argument("--output", "-o", default=None)
    q.set_defaults(func=cmd_collapsible)

    q = sub.add_parser("convert-barcode", help="homology barcode from a (relative) (co)homology barcode")
    q.add_argument("--barcode", required=True)
    q.add_argument("--source", required=True, choices=SOURCES)
    q.add_argument("--output", "-o", default=None)
    q.set_defaults(func=cmd_convert)

    q = sub.add_parser("corpus", help="run every job of a manifest and print a table")
    q.add_argument("--manifest", default=None, help="manifest JSON (default: bundled corpus)")
    add_limits(q)
    q.add_argument("--output", "-o", default=None)
    q.set_defaults(func=cmd_corpus)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, ComplexError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
