"""Command-line front end: counts, tables and the full verification run."""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import __version__
from .bernardi import bernardi_count, region_contributions, tree_contribution_by_boxing
from .contrib import format_family, format_interval, tree_contribution_details
from .geometry import (
    GeometryError,
    catalan_faces,
    enumerate_regions,
    euler_sums,
    in_face_family,
    region_key_of_point,
)
from .oracle import acyclic_orientations, char_poly, regions_via_zaslavsky
from .spec_model import OffsetSpec, SpecError, load_spec, max_offset, preset, serialize_spec
from .trees import enumerate_trees

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def fmt_point(x) -> str:
    return " ".join(f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator) for v in x)


def key_text(d: dict) -> str:
    return " ".join(f"{k}:{v}" for k, v in d.items())


def graph_edges(spec: OffsetSpec) -> list[tuple[int, int]] | None:
    """Edges when the spec is graphical (every offset set is empty or {0})."""
    if any(offs not in ((), (0,)) for offs in spec.offsets):
        return None
    return [p for p, offs in zip(spec.pairs, spec.offsets) if offs]


def _pmap(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def emit(rows: list[dict], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
        return
    if not rows:
        return
    cols = list(rows[0])
    if fmt == "csv":
        writer = csv.DictWriter(out, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return
    cells = [[str(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    out.write("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
    for row in cells:
        out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def spec_from_args(args) -> OffsetSpec:
    if args.config:
        try:
            return load_spec(args.config)
        except OSError as exc:
            raise SpecError(f"cannot read config: {exc}") from None
    if not args.preset:
        raise SpecError("give --preset or --config")
    if args.n is None:
        raise SpecError("--preset needs -n")
    edges = []
    for tok in args.edges or []:
        try:
            a, b = (int(t) for t in tok.split("-"))
        except ValueError:
            raise SpecError(f"bad edge {tok!r}, expected a-b") from None
        edges.append((a, b))
    return preset(args.preset, args.n, m=args.m, edges=edges)


# per-command row builders

def region_rows(spec: OffsetSpec) -> list[dict]:
    return [{"region": key_text(key.to_json()), "witness": fmt_point(x)} for key, x in enumerate_regions(spec)]


def face_rows(spec: OffsetSpec) -> list[dict]:
    m = max_offset(spec)
    rows = []
    for f in catalan_faces(spec.n, m):
        member = in_face_family(spec, f.witness)
        rows.append({
            "face": key_text(f.key.to_json(_catalan_spec(spec))),
            "dim": f.dim,
            "marked_tree": f.marked.tree.encode(),
            "marked_edges": " ".join(f"{j}-{k}" for j, k in sorted(f.marked.marked)),
            "region": key_text(region_key_of_point(spec, f.witness).to_json()) if member else "",
            "in_F_S": member,
            "witness": fmt_point(f.witness),
        })
    return rows


def _catalan_spec(spec: OffsetSpec) -> OffsetSpec:
    return preset("catalan", spec.n, m=max_offset(spec))


def region_contrib_rows(spec: OffsetSpec) -> list[dict]:
    euler = euler_sums(spec)
    rows = []
    for rc in region_contributions(spec):
        rows.append({
            "region": key_text(rc.key.to_json()),
            "trees": len(rc.trees),
            "boxings": rc.boxings,
            "contribution": rc.value,
            "euler": euler.get(rc.key, 0),
            "ok": rc.value == 1 and euler.get(rc.key, 0) == 1,
        })
    return rows


def _tree_row(item) -> dict:
    spec, tree = item
    by_box = tree_contribution_by_boxing(spec, tree)
    d = tree_contribution_details(spec, tree)
    return {
        "tree": tree.encode(),
        "w_boxing": by_box,
        "w_geometric": d.by_product,
        "I_S": format_family(d.minimal),
        "components": " ".join(format_interval(J) for J in d.components),
        "uncovered": format_interval(d.uncovered),
        "ok": by_box == d.by_product and by_box in (-1, 0, 1),
    }


def tree_contrib_rows(spec: OffsetSpec, jobs: int = 1) -> list[dict]:
    items = [(spec, t) for t in enumerate_trees(spec.n, max_offset(spec))]
    return _pmap(_tree_row, items, jobs)


def oracle_rows(spec: OffsetSpec) -> list[dict]:
    poly = char_poly(spec)
    return [{"chi": str(poly), "coefficients": " ".join(map(str, poly.coefficients)),
             "primes": " ".join(map(str, poly.primes)), "regions": regions_via_zaslavsky(spec, poly)}]


@dataclass
class RunReport:
    spec: dict
    counts: dict = field(default_factory=dict)
    regions: list = field(default_factory=list)
    trees: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> dict:
        return {"spec": self.spec, "counts": self.counts, "regions": self.regions, "trees": self.trees,
                "verdicts": self.verdicts, "verdict": "pass" if self.passed else "fail", "timing": self.timing}


def verify_all(spec: OffsetSpec, jobs: int = 1, trees: bool = True) -> RunReport:
    report = RunReport(serialize_spec(spec))

    def timed(name, fn):
        t0 = time.perf_counter()
        out = fn()
        report.timing[name] = round(time.perf_counter() - t0, 4)
        return out

    report.counts["bernardi"] = timed("bernardi", lambda: bernardi_count(spec).value)
    report.counts["geometric"] = timed("geometric", lambda: sum(1 for _ in enumerate_regions(spec)))
    report.counts["zaslavsky"] = timed("zaslavsky", lambda: regions_via_zaslavsky(spec))
    edges = graph_edges(spec)
    if edges is not None:
        report.counts["acyclic_orientations"] = timed("acyclic", lambda: acyclic_orientations(spec.n, edges))
    report.regions = timed("regions", lambda: region_contrib_rows(spec))
    if trees:
        report.trees = timed("trees", lambda: tree_contrib_rows(spec, jobs))
    report.verdicts["counts_agree"] = len(set(report.counts.values())) == 1
    report.verdicts["regions_contribute_one"] = all(r["ok"] for r in report.regions)
    report.verdicts["region_total_matches"] = (len(report.regions) == report.counts["geometric"]
                                               and sum(r["contribution"] for r in report.regions) == report.counts["bernardi"])
    if trees:
        report.verdicts["tree_contributions_agree"] = all(r["ok"] for r in report.trees)
    return report


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", choices=["braid", "catalan", "shi", "linial", "semiorder", "graphical"])
    common.add_argument("-n", type=int)
    common.add_argument("-m", type=int)
    common.add_argument("--edges", nargs="*", metavar="A-B", help="graphical edges, e.g. 1-2 2-3")
    common.add_argument("--config", metavar="PATH", help="JSON arrangement file")
    common.add_argument("--format", choices=["table", "csv", "json"], default="table")
    common.add_argument("--jobs", type=int, default=1)

    parser = argparse.ArgumentParser(prog="braidregions", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("count", parents=[common], help="Bernardi signed count of regions")
    p.add_argument("--verify", action="store_true", help="also count geometrically and via the oracle")
    sub.add_parser("regions", parents=[common], help="region table with exact witnesses")
    sub.add_parser("faces", parents=[common], help="Catalan faces with marked trees")
    sub.add_parser("contrib-region", parents=[common], help="per-region contributions")
    sub.add_parser("contrib-tree", parents=[common], help="per-tree contributions, two ways")
    sub.add_parser("oracle", parents=[common], help="characteristic polynomial and Zaslavsky count")
    p = sub.add_parser("verify-all", parents=[common], help="every cross-check; JSON report with --format json")
    p.add_argument("--no-trees", action="store_true", help="skip the per-tree table")
    return parser


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = spec_from_args(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return _dispatch(args, spec, out)
    except (GeometryError, SpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _dispatch(args, spec: OffsetSpec, out) -> int:
    cmd = args.command
    if cmd == "count":
        row = {"bernardi": bernardi_count(spec).value}
        ok = True
        if args.verify:
            row["geometric"] = sum(1 for _ in enumerate_regions(spec))
            row["zaslavsky"] = regions_via_zaslavsky(spec)
            ok = len(set(row.values())) == 1
            row["verdict"] = "pass" if ok else "fail"
        emit([row], args.format, out)
        return EXIT_OK if ok else EXIT_FAIL
    if cmd == "regions":
        emit(region_rows(spec), args.format, out)
        return EXIT_OK
    if cmd == "faces":
        emit(face_rows(spec), args.format, out)
        return EXIT_OK
    if cmd == "contrib-region":
        rows = region_contrib_rows(spec)
        emit(rows, args.format, out)
        return EXIT_OK if all(r["ok"] for r in rows) else EXIT_FAIL
    if cmd == "contrib-tree":
        rows = tree_contrib_rows(spec, args.jobs)
        emit(rows, args.format, out)
        return EXIT_OK if all(r["ok"] for r in rows) else EXIT_FAIL
    if cmd == "oracle":
        emit(oracle_rows(spec), args.format, out)
        return EXIT_OK
    if cmd == "verify-all":
        report = verify_all(spec, args.jobs, trees=not args.no_trees)
        if args.format == "json":
            json.dump(report.to_json(), out, indent=2)
            out.write("\n")
        else:
            emit([{**report.counts, **report.verdicts, "verdict": "pass" if report.passed else "fail"}],
                 args.format, out)
        return EXIT_OK if report.passed else EXIT_FAIL
    raise AssertionError(cmd)


def main() -> None:
    sys.exit(run())
