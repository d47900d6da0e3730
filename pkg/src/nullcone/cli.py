"""Command-line front end.

    nullcone analyze --type A --rank 7 --weight 0,0,0,1,0,0,0
    nullcone verify --dim-cap 42
    nullcone weights --type B --rank 3 --weight 0,0,1 --format tsv
    nullcone list-catalog --max-rank 4

Exit codes: 0 success, 1 verification mismatch, 2 usage error,
3 resource budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from . import catalog
from .exactgeom import sub
from .rootsystem import OrbitTooLarge, RootSystemError, RootSystemType, root_datum
from .strata import DEFAULT_MAX_SUBSETS, BudgetExceeded, EnumOptions, NullconeReport, TrivialModule, analyze
from .weightsys import DEFAULT_DIM_CAP, ModuleTooLarge, WeightError, WeightSystem, weight_system, weyl_dim

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

REPORT_SCHEMA = "nullcone-report"
VERIFY_SCHEMA = "nullcone-verify"
WEIGHTS_SCHEMA = "nullcone-weights"
CATALOG_SCHEMA = "nullcone-catalog-listing"
SCHEMA_VERSION = 1

SCOPE_CATALOG = "catalog"
SCOPE_OTHER = "maximal-dimension components only"

VERIFY_DIM_CAP = 70


class UsageError(Exception):
    pass


def q(x) -> str:
    """Exact rational as a ``p/q`` string (integers print without a slash)."""
    return str(Fraction(x))


def _qs(v) -> List[str]:
    return [q(x) for x in v]


def _fmt_vec(v) -> str:
    return "(" + ", ".join(_qs(v)) + ")"


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def _tsv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    lines = ["\t".join(header)]
    lines += ["\t".join("" if c is None else str(c) for c in row) for row in rows]
    return "\n".join(lines) + "\n"


def _table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [list(header)] + [["-" if c is None else str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    out = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    out.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# input parsing


def parse_type(series: str, rank: int) -> RootSystemType:
    try:
        return RootSystemType(series.upper(), rank)
    except RootSystemError as exc:
        raise UsageError(str(exc)) from exc


def parse_weight(text: str, rank: int) -> tuple:
    try:
        coeffs = tuple(int(c) for c in text.split(","))
    except ValueError:
        raise UsageError(f"weight must be comma-separated integers, got {text!r}") from None
    if len(coeffs) != rank:
        raise UsageError(f"weight needs {rank} coefficients, got {len(coeffs)}")
    if any(c < 0 for c in coeffs):
        raise UsageError("weight coefficients must be nonnegative")
    if not any(coeffs):
        raise UsageError("the zero weight gives the trivial module")
    return coeffs


def label(t: RootSystemType, coeffs: Sequence[int]) -> str:
    terms = [f"w{i}" if c == 1 else f"{c}w{i}" for i, c in enumerate(coeffs, start=1) if c]
    return f"({t}, {'+'.join(terms)})"


# ---------------------------------------------------------------------------
# report assembly


def report_dict(ws: WeightSystem, rep: NullconeReport, entry: Optional[catalog.CatalogEntry],
                seconds: Optional[float] = None) -> dict:
    d = ws.datum
    strata = []
    for s in rep.strata:
        lam = s.candidate.lam
        strata.append({
            "lambda": _qs(d.fw_coords(lam)),
            "lambda_euclid": _qs(lam),
            "norm2": q(s.candidate.norm2),
            "dim_L": s.dim_L,
            "dim_flag": s.dim_flag,
            "dim_total": s.dim_total,
            "maximal": s.dim_total == rep.dim_nullcone,
        })
    out = {
        "schema": REPORT_SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "input": {"type": d.type.series, "rank": d.rank, "weight": list(ws.highest)},
        "label": label(d.type, ws.highest),
        "scope": SCOPE_CATALOG if entry else SCOPE_OTHER,
        "catalog": _catalog_block(entry, ws.dim) if entry else None,
        "dim_module": rep.dim_module,
        "dim_nullcone": rep.dim_nullcone,
        "num_components": rep.num_components,
        "strata": strata,
        "counters": dict(sorted(rep.counters.items())),
    }
    if seconds is not None:
        out["timing"] = {"seconds": round(seconds, 3)}
    return out


def _catalog_block(e: catalog.CatalogEntry, dim_module: int) -> dict:
    exp = catalog.expected(e, dim_module)
    return {
        "label": e.label,
        "lists": list(e.lists),
        "trdeg_class": e.trdeg_class,
        "expected_components": exp.components,
        "expected_dim_nullcone": exp.dim_nullcone,
        "dim_source": exp.source,
        "paper_dim_nullcone": e.paper_dim_nullcone,
        "caveat": e.caveat,
        "note": e.note,
    }


def render_report(rd: dict, fmt: str) -> str:
    if fmt == "json":
        return _dump(rd)
    header = ["lambda", "norm2", "dim_L", "dim_flag", "dim_total", "maximal"]
    rows = [[_fmt_vec(s["lambda"]) if fmt == "human" else ",".join(s["lambda"]),
             s["norm2"], s["dim_L"], s["dim_flag"], s["dim_total"],
             ("*" if s["maximal"] else "") if fmt == "human" else int(s["maximal"])]
            for s in rd["strata"]]
    if fmt == "tsv":
        return _tsv(header, rows)
    lines = [
        f"{rd['label']}  dim V = {rd['dim_module']}",
        f"dim N = {rd['dim_nullcone']}  components = {rd['num_components']}",
    ]
    cat = rd["catalog"]
    if cat:
        exp = cat["expected_dim_nullcone"]
        lines.append(
            f"catalog: lists {','.join(cat['lists'])}, trdeg {cat['trdeg_class']}, "
            f"expected components {cat['expected_components']}"
            + (f", expected dim N {exp} ({cat['dim_source']})" if exp is not None else ""))
        if cat["caveat"]:
            lines.append(f"caveat: {cat['caveat']}")
    else:
        lines.append(f"not in the catalog: {SCOPE_OTHER}")
    c = rd["counters"]
    lines.append(f"strata: {len(rd['strata'])}  (subsets {c['subsets']}, flats {c['flats']}, "
                 f"levi checks {c['levi_checks']})")
    if "timing" in rd:
        lines.append(f"time: {rd['timing']['seconds']:.2f} s")
    return "\n".join(lines) + "\n\n" + _table(header, rows)


def _options(args) -> EnumOptions:
    if args.threads < 1:
        raise UsageError("--threads must be positive")
    if args.max_subsets < 1:
        raise UsageError("--max-subsets must be positive")
    return EnumOptions(max_subsets=args.max_subsets, threads=args.threads)


def _weight_system(args) -> WeightSystem:
    t = parse_type(args.type, args.rank)
    coeffs = parse_weight(args.weight, t.rank)
    return weight_system(root_datum(t.series, t.rank), coeffs, dim_cap=args.dim_cap)


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args, out) -> int:
    ws = _weight_system(args)
    opts = _options(args)
    entry = catalog.find(ws.datum.type.series, ws.datum.rank, ws.highest)
    t0 = time.perf_counter()
    rep = analyze(ws, opts)
    seconds = time.perf_counter() - t0
    show_time = args.timing or args.format == "human"
    out.write(render_report(report_dict(ws, rep, entry, seconds if show_time else None), args.format))
    return EXIT_OK


def verify_entry(e: catalog.CatalogEntry, dim_cap: int, opts: EnumOptions) -> dict:
    d = root_datum(e.type.series, e.type.rank)
    dim_v = weyl_dim(d, e.highest)
    exp = catalog.expected(e, dim_v)
    row = {
        "label": e.label,
        "type": e.type.series,
        "rank": e.type.rank,
        "weight": list(e.highest),
        "lists": list(e.lists),
        "dim_module": dim_v,
        "expected_components": exp.components,
        "expected_dim_nullcone": exp.dim_nullcone,
        "dim_source": exp.source,
        "paper_dim_nullcone": e.paper_dim_nullcone,
        "caveat": e.caveat,
        "num_components": None,
        "dim_nullcone": None,
        "status": "SKIPPED",
    }
    if dim_v > dim_cap:
        return row
    try:
        rep = analyze(weight_system(d, e.highest, dim_cap=max(dim_cap, dim_v)), opts)
    except BudgetExceeded as exc:
        row["status"] = "BUDGET"
        row["budget_visited"] = exc.visited
        return row
    row["num_components"] = rep.num_components
    row["dim_nullcone"] = rep.dim_nullcone
    ok = rep.num_components == exp.components and rep.dim_nullcone <= dim_v
    if exp.dim_nullcone is not None:
        ok = ok and rep.dim_nullcone == exp.dim_nullcone
    row["status"] = "PASS" if ok else "FAIL"
    return row


def cmd_verify(args, out) -> int:
    if args.max_rank < 1:
        raise UsageError("--max-rank must be >= 1")
    opts = _options(args)
    rows = [verify_entry(e, args.dim_cap, opts) for e in catalog.entries(args.max_rank)]
    tally: Dict[str, int] = {k: 0 for k in ("PASS", "FAIL", "SKIPPED", "BUDGET")}
    for r in rows:
        tally[r["status"]] += 1
    if args.format == "json":
        out.write(_dump({
            "schema": VERIFY_SCHEMA,
            "schema_version": SCHEMA_VERSION,
            "max_rank": args.max_rank,
            "dim_cap": args.dim_cap,
            "entries": rows,
            "summary": {k.lower(): v for k, v in tally.items()},
        }))
    else:
        header = ["status", "entry", "lists", "dim_V", "comps", "expected", "dim_N", "expected_dim", "source"]
        table = []
        for r in rows:
            exp_dim = r["expected_dim_nullcone"]
            if r["caveat"] and r["paper_dim_nullcone"] is not None:
                exp_dim = f"(paper {r['paper_dim_nullcone']}, not asserted)"
            table.append([r["status"], r["label"], ",".join(r["lists"]), r["dim_module"],
                          r["num_components"], r["expected_components"], r["dim_nullcone"],
                          exp_dim, r["dim_source"]])
        if args.format == "tsv":
            out.write(_tsv(header, table))
        else:
            out.write(_table(header, table))
            out.write("\n" + "  ".join(f"{k} {v}" for k, v in tally.items()) + "\n")
            bad = [r["label"] for r in rows if r["status"] in ("FAIL", "BUDGET")]
            if bad:
                out.write("offending entries: " + ", ".join(bad) + "\n")
    if tally["FAIL"]:
        return EXIT_MISMATCH
    if tally["BUDGET"]:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_weights(args, out) -> int:
    ws = _weight_system(args)
    d = ws.datum
    lam = d.from_fw(ws.highest)
    order = sorted(ws.entries, key=lambda mu: (d.height(sub(lam, mu)), [-x for x in d.fw_coords(mu)]))
    rows = [(d.fw_coords(mu), mu, ws.entries[mu]) for mu in order]
    if args.format == "json":
        out.write(_dump({
            "schema": WEIGHTS_SCHEMA,
            "schema_version": SCHEMA_VERSION,
            "input": {"type": d.type.series, "rank": d.rank, "weight": list(ws.highest)},
            "dim_module": ws.dim,
            "weights": [{"fw": _qs(fw), "euclid": _qs(mu), "multiplicity": m} for fw, mu, m in rows],
        }))
        return EXIT_OK
    header = ["fw_coords", "euclid", "mult"]
    if args.format == "tsv":
        out.write(_tsv(header, [[",".join(_qs(fw)), ",".join(_qs(mu)), m] for fw, mu, m in rows]))
    else:
        out.write(f"{label(d.type, ws.highest)}  {len(rows)} weights, dim {ws.dim}\n\n")
        out.write(_table(header, [[_fmt_vec(fw), _fmt_vec(mu), m] for fw, mu, m in rows]))
    return EXIT_OK


def cmd_list_catalog(args, out) -> int:
    if args.max_rank < 1:
        raise UsageError("--max-rank must be >= 1")
    rows = []
    for e in catalog.entries(args.max_rank):
        dim_v = weyl_dim(root_datum(e.type.series, e.type.rank), e.highest)
        rec = _catalog_block(e, dim_v)
        rec.update(type=e.type.series, rank=e.type.rank, weight=list(e.highest),
                   dim_module=dim_v, remark1=e.remark1)
        rows.append(rec)
    if args.format == "json":
        out.write(_dump({"schema": CATALOG_SCHEMA, "schema_version": SCHEMA_VERSION,
                         "max_rank": args.max_rank, "entries": rows}))
        return EXIT_OK
    header = ["entry", "lists", "trdeg", "dim_V", "components", "dim_N", "source", "notes"]
    table = []
    for r in rows:
        notes = []
        if r["remark1"]:
            notes.append("remark1")
        if r["caveat"]:
            notes.append(f"paper dim {r['paper_dim_nullcone']} (caveat)")
        if r["note"]:
            notes.append(r["note"])
        table.append([r["label"], ",".join(r["lists"]), r["trdeg_class"], r["dim_module"],
                      r["expected_components"], r["expected_dim_nullcone"], r["dim_source"],
                      "; ".join(notes)])
    out.write(_tsv(header, table) if args.format == "tsv" else _table(header, table))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nullcone", description=__doc__.split("\n\n")[0])
    sp = p.add_subparsers(dest="command", required=True)

    def common(sub_, engine=True):
        sub_.add_argument("--format", choices=("human", "json", "tsv"), default="human")
        if engine:
            sub_.add_argument("--threads", type=int, default=1)
            sub_.add_argument("--max-subsets", type=int, default=DEFAULT_MAX_SUBSETS)

    def module_args(sub_):
        sub_.add_argument("--type", required=True, help="root system series A-G")
        sub_.add_argument("--rank", required=True, type=int)
        sub_.add_argument("--weight", required=True,
                          help="comma-separated fundamental-weight coefficients, Bourbaki numbering")
        sub_.add_argument("--dim-cap", type=int, default=DEFAULT_DIM_CAP,
                          help="largest module dimension accepted")

    a = sp.add_parser("analyze", help="stratify the nullcone of one module")
    module_args(a)
    common(a)
    a.add_argument("--timing", action="store_true", help="include wall time in json/tsv output")
    a.set_defaults(func=cmd_analyze)

    v = sp.add_parser("verify", help="check every catalog entry against its expected counts")
    v.add_argument("--max-rank", type=int, default=catalog.DEFAULT_MAX_RANK)
    v.add_argument("--dim-cap", type=int, default=VERIFY_DIM_CAP)
    common(v)
    v.set_defaults(func=cmd_verify)

    w = sp.add_parser("weights", help="print the weight system of one module")
    module_args(w)
    common(w, engine=False)
    w.set_defaults(func=cmd_weights)

    c = sp.add_parser("list-catalog", help="print the catalog")
    c.add_argument("--max-rank", type=int, default=catalog.DEFAULT_MAX_RANK)
    common(c, engine=False)
    c.set_defaults(func=cmd_list_catalog)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (UsageError, WeightError, RootSystemError, TrivialModule) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        print(f"subsets visited: {exc.visited} (raise --max-subsets above {exc.budget})", file=sys.stderr)
        return EXIT_BUDGET
    except (ModuleTooLarge, OrbitTooLarge) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
