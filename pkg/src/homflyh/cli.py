"""Command-line interface: compute, verify, batch.

Examples:

    homflyh compute --braid "[-1,-1,-1]" --format poly
    homflyh compute --pd "X_{1212}" --mode general --max-level 0
    homflyh verify --braid "[1,2,1,2,1,2,1,2]" --signature -6
    homflyh batch catalog.json --out-dir results/

Every flag can be supplied through an environment variable with the same
name uppercased and prefixed ``HOMFLYH_`` (e.g. ``HOMFLYH_THREADS=4``,
``HOMFLYH_CACHE_DIR=...``).  Exit codes: 0 success, 2 parse error, 3 resource
limit hit (a partial-result file is still written).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from .engine import ALGORITHM_VERSION, EngineOptions, TripleGradedDims, compute_braid_homology, compute_diagram_homology
from .knots import BraidWord, DiagramError, ParseError, braid_closure, parse_braid, parse_pd, pd_to_diagram, seifert_data
from .skein import SkeinBudgetExceeded
from .slicing import ResourceLimitExceeded


def _env_default(name: str, fallback=None):
    return os.environ.get("HOMFLYH_" + name.upper().replace("-", "_"), fallback)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="homflyh", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--braid", default=_env_default("braid"),
                       help="braid word, e.g. '[1,1,1]' or '1 1 1'")
        p.add_argument("--pd", default=_env_default("pd"),
                       help="planar diagram code, e.g. 'X_{1726}X_{3,15,4,14}...'")
        p.add_argument("--mode", default=_env_default("mode"),
                       choices=["knot", "general"],
                       help="knot (braid closures; default for --braid) or general")
        p.add_argument("--max-level", type=int,
                       default=_maybe_int(_env_default("max_level")),
                       help="general-mode level cutoff (default: -n, flagged partial)")
        p.add_argument("--threads", type=int,
                       default=int(_env_default("threads", "1")))
        p.add_argument("--cache-dir", default=_env_default("cache_dir"))
        p.add_argument("--memory-limit", type=int,
                       default=_maybe_int(_env_default("memory_limit")),
                       help="approximate cap in megabytes on slice data")
        p.add_argument("--verify", action="store_true",
                       default=_env_default("verify") == "1",
                       help="attach verification report to the output")

    pc = sub.add_parser("compute", help="compute reduced homology")
    common(pc)
    pc.add_argument("--format", default=_env_default("format", "json"),
                    choices=["json", "csv", "table", "poly"])
    pc.add_argument("--out", default=None, help="output file (default stdout)")

    pv = sub.add_parser("verify", help="compute and run the verification suite")
    common(pv)
    pv.add_argument("--signature", type=int, default=None,
                    help="knot signature for the thinness check")

    pb = sub.add_parser("batch", help="run a catalog of named braid words")
    common(pb)
    pb.add_argument("catalog", help="JSON file: [{'name':..., 'braid':[...]}, ...]")
    pb.add_argument("--out-dir", default="homflyh-results")
    return ap


def _maybe_int(v):
    return None if v in (None, "") else int(v)


def _options(args, mode: str) -> EngineOptions:
    max_dim = None
    if args.memory_limit is not None:
        # coarse accounting: ~100 bytes per basis monomial
        max_dim = max(1000, args.memory_limit * 10000)
    return EngineOptions(
        mode=mode,
        max_level=args.max_level,
        threads=max(1, args.threads),
        max_slice_dim=max_dim,
    )


def _load_input(args):
    """Returns (kind, word_or_diagram, mode)."""
    if bool(args.braid) == bool(args.pd):
        raise ParseError("provide exactly one of --braid or --pd")
    if args.braid:
        word = parse_braid(args.braid)
        mode = args.mode or "knot"
        return "braid", word, mode
    code = parse_pd(args.pd)
    diagram = pd_to_diagram(code)
    mode = args.mode or "general"
    if mode == "knot":
        raise ParseError("planar-diagram input computes in general mode")
    return "pd", diagram, mode


def cache_key(kind: str, payload, options: EngineOptions) -> str:
    blob = json.dumps(
        {
            "kind": kind,
            "payload": payload,
            "mode": options.mode,
            "max_level": options.max_level,
            "version": ALGORITHM_VERSION,
        },
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def _cached_compute(kind, obj, mode, args):
    options = _options(args, mode)
    if kind == "braid":
        payload = {"letters": list(obj.letters), "strands": obj.strands}
    else:
        payload = {
            "crossings": [[x.sign, x.a, x.b, x.c, x.d] for x in obj.crossings],
            "edges": obj.n_edges,
        }
    key = cache_key(kind, payload, options)
    cache_dir = args.cache_dir
    if cache_dir:
        path = Path(cache_dir) / (key + ".json")
        if path.exists():
            with open(path) as f:
                data = json.load(f)
            dims = TripleGradedDims(
                dims={(g["i"], g["j"], g["k"]): g["dim"] for g in data["generators"]},
                w=data["w"], s=data["s"], n=data["n"],
                mode=data["mode"], complete=data["complete"],
                source=data.get("source", ""),
            )
            return dims, True
    if kind == "braid":
        dims = compute_braid_homology(obj, options)
    else:
        dims = compute_diagram_homology(obj, options)
    if cache_dir:
        Path(cache_dir).mkdir(parents=True, exist_ok=True)
        data = dims.to_dict()
        data["source"] = dims.source
        with open(Path(cache_dir) / (key + ".json"), "w") as f:
            json.dump(data, f)
    return dims, False


# -- rendering -------------------------------------------------------------------


def render_json(dims: TripleGradedDims, name: str = "", braid=None, extra=None) -> str:
    from .verify import poincare_polynomial

    data = {
        "name": name,
        "braid": list(braid) if braid else None,
        "w": dims.w,
        "s": dims.s,
        "n": dims.n,
        "generators": [
            {"i": i, "j": j, "k": k, "dim": d} for (i, j, k), d in sorted(dims.dims.items())
        ],
        "poincare": str(poincare_polynomial(dims)),
        "complete": dims.complete,
    }
    if extra:
        data.update(extra)
    return json.dumps(data, indent=1)


def render_csv(dims: TripleGradedDims) -> str:
    lines = ["i,j,k,dim"]
    for (i, j, k), d in sorted(dims.dims.items()):
        lines.append("%d,%d,%d,%d" % (i, j, k, d))
    return "\n".join(lines) + "\n"


def _cell(entries) -> str:
    parts = []
    for i, d in sorted(entries):
        q = "1" if i == 0 else ("q^%d" % i if i != 1 else "q")
        parts.append(q if d == 1 else "%d%s" % (d, q))
    return "+".join(parts)


def render_table(dims: TripleGradedDims) -> str:
    """The published layout: columns j ascending, rows k descending."""
    cells: dict = {}
    for (i, j, k), d in dims.dims.items():
        cells.setdefault((j, k), []).append((i, d))
    js = sorted({j for (j, _) in cells})
    ks = sorted({k for (_, k) in cells}, reverse=True)
    header = ["k\\j"] + [str(j) for j in js]
    rows = [header]
    for k in ks:
        row = [str(k)]
        for j in js:
            row.append(_cell(cells[(j, k)]) if (j, k) in cells else "")
        rows.append(row)
    widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
    out = []
    for r_i, row in enumerate(rows):
        out.append(" | ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
        if r_i == 0:
            out.append("-+-".join("-" * w for w in widths))
    return "\n".join(out) + "\n"


def parse_table(text: str) -> dict:
    """Inverse of :func:`render_table`: returns {(i, j, k): dim}."""
    import re

    lines = [l for l in text.splitlines() if l.strip() and not set(l.strip()) <= {"-", "+"}]
    header = [c.strip() for c in lines[0].split("|")]
    js = [int(x) for x in header[1:] if x]
    out: dict = {}
    for line in lines[1:]:
        cols = [c.strip() for c in line.split("|")]
        k = int(cols[0])
        for j, cell in zip(js, cols[1:]):
            if not cell:
                continue
            for term in cell.split("+"):
                m = re.fullmatch(r"(\d+)?(?:q(?:\^(-?\d+))?)?|1", term.strip())
                if term.strip() == "1":
                    d, i = 1, 0
                elif m:
                    d = int(m.group(1)) if m.group(1) else 1
                    if "q" in term:
                        i = int(m.group(2)) if m.group(2) else 1
                    else:
                        i = 0
                        d = int(term)
                else:
                    raise ParseError("bad table cell %r" % term)
                out[(i, j, k)] = out.get((i, j, k), 0) + d
    return out


# -- commands --------------------------------------------------------------------


def cmd_compute(args) -> int:
    kind, obj, mode = _load_input(args)
    dims, _ = _cached_compute(kind, obj, mode, args)
    braid = obj.letters if kind == "braid" else None
    extra = {}
    if args.verify:
        extra["verification"] = _verification_report(kind, obj, dims, None)
    if args.format == "json":
        text = render_json(dims, braid=braid, extra=extra)
    elif args.format == "csv":
        text = render_csv(dims)
    elif args.format == "table":
        text = render_table(dims)
    else:
        from .verify import poincare_polynomial

        text = str(poincare_polynomial(dims)) + "\n"
    if args.out:
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    if dims.aborted:
        return 3
    return 0


def _verification_report(kind, obj, dims, signature):
    from .verify import check_structure, euler_matches_skein, kr_thin

    report = {}
    if kind == "braid":
        sd = seifert_data(braid_closure(obj)) if obj.letters else None
        ok, which = euler_matches_skein(dims, obj)
        report["euler_vs_skein"] = {"ok": ok, "orientation": which}
    else:
        sd = seifert_data(obj)
    if dims.mode == "knot":
        report["structure"] = check_structure(dims, sd).to_dict()
    if signature is not None:
        thin, match = kr_thin(dims, signature)
        report["kr_thin"] = {"thin": thin, "sigma_matched": match}
    return report


def cmd_verify(args) -> int:
    kind, obj, mode = _load_input(args)
    dims, _ = _cached_compute(kind, obj, mode, args)
    report = _verification_report(kind, obj, dims, args.signature)
    out = {
        "input": args.braid or args.pd,
        "total_dim": dims.total_dim(),
        "complete": dims.complete,
        "checks": report,
    }
    sys.stdout.write(json.dumps(out, indent=1) + "\n")
    ok = all(
        c.get("ok", True) if isinstance(c, dict) and "ok" in c else True
        for c in report.values()
    )
    structure = report.get("structure", {})
    ok = ok and all(v["ok"] for v in structure.values())
    return 0 if ok else 1


def cmd_batch(args) -> int:
    with open(args.catalog) as f:
        catalog = json.load(f)
    if isinstance(catalog, dict):
        catalog = catalog.get("knots", [])
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = []
    for item in catalog:
        name = item["name"]
        t0 = time.time()
        row = {"name": name, "status": "ok", "seconds": 0.0, "total_dim": "", "checks": ""}
        try:
            word = BraidWord(tuple(item["braid"]), max(abs(g) for g in item["braid"]) + 1)
            dims, cached = _cached_compute("braid", word, args.mode or "knot", args)
            report = _verification_report("braid", word, dims, item.get("signature"))
            row["total_dim"] = dims.total_dim()
            row["checks"] = "pass" if _report_ok(report) else "FAIL"
            row["cached"] = cached
            (out_dir / ("%s.json" % name)).write_text(
                render_json(dims, name=name, braid=word.letters, extra={"verification": report})
            )
        except (ResourceLimitExceeded, SkeinBudgetExceeded) as e:
            row["status"] = "resource-limit: %s" % e
        except (ParseError, DiagramError) as e:
            row["status"] = "error: %s" % e
        row["seconds"] = round(time.time() - t0, 3)
        summary.append(row)
    with open(out_dir / "summary.csv", "w", newline="") as f:
        wr = csv.DictWriter(f, fieldnames=["name", "status", "seconds", "total_dim", "checks", "cached"])
        wr.writeheader()
        for row in summary:
            wr.writerow(row)
    failed = [r for r in summary if r["status"] != "ok" or r["checks"] == "FAIL"]
    sys.stdout.write(
        "batch: %d entries, %d failed; summary at %s\n"
        % (len(summary), len(failed), out_dir / "summary.csv")
    )
    return 0 if not failed else 1


def _report_ok(report: dict) -> bool:
    for key, val in report.items():
        if isinstance(val, dict):
            if "ok" in val and not val["ok"]:
                return False
            for sub in val.values():
                if isinstance(sub, dict) and "ok" in sub and not sub["ok"]:
                    return False
    return True


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "compute":
            return cmd_compute(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "batch":
            return cmd_batch(args)
    except (ParseError, DiagramError) as e:
        sys.stderr.write("error: %s\n" % e)
        return 2
    except ResourceLimitExceeded as e:
        sys.stderr.write("resource limit: %s\n" % e)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
