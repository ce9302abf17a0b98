"""
Command line front end.

::

    gluings table  --family eps --g 0 --K 2 --N 1..10
    gluings brute  --family B --g 0 --K 2 --N 1..5 --workers 2
    gluings verify --family eps --g 0 --K 2 --N 1..5
    gluings delete-audit --N 2..5 --K 1..10 --g 0..2
    gluings identities --N 1..20

Ranges are inclusive ``lo..hi`` or a single integer. Tables are written as
CSV (``family,g,N,K,M,value``), JSON or aligned text. For ``eps_tilde`` the
``N`` column holds the total number of arcs and ``M`` the arcs of face 1.

Exit status: 0 on success, 1 when a verification or audit finds a mismatch
(the failure list is printed as JSON on stderr), 2 on an invalid request.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from pathlib import Path
from typing import Callable, Optional

from . import enumeration as en
from . import formulas as fm
from .deletion import ClassCache, audit_lemma_multiplicities

SCHEMA_VERSION = 1
CACHE_ENV = "GLUINGS_CACHE_DIR"
FIELDS = ("family", "g", "N", "K", "M", "value")
FAMILIES = ("eps", "B", "eps_tilde")


class ConfigError(ValueError):
    """An invalid request; maps to exit status 2."""


def parse_range(text: str) -> range:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; use lo..hi")
    if lo > hi or lo < 0:
        raise argparse.ArgumentTypeError(f"empty or negative range {text!r}")
    return range(lo, hi + 1)


# value sources -------------------------------------------------------------------

def formula_value(family: str, g: int, n: int, k: int, m: Optional[int], method: str = "closed") -> int:
    """Value of a count from recurrences / closed forms, or ConfigError if none is known."""
    if family == "eps_tilde":
        if g != 0 or k != 2:
            raise ConfigError("eps_tilde formulas exist for g=0, K=2 only")
        return fm.rec_eps_tilde(n, m)
    if family not in ("eps", "B"):
        raise ConfigError(f"unknown family {family!r}")
    if n == 0:
        return 1 if (g == 0 and k == 1) else 0
    if fm.zero_region(g, n, k):
        return 0
    rec = method == "rec"
    if family == "eps":
        if k == 1:
            return fm.eps_one_face(g, n)
        if k == 2 and g == 0:
            return fm.rec_eps0_2(n) if rec else fm.closed_eps0_2(n)
        if k == 2 and g == 1:
            return fm.rec_eps1_2(n) if rec else fm.closed_eps1_2(n)
        if k == 2 and g == 2:
            return fm.closed_eps2_2(n)
        if k == 3 and g == 0:
            return fm.rec_eps0_3(n) if rec else fm.closed_eps0_3(n)
    else:
        if k == 1:
            return fm.bicolored_one_face(g, n)
        if k == 2 and g == 0:
            return fm.rec_B0_2(n) if rec else fm.closed_B0_2(n)
    raise ConfigError(f"no formula for {family} with g={g}, K={k}")


def brute_value(family: str, g: int, n: int, k: int, m: Optional[int], workers: int = 1,
                max_arcs: Optional[int] = None) -> int:
    try:
        if family == "eps":
            return en.count_eps(g, n, k, workers=workers, max_arcs=max_arcs)
        if family == "B":
            return en.count_bicolored(g, n, k, workers=workers, max_arcs=max_arcs)
        if family == "eps_tilde":
            if g != 0:
                raise ConfigError("eps_tilde is defined for g=0")
            return en.count_eps_tilde(n, m, k, workers=workers, max_arcs=max_arcs)
    except en.ExhaustionBoundError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown family {family!r}")


def parameter_rows(args) -> list[dict]:
    rows = []
    ms = args.M if args.family == "eps_tilde" else [None]
    if args.family == "eps_tilde" and args.M is None:
        raise ConfigError("eps_tilde needs --M")
    for g in args.g:
        for k in args.K:
            if k < 1:
                raise ConfigError("K must be >= 1")
            for n in args.N:
                for m in ms:
                    rows.append({"family": args.family, "g": g, "N": n, "K": k, "M": m})
    return rows


# cache -------------------------------------------------------------------------

def cache_dir(args) -> Optional[Path]:
    if args.no_cache:
        return None
    if args.cache_dir:
        return Path(args.cache_dir)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "gluings"


def cached_rows(args, source: str, compute: Callable[[], list[dict]]) -> list[dict]:
    """Rows for one (family, parameter block), read from or written to the cache."""
    params = {"family": args.family, "source": source, "g": _span(args.g), "N": _span(args.N),
              "K": _span(args.K), "M": _span(args.M) if args.family == "eps_tilde" else None,
              "method": getattr(args, "method", "closed") if source == "formula" else None}
    directory = cache_dir(args)
    path = None
    if directory is not None:
        digest = hashlib.sha256(json.dumps(params, sort_keys=True).encode()).hexdigest()[:20]
        path = directory / f"{args.family}-{source}-{digest}.json"
        if path.exists():
            data = json.loads(path.read_text())
            if data.get("schema_version") == SCHEMA_VERSION and data.get("params") == params:
                return data["rows"]
    rows = compute()
    if path is not None:
        directory.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"schema_version": SCHEMA_VERSION, "params": params, "rows": rows},
                                  indent=1, sort_keys=True))
        tmp.replace(path)
    return rows


def _span(r):
    return None if r is None else [r.start, r.stop - 1]


# output --------------------------------------------------------------------------

def render(rows: list[dict], fields, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{f: row.get(f) for f in fields} for row in rows], indent=1) + "\n"
    cells = [["" if row.get(f) is None else str(row[f]) for f in fields] for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(fields)
        w.writerows(cells)
        return buf.getvalue()
    widths = [max([len(f)] + [len(c[i]) for c in cells]) for i, f in enumerate(fields)]
    lines = ["  ".join(f.rjust(wd) for f, wd in zip(fields, widths))]
    lines += ["  ".join(c.rjust(wd) for c, wd in zip(cell, widths)) for cell in cells]
    return "\n".join(lines) + "\n"


# commands ------------------------------------------------------------------------

def cmd_table(args, out) -> int:
    def compute():
        return [dict(r, value=formula_value(r["family"], r["g"], r["N"], r["K"], r["M"], args.method))
                for r in parameter_rows(args)]
    rows = cached_rows(args, "formula", compute)
    out.write(render(rows, FIELDS, args.format))
    return 0


def cmd_brute(args, out) -> int:
    def compute():
        return [dict(r, value=brute_value(r["family"], r["g"], r["N"], r["K"], r["M"],
                                          args.workers, args.max_arcs))
                for r in parameter_rows(args)]
    rows = cached_rows(args, "brute", compute)
    out.write(render(rows, FIELDS, args.format))
    return 0


def cmd_verify(args, out, err) -> int:
    formula = cached_rows(args, "formula", lambda: [
        dict(r, value=formula_value(r["family"], r["g"], r["N"], r["K"], r["M"], args.method))
        for r in parameter_rows(args)])
    brute = cached_rows(args, "brute", lambda: [
        dict(r, value=brute_value(r["family"], r["g"], r["N"], r["K"], r["M"], args.workers, args.max_arcs))
        for r in parameter_rows(args)])
    rows, failures = [], []
    for f, b in zip(formula, brute):
        row = {k: f[k] for k in ("family", "g", "N", "K", "M")}
        row.update(formula=f["value"], brute=b["value"], match=f["value"] == b["value"])
        rows.append(row)
        if not row["match"]:
            failures.append(row)
    out.write(render(rows, ("family", "g", "N", "K", "M", "formula", "brute", "match"), args.format))
    if failures:
        err.write(json.dumps({"failures": failures}) + "\n")
        return 1
    return 0


def cmd_audit(args, out, err) -> int:
    cache = ClassCache(args.bicolored, args.max_arcs)
    reports = []
    for n in args.N:
        if n < 2:
            continue
        for k in args.K:
            for g in args.g:
                if k < 1 or n < k + 2 * g - 1:
                    continue
                try:
                    if not cache.get(g, n, k):
                        continue
                    reports.append(audit_lemma_multiplicities(
                        g, n, k, args.bicolored, args.workers, args.max_arcs, cache))
                except en.ExhaustionBoundError as exc:
                    raise ConfigError(str(exc)) from exc
    if args.format == "json":
        out.write(json.dumps([r.to_dict() for r in reports], indent=1, sort_keys=True) + "\n")
    else:
        rows = []
        for r in reports:
            for case, v in r.checks.items():
                rows.append({"g": r.g, "N": r.edges, "K": r.faces, "case": case,
                             "successors": v["successors"], "hits": v["hits"], "passed": v["passed"]})
        out.write(render(rows, ("g", "N", "K", "case", "successors", "hits", "passed"), args.format))
    failures = [dict(v, g=r.g, N=r.edges, K=r.faces) for r in reports for v in r.violations]
    if failures:
        err.write(json.dumps({"failures": failures}) + "\n")
        return 1
    return 0


def cmd_identities(args, out, err) -> int:
    tilde = None
    if args.source == "brute":
        def tilde(arcs, first):
            return brute_value("eps_tilde", 0, arcs, 2, first, args.workers, args.max_arcs)
    report = fm.identity_suite(args.N.stop - 1, tilde=tilde, n_min=max(args.N.start, 1))
    out.write(render(report["rows"], ("identity", "N", "lhs", "rhs", "ok"), args.format))
    if report["failures"]:
        err.write(json.dumps({"failures": report["failures"]}) + "\n")
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gluings", description="Exact counts of polygon gluings.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    common.add_argument("--workers", type=int, default=1, help="number of search-space slices")
    common.add_argument("--max-arcs", type=int, default=None,
                        help=f"exhaustion bound on total arcs (default {en.DEFAULT_MAX_ARCS})")
    common.add_argument("--cache-dir", default=None, help=f"cache directory (default ${CACHE_ENV})")
    common.add_argument("--no-cache", action="store_true")

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("--family", choices=FAMILIES, required=True)
    family.add_argument("--g", type=parse_range, default=range(0, 1))
    family.add_argument("--N", type=parse_range, required=True)
    family.add_argument("--K", type=parse_range, default=range(1, 2))
    family.add_argument("--M", type=parse_range, default=None)
    family.add_argument("--method", choices=("closed", "rec"), default="closed",
                        help="formula route where both exist")

    sub.add_parser("table", parents=[common, family], help="values from formulas")
    sub.add_parser("brute", parents=[common, family], help="values from exhaustive enumeration")
    sub.add_parser("verify", parents=[common, family], help="compare formulas with enumeration")

    audit = sub.add_parser("delete-audit", parents=[common], help="check deletion preimage counts")
    audit.add_argument("--g", type=parse_range, default=range(0, 3))
    audit.add_argument("--N", type=parse_range, required=True)
    audit.add_argument("--K", type=parse_range, default=range(1, 11))
    audit.add_argument("--bicolored", action="store_true")

    ident = sub.add_parser("identities", parents=[common], help="weighted sums of eps_tilde")
    ident.add_argument("--N", type=parse_range, required=True)
    ident.add_argument("--source", choices=("rec", "brute"), default="rec")
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.workers < 1:
        err.write("error: --workers must be >= 1\n")
        return 2
    try:
        if args.command == "table":
            return cmd_table(args, out)
        if args.command == "brute":
            return cmd_brute(args, out)
        if args.command == "verify":
            return cmd_verify(args, out, err)
        if args.command == "delete-audit":
            return cmd_audit(args, out, err)
        return cmd_identities(args, out, err)
    except (ConfigError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
