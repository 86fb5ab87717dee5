"""Command-line front end.

Subcommands: ``group info``, ``free check``, ``reach``, ``davenport``,
``extremal``, ``verify``, ``report``.  Exit codes: 0 success (including
documented discrepancies), 1 verification failure, 2 usage error, 3 node
budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import cache as cache_mod
from .davenport import DEFAULT_NODE_BUDGET, max_free_length
from .engine import BudgetExhaustedError, EngineError
from .extremal import (
    VERDICT_FAILURE,
    check_cyclic_structure,
    check_minimal_zero_sum_order,
    check_weighted_lemma,
    enumerate_extremal,
    verify_theorem,
)
from .groups import DEFAULT_SEED, Group, GroupError, build_group, quaternion_names
from .sequences import GSequence, SequenceError

SCHEMA_VERSION = cache_mod.SCHEMA_VERSION

EXIT_OK = 0
EXIT_VERIFY_FAILURE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

VERIFY_TARGETS = ("dihedral", "dicyclic", "metacyclic", "cyclic", "weighted",
                  "cyclic-structure", "minzero")

CSV_HEADER = ["group", "davenport", "extremal_count", "verdict", "missing",
              "extra", "nodes", "millis"]


@dataclass
class RunConfig:
    command: str
    group_spec: str | None
    budget: int
    output_format: str
    cache_dir: Path
    parallelism: int
    rng_seed: int
    use_cache: bool


def _common_flags(parser, *, budget=True, cache=True):
    parser.add_argument("--json", action="store_true",
                        help="emit machine-readable JSON")
    parser.add_argument("--rng-seed", type=int, default=DEFAULT_SEED,
                        help="seed for randomized spot checks (default %(default)s)")
    if budget:
        parser.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET,
                            help="node budget per search branch (default %(default)s)")
        parser.add_argument("--parallelism", type=int, default=1,
                            help="worker processes for top-level search branches")
    if cache:
        parser.add_argument("--cache-dir", type=Path, default=None,
                            help="result cache directory (default: "
                                 "$ZEROSUM_CACHE_DIR or ~/.cache/zerosum)")
        parser.add_argument("--no-cache", action="store_true",
                            help="bypass the result cache")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="zerosum",
        description="Exact zero-sum computations in small finite groups.")
    sub = p.add_subparsers(dest="command", required=True)

    grp = sub.add_parser("group", help="group-level queries")
    gsub = grp.add_subparsers(dest="subcommand", required=True)
    info = gsub.add_parser("info", help="order, exponent and element names")
    info.add_argument("--group", required=True, help="group spec, e.g. D:5 or CxC:2,4")
    _common_flags(info, budget=False, cache=False)

    free = sub.add_parser("free", help="product-1-freeness checks")
    fsub = free.add_subparsers(dest="subcommand", required=True)
    check = fsub.add_parser("check", help="decide whether sequences are product-1-free")
    check.add_argument("--group", required=True)
    check.add_argument("--seq", help="sequence text, e.g. \"[y, y, x*y^2]\"")
    check.add_argument("--seq-file", type=Path,
                       help="file with one sequence per line")
    _common_flags(check, budget=False, cache=False)

    reach = sub.add_parser("reach", help="reachable subsequence products")
    reach.add_argument("--group", required=True)
    reach.add_argument("--seq", required=True)
    reach.add_argument("--targets",
                       help="also report whether any product lands in this set")
    _common_flags(reach, budget=False, cache=False)

    dav = sub.add_parser("davenport", help="Davenport constant by exact search")
    dav.add_argument("--group", required=True)
    _common_flags(dav)

    ext = sub.add_parser("extremal", help="enumerate extremal free sequences")
    ext.add_argument("--group", required=True)
    ext.add_argument("--limit", type=int, default=None,
                     help="print at most this many sequences")
    _common_flags(ext)

    ver = sub.add_parser("verify", help="diff enumeration against predictions")
    ver.add_argument("--target", required=True, choices=VERIFY_TARGETS)
    ver.add_argument("--param", action="append", default=[],
                     metavar="KEY=VALUE",
                     help="target parameter (repeatable): n=, q=, m=, s=, group=")
    _common_flags(ver)

    rep = sub.add_parser("report", help="aggregate cached results")
    rep.add_argument("--format", choices=("table", "csv", "json"),
                     default="table")
    rep.add_argument("--cache-dir", type=Path, default=None)
    return p


def _config(args) -> RunConfig:
    cache_dir = getattr(args, "cache_dir", None) or cache_mod.default_cache_dir()
    return RunConfig(
        command=args.command,
        group_spec=getattr(args, "group", None),
        budget=getattr(args, "budget", DEFAULT_NODE_BUDGET),
        output_format="json" if getattr(args, "json", False) else "table",
        cache_dir=Path(cache_dir),
        parallelism=getattr(args, "parallelism", 1),
        rng_seed=getattr(args, "rng_seed", DEFAULT_SEED),
        use_cache=not getattr(args, "no_cache", False),
    )


def _emit(obj):
    print(json.dumps(obj, sort_keys=True))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_group_info(args) -> int:
    cfg = _config(args)
    g = build_group(args.group, rng_seed=cfg.rng_seed)
    qnames = None
    if g.spec.kind == "Q" and g.spec.params[0] == 2:
        qmap = quaternion_names(g)
        qnames = [qmap[i] for i in g.elements()]
    if cfg.output_format == "json":
        _emit({
            "schema_version": SCHEMA_VERSION,
            "group": g.key,
            "order": g.order,
            "exponent": g.exponent,
            "abelian": g.is_abelian,
            "element_names": list(g.names),
            "element_orders": list(g.element_orders),
            "quaternion_names": qnames,
        })
        return EXIT_OK
    print(f"group {g.key}: order {g.order}, exponent {g.exponent}, "
          f"{'abelian' if g.is_abelian else 'non-abelian'}")
    for i in g.elements():
        extra = f"  (= {qnames[i]})" if qnames else ""
        print(f"  [{i:3d}] {g.names[i]:12s} order {g.element_orders[i]}{extra}")
    return EXIT_OK


def _load_sequences(g: Group, args) -> list[GSequence]:
    if bool(args.seq) == bool(args.seq_file):
        raise EngineError("provide exactly one of --seq or --seq-file")
    if args.seq:
        return [GSequence.from_text(g, args.seq)]
    lines = Path(args.seq_file).read_text().splitlines()
    return [GSequence.from_text(g, line) for line in lines if line.strip()]


def cmd_free_check(args) -> int:
    cfg = _config(args)
    from .engine import is_product1_free
    g = build_group(args.group, rng_seed=cfg.rng_seed)
    seqs = _load_sequences(g, args)
    results = [{"seq": s.format(g), "free": is_product1_free(g, s)} for s in seqs]
    if cfg.output_format == "json":
        _emit({"schema_version": SCHEMA_VERSION, "group": g.key,
               "results": results})
    elif len(results) == 1:
        print(f"free: {str(results[0]['free']).lower()}")
    else:
        for r in results:
            print(f"{r['seq']}  free: {str(r['free']).lower()}")
    return EXIT_OK


def cmd_reach(args) -> int:
    cfg = _config(args)
    from .engine import has_product_in, reachable_products
    g = build_group(args.group, rng_seed=cfg.rng_seed)
    seq = GSequence.from_text(g, args.seq)
    rs = reachable_products(g, seq)
    names = [g.names[i] for i in sorted(rs)]
    hit = None
    if args.targets:
        targets = GSequence.from_text(g, args.targets)
        hit = has_product_in(g, seq, set(targets.items))
    if cfg.output_format == "json":
        _emit({"schema_version": SCHEMA_VERSION, "group": g.key,
               "seq": seq.format(g), "reachable": names, "hits_targets": hit})
        return EXIT_OK
    print(f"reachable ({len(names)}): {', '.join(names)}")
    if hit is not None:
        print(f"hits targets: {str(hit).lower()}")
    return EXIT_OK


def cmd_davenport(args) -> int:
    cfg = _config(args)
    g = build_group(args.group, rng_seed=cfg.rng_seed)
    payload = cache_mod.lookup(cfg.cache_dir, "davenport", g.key) if cfg.use_cache else None
    cached = payload is not None
    if payload is None:
        res = max_free_length(g, budget=cfg.budget, parallelism=cfg.parallelism)
        if not res.complete:
            raise BudgetExhaustedError(
                f"node budget exhausted: D({g.key}) unknown above length "
                f"{res.max_free_length}",
                best_length=res.max_free_length, nodes=res.nodes_expanded)
        payload = {
            "group": g.key,
            "davenport": res.davenport,
            "max_free_length": res.max_free_length,
            "witness": res.witness.format(g),
            "nodes": res.nodes_expanded,
            "millis": round(res.elapsed * 1000.0, 3),
        }
        if cfg.use_cache:
            cache_mod.store(cfg.cache_dir, cache_mod.make_record(
                "davenport", g.key, payload))
    shown = dict(payload)
    shown["schema_version"] = SCHEMA_VERSION
    if cached:
        shown["nodes"] = 0
        shown["millis"] = 0.0
        print(f"cache hit for davenport {g.key}", file=sys.stderr)
    if cfg.output_format == "json":
        _emit(shown)
        return EXIT_OK
    print(f"D({g.key}) = {shown['davenport']}  "
          f"(max free length {shown['max_free_length']}, witness "
          f"{shown['witness']}, nodes {shown['nodes']}, {shown['millis']} ms)")
    return EXIT_OK


def cmd_extremal(args) -> int:
    cfg = _config(args)
    g = build_group(args.group, rng_seed=cfg.rng_seed)
    payload = cache_mod.lookup(cfg.cache_dir, "extremal", g.key) if cfg.use_cache else None
    cached = payload is not None
    if payload is None:
        enum = enumerate_extremal(g, budget=cfg.budget, parallelism=cfg.parallelism)
        payload = {
            "group": g.key,
            "davenport": enum.davenport,
            "length": enum.length,
            "count": len(enum.sequences),
            "sequences": [s.format(g) for s in enum.sequences],
            "nodes": enum.nodes_expanded,
            "millis": round(enum.elapsed * 1000.0, 3),
        }
        if cfg.use_cache:
            cache_mod.store(cfg.cache_dir, cache_mod.make_record(
                "extremal", g.key, payload))
    shown = dict(payload)
    shown["schema_version"] = SCHEMA_VERSION
    if cached:
        shown["nodes"] = 0
        shown["millis"] = 0.0
        print(f"cache hit for extremal {g.key}", file=sys.stderr)
    if cfg.output_format == "json":
        if args.limit is not None:
            shown["sequences"] = shown["sequences"][:args.limit]
        _emit(shown)
        return EXIT_OK
    print(f"{g.key}: D = {shown['davenport']}, {shown['count']} extremal "
          f"free sequences of length {shown['length']}")
    seqs = shown["sequences"]
    if args.limit is not None:
        seqs = seqs[:args.limit]
    for s in seqs:
        print(f"  {s}")
    if args.limit is not None and shown["count"] > args.limit:
        print(f"  ... ({shown['count'] - args.limit} more)")
    return EXIT_OK


def _parse_params(pairs) -> dict:
    out = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise EngineError(f"malformed --param {pair!r}; expected KEY=VALUE")
        out[key.strip()] = value.strip()
    return out


def _int_param(params: dict, key: str) -> int:
    if key not in params:
        raise EngineError(f"verify target needs --param {key}=...")
    try:
        return int(params[key])
    except ValueError:
        raise EngineError(f"--param {key}={params[key]!r} is not an integer") from None


def _run_verify(target: str, params: dict, cfg: RunConfig):
    if target == "dihedral":
        group = build_group(f"D:{_int_param(params, 'n')}", rng_seed=cfg.rng_seed)
        return verify_theorem(group, budget=cfg.budget, parallelism=cfg.parallelism)
    if target == "dicyclic":
        group = build_group(f"Q:{_int_param(params, 'n')}", rng_seed=cfg.rng_seed)
        return verify_theorem(group, budget=cfg.budget, parallelism=cfg.parallelism)
    if target == "cyclic":
        group = build_group(f"C:{_int_param(params, 'n')}", rng_seed=cfg.rng_seed)
        return verify_theorem(group, budget=cfg.budget, parallelism=cfg.parallelism)
    if target == "metacyclic":
        q, m, s = (_int_param(params, k) for k in ("q", "m", "s"))
        group = build_group(f"M:{q},{m},{s}", rng_seed=cfg.rng_seed)
        return verify_theorem(group, budget=cfg.budget, parallelism=cfg.parallelism)
    if target == "weighted":
        return check_weighted_lemma(_int_param(params, "n"))
    if target == "cyclic-structure":
        return check_cyclic_structure(_int_param(params, "n"), budget=cfg.budget)
    if target == "minzero":
        if "group" not in params:
            raise EngineError("verify --target minzero needs --param group=<spec>")
        group = build_group(params["group"], rng_seed=cfg.rng_seed)
        return check_minimal_zero_sum_order(group, budget=cfg.budget)
    raise EngineError(f"unknown verify target {target!r}")


def cmd_verify(args) -> int:
    cfg = _config(args)
    params = _parse_params(args.param)
    key = args.target + ":" + ",".join(f"{k}={params[k]}" for k in sorted(params))
    payload = cache_mod.lookup(cfg.cache_dir, "verify", key) if cfg.use_cache else None
    if payload is None:
        report = _run_verify(args.target, params, cfg)
        payload = report.to_payload()
        if cfg.use_cache:
            cache_mod.store(cfg.cache_dir, cache_mod.make_record("verify", key, payload))
    else:
        print(f"cache hit for verify {key}", file=sys.stderr)
    if cfg.output_format == "json":
        shown = dict(payload)
        shown["schema_version"] = SCHEMA_VERSION
        _emit(shown)
    else:
        print(f"verify {payload['target']} {payload['group']}: {payload['verdict']}")
        print(f"  enumerated {payload['enumerated_count']}, "
              f"predicted {payload['predicted_count']}, "
              f"missing {len(payload['missing'])}, extra {len(payload['extra'])}")
        for s in payload["missing"]:
            print(f"  missing: {s}")
        for s in payload["extra"]:
            print(f"  extra:   {s}")
        for k, v in payload["details"].items():
            print(f"  {k}: {v}")
    return EXIT_VERIFY_FAILURE if payload["verdict"] == VERDICT_FAILURE else EXIT_OK


_WORST = {"failure": 2, "documented-discrepancy": 1, "exact-match": 0, "": -1}


def _report_rows(records) -> list[dict]:
    rows: dict[str, dict] = {}

    def row(group):
        return rows.setdefault(group, {
            "group": group, "davenport": "", "extremal_count": "",
            "verdict": "", "missing": "", "extra": "", "nodes": 0,
            "millis": 0.0})

    for rec in records:
        p = rec.payload
        if rec.kind == "davenport":
            r = row(p["group"])
            r["davenport"] = p["davenport"]
        elif rec.kind == "extremal":
            r = row(p["group"])
            r["extremal_count"] = p["count"]
            if r["davenport"] == "":
                r["davenport"] = p["davenport"]
        elif rec.kind == "verify":
            r = row(p["group"])
            if r["extremal_count"] == "":
                r["extremal_count"] = p["enumerated_count"]
            if r["davenport"] == "" and "davenport" in p.get("details", {}):
                r["davenport"] = p["details"]["davenport"]
            if _WORST.get(p["verdict"], 0) >= _WORST.get(r["verdict"], -1):
                r["verdict"] = p["verdict"]
            r["missing"] = (r["missing"] or 0) + len(p["missing"])
            r["extra"] = (r["extra"] or 0) + len(p["extra"])
        else:
            continue
        r["nodes"] += int(p.get("nodes", 0))
        r["millis"] = round(r["millis"] + float(p.get("millis", 0.0)), 3)
    return [rows[k] for k in sorted(rows)]


def cmd_report(args) -> int:
    cache_dir = args.cache_dir or cache_mod.default_cache_dir()
    records = cache_mod.load_all(cache_dir)
    rows = _report_rows(records)
    if not rows:
        print("no results in cache")
        return EXIT_OK
    if args.format == "json":
        _emit({"schema_version": SCHEMA_VERSION, "rows": rows})
        return EXIT_OK
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_HEADER)
        writer.writeheader()
        for r in rows:
            writer.writerow({k: r[k] for k in CSV_HEADER})
        sys.stdout.write(buf.getvalue())
        return EXIT_OK
    widths = {k: max(len(k), *(len(str(r[k])) for r in rows)) for k in CSV_HEADER}
    print("  ".join(k.ljust(widths[k]) for k in CSV_HEADER))
    for r in rows:
        print("  ".join(str(r[k]).ljust(widths[k]) for k in CSV_HEADER))
    return EXIT_OK


# ---------------------------------------------------------------------------

_DISPATCH = {
    ("group", "info"): cmd_group_info,
    ("free", "check"): cmd_free_check,
    ("reach", None): cmd_reach,
    ("davenport", None): cmd_davenport,
    ("extremal", None): cmd_extremal,
    ("verify", None): cmd_verify,
    ("report", None): cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _DISPATCH[(args.command, getattr(args, "subcommand", None))]
    try:
        return handler(args)
    except BudgetExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GroupError, SequenceError, EngineError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
