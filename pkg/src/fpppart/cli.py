"""Command-line front end.

    fpppart plane --q 3
    fpppart gen random --vertices 1000 --edges 20000 --seed 1 --output g.txt
    fpppart partition --method dfpp --parts 7 --input g.txt --output g.parts
    fpppart metrics --input g.parts --parts 7
    fpppart verify --suite default
    fpppart bench --methods fpp,edge2d --graph random:10000:100000 --parts 381
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path

import numpy as np

from .errors import FppError
from .graph_io import (
    gen_complete,
    gen_preferential,
    gen_random,
    read_assignments,
    read_edge_list,
    write_edge_list,
)
from .metrics import MetricsAccumulator, check_constrained_bound
from .partitioners import (
    Method,
    Partitioner,
    PartitionerConfig,
    SurplusPolicy,
    assign_chunks,
    iter_chunks,
)
from .projective_plane import build_plane, check_plane_axioms, plane_to_dict

log = logging.getLogger("fpppart")

EXIT_FAIL = 1
EXIT_USAGE = 2


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:  # pragma: no cover
        return "0+unknown"


@dataclass
class RunManifest:
    command: str
    argv: list[str]
    config: dict
    input: dict
    outputs: dict
    timing: dict = field(default_factory=dict)
    version: str = field(default_factory=_version)

    def write(self, path):
        Path(path).write_text(json.dumps(asdict(self), indent=2) + "\n")


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _emit(text: str, path=None):
    if path and path != "-":
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_graph(spec: str):
    """``complete:M``, ``random:M:E[:SEED]``, ``preferential:M:D[:SEED]`` or a file path."""
    kind, _, rest = spec.partition(":")
    args = [int(x) for x in rest.split(":")] if rest else []
    if kind == "complete" and len(args) == 1:
        return gen_complete(*args)
    if kind == "random" and len(args) in (2, 3):
        return gen_random(*args)
    if kind == "preferential" and len(args) in (2, 3):
        return gen_preferential(*args)
    if Path(spec).exists():
        return read_edge_list(spec)
    raise FppError(f"cannot interpret graph spec {spec!r}")


# -- subcommands ---------------------------------------------------------------------

def cmd_plane(args) -> int:
    plane = build_plane(args.q)
    checks = check_plane_axioms(plane)
    out = plane_to_dict(plane)
    out["axioms"] = checks
    out["passed"] = all(checks.values())
    _emit(json.dumps(out) + "\n", args.output)
    for name, ok in checks.items():
        log.info("%s %s", "PASS" if ok else "FAIL", name)
    return 0 if out["passed"] else EXIT_FAIL


def _write_chunk(fh, fmt, us, vs, pids):
    if fmt == "bin":
        fh.write(np.stack([us, vs, pids.astype(np.uint64)], axis=1).astype("<u8").tobytes())
    else:
        fh.write("".join(f"{u}\t{v}\t{p}\n" for u, v, p in zip(us.tolist(), vs.tolist(), pids.tolist())))


def cmd_partition(args) -> int:
    timing = {}
    t0 = time.perf_counter()
    config = PartitionerConfig(Method(args.method), args.parts, args.seed, SurplusPolicy(args.surplus), args.hash_ids)
    part = Partitioner(config)
    timing["setup"] = time.perf_counter() - t0

    reader = read_edge_list(args.input, strict=args.strict)
    acc = MetricsAccumulator(args.parts, approximate=args.approx)
    t0 = time.perf_counter()
    out_path = args.output
    mode = "wb" if args.format == "bin" else "w"
    with open(out_path, mode) as fh:
        for us, vs, pids in assign_chunks(part, iter_chunks(reader), args.workers):
            _write_chunk(fh, args.format, us, vs, pids)
            acc.add_arrays(us, vs, pids)
    timing["partition"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    report = acc.report()
    result = report.to_dict()
    result["method"] = config.method.value
    result["plane"] = {"q": part.q, "n_used": part.n_used} if part.q else None
    result["skipped_lines"] = reader.skipped
    if not args.approx:
        chk = check_constrained_bound(config.method, config.parts, acc.vertex_replicas(), part.folding)
        result["bound"] = chk.to_dict()
    timing["metrics"] = time.perf_counter() - t0

    report_path = args.report or f"{out_path}.report.json"
    _emit(json.dumps(result, indent=2) + "\n", report_path)
    manifest = RunManifest(
        command="partition",
        argv=sys.argv[1:] if args.argv is None else args.argv,
        config={**config.to_dict(), "workers": args.workers, "format": args.format,
                "strict": args.strict, "approx": args.approx},
        input={"path": str(args.input), "sha256": _sha256(args.input), "edges": reader.read,
               "skipped": reader.skipped},
        outputs={"assignments": str(out_path), "sha256": _sha256(out_path), "report": str(report_path)},
        timing=timing,
    )
    manifest.write(args.manifest or f"{out_path}.manifest.json")
    print(f"{config.method.value} parts={config.parts} edges={report.edges} "
          f"B={report.balance:.4f} RF={report.rf:.4f} max_replicas={report.max_replicas}")
    return 0 if result.get("bound", {}).get("passed", True) else EXIT_FAIL


def cmd_metrics(args) -> int:
    acc = MetricsAccumulator(args.parts, approximate=args.approx)
    batch = []
    for rec in read_assignments(args.input, args.format):
        batch.append(rec)
        if len(batch) >= 1 << 16:
            acc.add_arrays(*np.array(batch, dtype=np.uint64).T)
            batch = []
    if batch:
        acc.add_arrays(*np.array(batch, dtype=np.uint64).T)
    report = acc.report()
    if args.csv:
        _emit(report.to_csv(), args.output)
    else:
        _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.output)
    return 0


def cmd_verify(args) -> int:
    from .verify import run_suite

    results = run_suite(args.suite)
    failed = [r for r in results if not r.passed]
    for r in results:
        if args.verbose or not r.passed:
            print(r.line())
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAIL if failed else 0


def cmd_bench(args) -> int:
    from .verify import _edges_array

    us, vs = _edges_array(_parse_graph(args.graph))
    methods = [Method(m) for m in args.methods.split(",")]
    parts = [int(p) for p in args.parts.split(",")]
    rows = []
    for method in methods:
        for n in parts:
            cfg = PartitionerConfig(method, n, args.seed)
            t0 = time.perf_counter()
            part = Partitioner(cfg)
            acc = MetricsAccumulator(n)
            for cu, cv, pids in assign_chunks(part, iter_chunks([(us, vs)]), args.workers):
                acc.add_arrays(cu, cv, pids)
            elapsed = time.perf_counter() - t0
            rep = acc.report()
            rows.append([method.value, n, f"{elapsed:.4f}", f"{rep.balance:.6f}", f"{rep.rf:.6f}"])
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["method", "parts", "partition_seconds", "balance", "rf"])
        w.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_gen(args) -> int:
    if args.kind == "complete":
        edges = gen_complete(args.vertices)
    elif args.kind == "random":
        edges = gen_random(args.vertices, args.edges, args.seed)
    else:
        edges = gen_preferential(args.vertices, args.degree, args.seed)
    if args.output:
        n = write_edge_list(edges, args.output)
        log.info("wrote %d edges to %s", n, args.output)
    else:
        for u, v in edges:
            sys.stdout.write(f"{u} {v}\n")
    return 0


# -- argument parsing ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fpppart", description="Projective-plane vertex-cut graph partitioning")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plane", help="dump PG(2,q) as JSON and check its axioms")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_plane)

    p = sub.add_parser("partition", help="assign the edges of an edge list to partitions")
    p.add_argument("--method", choices=[m.value for m in Method], required=True)
    p.add_argument("--parts", type=int, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--surplus", choices=[s.value for s in SurplusPolicy], default=SurplusPolicy.LEAVE_EMPTY.value)
    p.add_argument("--hash-ids", action="store_true", help="mix vertex ids before hashing to subsets")
    p.add_argument("--format", choices=["tsv", "bin"], default="tsv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--strict", action="store_true", help="abort on malformed input lines")
    p.add_argument("--approx", action="store_true", help="sketch vertex sets (approximate RF)")
    p.add_argument("--report", help="metrics JSON path (default: OUTPUT.report.json)")
    p.add_argument("--manifest", help="manifest path (default: OUTPUT.manifest.json)")
    p.set_defaults(func=cmd_partition, argv=None)

    p = sub.add_parser("metrics", help="compute balance and replication factor of an assignment file")
    p.add_argument("--input", required=True)
    p.add_argument("--parts", type=int, required=True)
    p.add_argument("--format", choices=["tsv", "bin"], default="tsv")
    p.add_argument("--csv", action="store_true", help="one CSV row per partition instead of JSON")
    p.add_argument("--approx", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("verify", help="run the bound and axiom verification suite")
    p.add_argument("--suite", default="default",
                   choices=["default", "example", "plane", "fpp", "baselines", "theorem2", "lower-bound",
                            "determinism"])
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="compare methods on one graph")
    p.add_argument("--methods", default="fpp,edge2d")
    p.add_argument("--graph", required=True, help="complete:M | random:M:E[:SEED] | preferential:M:D[:SEED] | PATH")
    p.add_argument("--parts", required=True, help="comma-separated partition counts")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="generate a synthetic edge list")
    p.add_argument("kind", choices=["complete", "random", "preferential"])
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--edges", type=int, default=0)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("FPPPART_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if args.command == "partition":
        args.argv = list(argv) if argv is not None else sys.argv[1:]
    try:
        return args.func(args)
    except (FppError, OSError) as exc:
        print(f"fpppart: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
