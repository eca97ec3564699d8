"""Command-line surface: counting, sampling, statistics, verification.

Every run emits a manifest (JSON on stderr, and next to the output file when
one is written) recording the command, seed, version, wall clock, and a
digest of each output, so identical (command, seed) reruns are checkable
byte for byte.  Exit codes: 0 success, 1 failed verification/assertion,
2 usage error.  The environment variable ``HOMWALK_SEED`` overrides
``--seed``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from collections import Counter

import numpy as np

from . import __version__
from .core import GraphSpec, HeightFunction, Topology, range_size
from .counting import enumerate_homomorphisms, hom_count_line
from .errors import HomwalkError


def _digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _emit_manifest(args, started: float, outputs: list[str]) -> None:
    manifest = {
        "command": sys.argv[1:],
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "wall_clock_s": round(time.time() - started, 3),
        "outputs": {path: _digest(path) for path in outputs},
    }
    line = json.dumps(manifest, sort_keys=True)
    print(line, file=sys.stderr)
    for path in outputs:
        with open(path + ".manifest.json", "w") as fh:
            fh.write(line + "\n")


def _graph_from_args(args) -> GraphSpec:
    return GraphSpec(Topology(args.graph), args.n, args.d)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_count(args) -> int:
    rows = []
    ns = range(args.n, (args.n_max or args.n) + 1)
    for n in ns:
        if args.graph == "line":
            rows.append((n, args.d, hom_count_line(n, args.d)))
        else:
            if n % 2:
                continue
            graph = GraphSpec(Topology.TORUS, n, args.d)
            rows.append((n, args.d, len(enumerate_homomorphisms(graph, args.cap))))
    text = "n,d,count\n" + "".join(f"{n},{d},{c}\n" for n, d, c in rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        return 0
    sys.stdout.write(text)
    return 0


def cmd_sample(args) -> int:
    from . import sampling

    graph = _graph_from_args(args)
    method = sampling.Method(args.method)
    config = sampling.SamplerConfig(graph, method, seed=args.seed, steps=args.steps or 0)

    def one(rep: int) -> HeightFunction:
        if method is sampling.Method.EXACT_DP:
            rng = sampling._python_rng(args.seed, rep)
            return sampling.exact_sample_line(graph.n, graph.d, rng)
        if method is sampling.Method.EXACT_TABLE:
            rng = sampling._python_rng(args.seed, rep)
            return sampling.exact_sample_table(graph, rng)
        if method is sampling.Method.GLAUBER:
            cfg = sampling.SamplerConfig(graph, method, seed=args.seed + rep * 1_000_003,
                                         steps=args.steps)
            return sampling.run_glauber(cfg)
        raise AssertionError

    if method is sampling.Method.CFTP:
        samples = sampling.cftp_samples(graph, args.reps, args.seed)
    elif args.jobs > 1 and method is not sampling.Method.GLAUBER:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            samples = list(pool.map(_SampleWorker(args), range(args.reps), chunksize=64))
    else:
        samples = [one(rep) for rep in range(args.reps)]

    lines = "".join(f.to_json() + "\n" for f in samples)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(lines)
    else:
        sys.stdout.write(lines)
    return 0


class _SampleWorker:
    """Picklable per-replication sampler for --jobs; replication rng depends
    only on (seed, rep), so scheduling does not affect output."""

    def __init__(self, args):
        self.graph_args = (args.graph, args.n, args.d)
        self.method = args.method
        self.seed = args.seed

    def __call__(self, rep: int) -> HeightFunction:
        from . import sampling

        graph = GraphSpec(Topology(self.graph_args[0]), *self.graph_args[1:])
        rng = sampling._python_rng(self.seed, rep)
        if self.method == "dp":
            return sampling.exact_sample_line(graph.n, graph.d, rng)
        return sampling.exact_sample_table(graph, rng)


def cmd_stats(args) -> int:
    functions: list[HeightFunction] = []
    with open(args.infile) as fh:
        for raw in fh:
            raw = raw.strip()
            if raw:
                functions.append(HeightFunction.from_json(raw))
    if not functions:
        print("error: no samples in input", file=sys.stderr)
        return 2
    size = len(functions[0].values)
    if any(len(f.values) != size for f in functions):
        print("error: mixed sample lengths", file=sys.stderr)
        return 2
    ranges = Counter(range_size(f) for f in functions)
    values = np.array([f.values for f in functions], dtype=float)
    variances = values.var(axis=0)
    range_csv = "range,count\n" + "".join(
        f"{r},{ranges[r]}\n" for r in sorted(ranges)
    )
    var_csv = "vertex,variance\n" + "".join(
        f"{k},{float(variances[k])!r}\n" for k in range(size)
    )
    if args.out_prefix:
        with open(args.out_prefix + "_range.csv", "w") as fh:
            fh.write(range_csv)
        with open(args.out_prefix + "_variance.csv", "w") as fh:
            fh.write(var_csv)
    else:
        sys.stdout.write("# range histogram\n" + range_csv)
        sys.stdout.write("# pointwise variance\n" + var_csv)
    return 0


def cmd_locallimit(args) -> int:
    from .locallimit import build_chain, sample_prefix

    law = build_chain(args.d)
    lines = []
    for rep in range(args.reps):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=args.seed, spawn_key=(rep,)))
        f = sample_prefix(law, args.length, rng)
        lines.append(f.to_json() + "\n")
    text = "".join(lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    from . import verify

    try:
        results = verify.run_suite(args.suite, lam=args.lam, fast=args.fast)
    except KeyError:
        print(f"error: unknown suite {args.suite!r}; choose from "
              f"{', '.join(verify.SUITES)}", file=sys.stderr)
        return 2
    failed = 0
    for res in results:
        print(res.report_line())
        if not res.passed:
            failed += 1
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="homwalk",
                                description="Long-range constrained random height functions.")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("count", help="exact counts as CSV (n,d,count)")
    c.add_argument("--graph", choices=["line", "torus"], required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--n-max", type=int, default=None, help="count a range of n")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--cap", type=int, default=2 ** 24,
                   help="enumeration cap for torus counts")
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_count)

    s = sub.add_parser("sample", help="draw samples as JSONL")
    s.add_argument("--graph", choices=["line", "torus"], required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--method", choices=["dp", "table", "glauber", "cftp"], required=True)
    s.add_argument("--steps", type=int, default=None, help="updates per Glauber run")
    s.add_argument("--reps", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jobs", type=int, default=1,
                   help="parallel workers for independent replications")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_sample)

    st = sub.add_parser("stats", help="range histogram and pointwise variance from JSONL")
    st.add_argument("--in", dest="infile", required=True)
    st.add_argument("--out-prefix", default=None)
    st.set_defaults(func=cmd_stats)

    ll = sub.add_parser("locallimit", help="sample prefixes of the infinite-line limit")
    ll.add_argument("--d", type=int, required=True)
    ll.add_argument("--len", dest="length", type=int, required=True)
    ll.add_argument("--reps", type=int, default=1)
    ll.add_argument("--seed", type=int, default=0)
    ll.add_argument("--out", default=None)
    ll.set_defaults(func=cmd_locallimit)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite")
    v.add_argument("--lambda", dest="lam", type=float, default=1.0,
                   help="target n*2^-d for the critical suite")
    v.add_argument("--fast", action="store_true",
                   help="reduced replication counts (smoke check)")
    v.set_defaults(func=cmd_verify)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if "HOMWALK_SEED" in os.environ and hasattr(args, "seed"):
        args.seed = int(os.environ["HOMWALK_SEED"])
    started = time.time()
    try:
        code = args.func(args)
    except HomwalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    outputs = []
    for attr in ("out", "out_prefix"):
        val = getattr(args, attr, None)
        if val:
            if attr == "out_prefix":
                outputs.extend(
                    p for p in (val + "_range.csv", val + "_variance.csv")
                    if os.path.exists(p)
                )
            elif os.path.exists(val):
                outputs.append(val)
    _emit_manifest(args, started, outputs)
    return code


if __name__ == "__main__":
    sys.exit(main())
