"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.

`prove` runs witness generation and checks every constraint; it is a
satisfiability attestation, not a cryptographic proof.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from .field_cs import COUNT, ConstraintSystem
from .ieee import PRECISIONS

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _precision(name: str, allowed=("fp32", "fp64")):
    if name not in allowed:
        raise UsageError(f"precision must be one of {', '.join(allowed)}")
    return PRECISIONS[name]


def _res(res: int) -> int:
    if not 0 <= res <= 15:
        raise UsageError("resolution must be in [0, 15]")
    return res


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


# --- subcommands -----------------------------------------------------------------

def cmd_prove(args) -> int:
    from .circuit import build_zklp_circuit, public_record
    from .geo import IjkCoord, h3_cell_id

    fp = _precision(args.precision)
    res = _res(args.res)
    if not (-90 <= args.lat <= 90 and -180 <= args.lng <= 180):
        raise UsageError("latitude must be in [-90, 90] and longitude in [-180, 180]")
    circ = build_zklp_circuit(fp, chunk_bits=args.table_bits)
    t0 = time.perf_counter()
    out = circ.run_degrees(args.lat, args.lng, res)
    elapsed = time.perf_counter() - t0
    rep = out.report
    print("# zklp-attestation v1 (witness satisfiability check, not a cryptographic proof)")
    face, i, j, k = int(out.face[0]), int(out.i[0]), int(out.j[0]), int(out.k[0])
    print(public_record(res, face, i, j, k))
    if rep.satisfied:
        print(f"h3_index: {h3_cell_id(IjkCoord(face, i, j, k, res))}")
    print(f"precision: {fp.name}")
    print(f"native_constraints: {rep.native_constraints}")
    print(f"lookup_constraints: {rep.lookup_constraints}")
    print(f"variables: {rep.num_variables}")
    print(f"witness_seconds: {elapsed:.3f}")
    print(f"satisfied: {'true' if rep.satisfied else 'false'}")
    if not rep.satisfied:
        print(f"first_failing_constraint: {rep.first_failing()}")
        return EXIT_FAIL
    return EXIT_OK


def cmd_gen_vectors(args) -> int:
    from .vectors import BINARY_OPS, UNARY_OPS, generate_float_vectors, verify_vectors, write_vectors

    fp = _precision(args.precision, ("fp16", "fp32", "fp64"))
    ops = list(BINARY_OPS + UNARY_OPS) if args.op == "all" else [args.op]
    vectors = []
    for op in ops:
        if op not in BINARY_OPS + UNARY_OPS:
            raise UsageError(f"unknown op {op!r}")
        vs = generate_float_vectors(op, fp, args.seed, args.count)
        bad = verify_vectors(vs, fp)
        if bad:
            print(f"{op}: {len(bad)} vectors disagree with the exact oracle", file=sys.stderr)
            return EXIT_FAIL
        vectors += vs
    write_vectors(vectors, fp, args.out)
    print(f"wrote {len(vectors)} vectors to {args.out}")
    return EXIT_OK


def cmd_testfloat(args) -> int:
    from .testfloat import run_vectors
    from .vectors import generate_float_vectors, read_vectors

    if args.vectors:
        try:
            fmt, it = read_vectors(args.vectors)
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        fp = _precision(fmt, ("fp16", "fp32", "fp64"))
        vectors = list(it)
        if args.op != "all":
            vectors = [v for v in vectors if v[0] == args.op]
    else:
        fp = _precision(args.precision, ("fp16", "fp32", "fp64"))
        from .vectors import BINARY_OPS, UNARY_OPS
        ops = list(BINARY_OPS + UNARY_OPS) if args.op == "all" else [args.op]
        vectors = [v for op in ops for v in generate_float_vectors(op, fp, args.seed, args.count)]
    results = run_vectors(vectors, fp, chunk=args.batch)
    ok = True
    print(f"# zklp-testfloat v1 precision={fp.name}")
    for op, r in results.items():
        print(f"{op:<5} {r.passed}/{r.total} pass, {r.unsatisfied} unsatisfied")
        for f in r.failures[: args.show]:
            print("    failure: " + " ".join(f"{x:x}" if isinstance(x, int) and not isinstance(x, bool) else str(x)
                                            for x in f[1:]))
        ok &= r.ok
    return EXIT_OK if ok else EXIT_FAIL


def bench_rows(op: str, fp, batches: list[int], table_bits: list[int]) -> list[tuple]:
    from . import float_gadgets as fg

    unary = op == "sqrt"
    fn = {"add": fg.add, "sub": fg.sub, "mul": fg.mul, "div": fg.div, "sqrt": fg.sqrt,
          "less": fg.less_than}[op]
    rows = []
    for T in table_bits:
        for k in batches:
            cs = ConstraintSystem(COUNT, chunk_bits=T, k_max=fp.k_max, keep=False)
            for _ in range(k):
                x = fg.float_input(cs, None, fp)
                if unary:
                    fn(cs, x)
                else:
                    fn(cs, x, fg.float_input(cs, None, fp))
            rep = cs.finalize()
            rows.append((T, k, rep.native_constraints, rep.lookup_constraints, rep.total_constraints,
                         rep.total_constraints / k))
    return rows


def cmd_bench(args) -> int:
    fp = _precision(args.precision, ("fp16", "fp32", "fp64"))
    if args.op not in ("add", "sub", "mul", "div", "sqrt", "less"):
        raise UsageError(f"unknown op {args.op!r}")
    batches = _int_list(args.batches)
    tables = _int_list(args.table_bits)
    if not batches or min(batches) < 1 or not tables or not all(1 <= t <= 20 for t in tables):
        raise UsageError("batch sizes must be >= 1 and table bits in [1, 20]")
    print(f"# zklp-bench v1 op={args.op} precision={fp.name} (inputs decoded from raw bits)")
    print(f"{'T':>3} {'k':>7} {'native':>10} {'lookup':>10} {'total':>10} {'per_op':>9}")
    for T, k, nat, lk, tot, per in bench_rows(args.op, fp, batches, tables):
        print(f"{T:>3} {k:>7} {nat:>10} {lk:>10} {tot:>10} {per:>9.2f}")
    return EXIT_OK


def cmd_corpus(args) -> int:
    from .geo import generate_corpus, write_corpus

    res = _int_list(args.resolutions) if args.resolutions else list(range(16))
    for r in res:
        _res(r)
    recs = generate_corpus(args.seed, res)
    write_corpus(recs, args.out, args.seed)
    print(f"wrote {len(recs)} records to {args.out}")
    return EXIT_OK


def cmd_zklp_suite(args) -> int:
    from .circuit import evaluate_corpus
    from .geo import generate_corpus, read_corpus

    fp = _precision(args.precision)
    if args.corpus:
        try:
            recs = list(read_corpus(args.corpus))
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from None
    else:
        recs = generate_corpus(args.seed)
    if args.limit:
        # keep every resolution and distance represented
        recs = [r for n, r in enumerate(recs) if n % 100 < args.limit]
    rep = evaluate_corpus(recs, fp, batch=args.batch)
    sys.stdout.write(rep.table())
    if args.timing:
        n = sum(rep.total.values())
        print(f"witness_seconds_per_point: {rep.seconds / max(n, 1):.4f}")
    if not rep.all_satisfied():
        return EXIT_FAIL
    if fp.name == "fp64" and not rep.all_agree():
        return EXIT_FAIL
    return EXIT_OK


def _parse_cell(text: str):
    from .geo import IjkCoord

    parts = text.replace(",", " ").split()
    if len(parts) != 5:
        raise UsageError("cell must be 'res face i j k'")
    try:
        res, face, i, j, k = (int(x) for x in parts)
    except ValueError:
        raise UsageError("cell fields must be integers") from None
    _res(res)
    if not 0 <= face < 20 or min(i, j, k) < 0 or min(i, j, k) != 0:
        raise UsageError("cell must have face in [0, 20) and normalized i, j, k")
    return IjkCoord(face, i, j, k, res)


def cmd_proximity(args) -> int:
    from .geo import GeoPoint, min_distance_to_hex

    if not (-90 <= args.lat <= 90 and -180 <= args.lng <= 180):
        raise UsageError("latitude must be in [-90, 90] and longitude in [-180, 180]")
    if args.radius <= 0 or not math.isfinite(args.radius):
        raise UsageError("radius must be positive")
    cell = _parse_cell(args.cell)
    d = min_distance_to_hex(GeoPoint.from_degrees(args.lat, args.lng), cell, args.radius)
    print(f"min_vertex_distance_km: {d:.6f}")
    return EXIT_OK


# --- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    from .geo import EARTH_RADIUS_KM

    p = argparse.ArgumentParser(prog="zklp", description="Trig-free location circuit and float gadget tools.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("prove", help="witness generation + satisfaction check for one point")
    s.add_argument("--lat", type=float, required=True, help="latitude in degrees")
    s.add_argument("--lng", type=float, required=True, help="longitude in degrees")
    s.add_argument("--res", type=int, required=True)
    s.add_argument("--precision", default="fp64")
    s.add_argument("--table-bits", type=int, default=8, help="range-check table size 2^T")
    s.set_defaults(fn=cmd_prove)

    s = sub.add_parser("gen-vectors", help="write float test vectors")
    s.add_argument("--op", default="all")
    s.add_argument("--precision", default="fp32")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=None)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_gen_vectors)

    s = sub.add_parser("testfloat", help="run float vectors through the gadgets")
    s.add_argument("--op", default="all")
    s.add_argument("--vectors", help="vector file (otherwise vectors are generated)")
    s.add_argument("--precision", default="fp32")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=None)
    s.add_argument("--batch", type=int, default=4096)
    s.add_argument("--show", type=int, default=5, help="failures to print per op")
    s.set_defaults(fn=cmd_testfloat)

    s = sub.add_parser("bench", help="constraint counts and amortization")
    s.add_argument("--op", default="mul")
    s.add_argument("--precision", default="fp32")
    s.add_argument("--batches", default="2,32,1024,32768")
    s.add_argument("--table-bits", default="8")
    s.set_defaults(fn=cmd_bench)

    s = sub.add_parser("corpus", help="generate the location test corpus")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--resolutions", default="")
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_corpus)

    s = sub.add_parser("zklp-suite", help="differential test of the circuit against the reference")
    s.add_argument("--precision", default="fp64")
    s.add_argument("--corpus", help="corpus file (otherwise generated from --seed)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--limit", type=int, default=0, help="points per (res, distance), 0 for all")
    s.add_argument("--batch", type=int, default=256)
    s.add_argument("--timing", action="store_true")
    s.set_defaults(fn=cmd_zklp_suite)

    s = sub.add_parser("proximity", help="min Haversine distance to a cell's vertices")
    s.add_argument("--lat", type=float, required=True)
    s.add_argument("--lng", type=float, required=True)
    s.add_argument("--cell", required=True, help="'res face i j k'")
    s.add_argument("--radius", type=float, default=EARTH_RADIUS_KM, help="sphere radius in km")
    s.set_defaults(fn=cmd_proximity)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"zklp {args.cmd}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
